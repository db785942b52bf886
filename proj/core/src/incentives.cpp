#include "banditlab/incentives.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace banditlab::incentives {

namespace {

double bernoulli_pmf(double mu, int r) { return r == 1 ? mu : 1.0 - mu; }

}  // namespace

double TwoArmPrior::prior_mean(int arm) const {
  double m = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) m += probs[i] * support[i][arm];
  return m;
}

TwoArmPrior TwoArmPrior::make(std::vector<std::array<double, 2>> support,
                              std::vector<double> probs) {
  if (support.empty() || support.size() != probs.size())
    throw std::invalid_argument("TwoArmPrior: support/probs mismatch");
  double sum = 0.0;
  for (const auto& mu : support)
    for (double m : mu)
      if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("TwoArmPrior: means in [0,1]");
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("TwoArmPrior: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("TwoArmPrior: probs must sum to 1");

  TwoArmPrior prior;
  prior.support = std::move(support);
  prior.probs = std::move(probs);
  if (prior.prior_mean(0) < prior.prior_mean(1)) {
    for (auto& mu : prior.support) std::swap(mu[0], mu[1]);
    prior.swapped = true;
  }
  return prior;
}

TwoArmPrior TwoArmPrior::load(std::istream& in) {
  std::vector<std::array<double, 2>> support;
  std::vector<double> probs;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
    if (tag != "point") throw std::runtime_error("TwoArmPrior: unknown tag '" + tag + "'");
    double mu1, mu2, p;
    if (!(ls >> mu1 >> mu2 >> p)) throw std::runtime_error("TwoArmPrior: bad point line");
    support.push_back({mu1, mu2});
    probs.push_back(p);
  }
  return make(std::move(support), std::move(probs));
}

TwoArmPrior TwoArmPrior::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("TwoArmPrior: cannot open " + path);
  return load(in);
}

std::vector<double> posterior_over_support(const TwoArmPrior& prior,
                                           std::span<const std::pair<int, int>> history) {
  std::vector<double> w = prior.probs;
  for (const auto& [arm, r] : history) {
    if (arm != 0 && arm != 1) throw std::out_of_range("posterior_over_support: bad arm");
    if (r != 0 && r != 1) throw std::domain_error("posterior_over_support: rewards must be 0/1");
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= bernoulli_pmf(prior.support[i][arm], r);
  }
  double sum = 0.0;
  for (double x : w) sum += x;
  if (!(sum > 0.0))
    throw std::domain_error("posterior_over_support: history impossible under the prior");
  for (double& x : w) x /= sum;
  return w;
}

std::vector<double> posterior_over_support(const TwoArmPrior& prior,
                                           std::span<const int> arm0_samples) {
  std::vector<std::pair<int, int>> history;
  history.reserve(arm0_samples.size());
  for (int r : arm0_samples) history.emplace_back(0, r);
  return posterior_over_support(prior, history);
}

double posterior_gap(const TwoArmPrior& prior, std::span<const int> arm0_samples) {
  const auto post = posterior_over_support(prior, arm0_samples);
  double gap = 0.0;
  for (std::size_t i = 0; i < post.size(); ++i)
    gap += post[i] * (prior.support[i][1] - prior.support[i][0]);
  return gap;
}

double bic_epsilon_bound(const TwoArmPrior& prior, int n0) {
  if (n0 < 0) throw std::invalid_argument("bic_epsilon_bound: n0 must be >= 0");
  if (n0 > 30) throw std::invalid_argument("bic_epsilon_bound: n0 too large to enumerate");
  double bound = 0.0;
  std::vector<int> samples(n0, 0);
  const long long tuples = 1LL << n0;
  for (long long mask = 0; mask < tuples; ++mask) {
    for (int s = 0; s < n0; ++s) samples[s] = (mask >> s) & 1;
    // Pr[tuple] under the prior
    double prob = 0.0;
    for (std::size_t i = 0; i < prior.support.size(); ++i) {
      double lik = prior.probs[i];
      for (int s = 0; s < n0; ++s) lik *= bernoulli_pmf(prior.support[i][0], samples[s]);
      prob += lik;
    }
    if (prob == 0.0) continue;
    const double gap = posterior_gap(prior, samples);
    if (gap > 0.0) bound += prob * gap;
  }
  return bound / 3.0;
}

BicParams BicParams::checked(const TwoArmPrior& prior, int n0, double eps) {
  const double bound = bic_epsilon_bound(prior, n0);
  if (!(eps > 0.0) || eps > bound + 1e-12)
    throw std::invalid_argument("BicParams: eps must lie in (0, bic_epsilon_bound]");
  return BicParams{n0, eps};
}

int exploit_arm(const TwoArmPrior& prior, std::span<const std::pair<int, int>> signal) {
  const auto post = posterior_over_support(prior, signal);
  double mean0 = 0.0, mean1 = 0.0;
  for (std::size_t i = 0; i < post.size(); ++i) {
    mean0 += post[i] * prior.support[i][0];
    mean1 += post[i] * prior.support[i][1];
  }
  return mean1 > mean0 ? 1 : 0;  // min argmax
}

int hidden_exploration(std::span<const std::pair<int, int>> signal, double eps,
                       const ExploreFn& explore_fn, const TwoArmPrior& prior, RngStream& rng) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("hidden_exploration: bad eps");
  if (eps > 0.0 && rng.bernoulli(eps)) return explore_fn(signal);
  return exploit_arm(prior, signal);
}

RepeatedHiddenExplorationAgent::RepeatedHiddenExplorationAgent(TwoArmPrior prior, BicParams params,
                                                               ExploreFn inner)
    : prior_(std::move(prior)), params_(params), inner_(std::move(inner)) {
  if (!inner_) throw std::invalid_argument("repeated_hidden_exploration: missing inner algorithm");
}

ArmIndex RepeatedHiddenExplorationAgent::act(RngStream& rng) {
  ++round_;
  if (round_ <= params_.n0) {
    last_explored_ = true;  // initial exploration plays the preferred arm
    last_arm_ = 0;
    return last_arm_;
  }
  if (rng.bernoulli(params_.eps)) {
    last_explored_ = true;
    last_arm_ = inner_(exploration_);
  } else {
    last_explored_ = false;
    last_arm_ = exploit_arm(prior_, exploration_);
  }
  return last_arm_;
}

void RepeatedHiddenExplorationAgent::observe(const Feedback& fb) {
  const double value = std::get<BanditReward>(fb).value;
  if (value != 0.0 && value != 1.0)
    throw std::invalid_argument("repeated_hidden_exploration: rewards must be 0/1");
  if (last_explored_) exploration_.emplace_back(last_arm_, value == 1.0 ? 1 : 0);
}

std::unique_ptr<Agent> repeated_hidden_exploration(TwoArmPrior prior, BicParams params,
                                                   ExploreFn inner) {
  return std::make_unique<RepeatedHiddenExplorationAgent>(std::move(prior), params,
                                                          std::move(inner));
}

BayesianGreedyAgent::BayesianGreedyAgent(TwoArmPrior prior) : prior_(std::move(prior)) {}

ArmIndex BayesianGreedyAgent::act(RngStream&) {
  last_arm_ = exploit_arm(prior_, history_);
  played_[last_arm_] = true;
  return last_arm_;
}

void BayesianGreedyAgent::observe(const Feedback& fb) {
  const double value = std::get<BanditReward>(fb).value;
  if (value != 0.0 && value != 1.0)
    throw std::invalid_argument("bayesian_greedy: rewards must be 0/1");
  history_.emplace_back(last_arm_, value == 1.0 ? 1 : 0);
}

std::unique_ptr<Agent> bayesian_greedy(TwoArmPrior prior) {
  return std::make_unique<BayesianGreedyAgent>(std::move(prior));
}

// ---------------------------------------------------------------------------
// Enumerable algorithms

namespace {

class AlwaysArmAlgo final : public EnumerableRecAlgo {
 public:
  explicit AlwaysArmAlgo(int arm) : arm_(arm) {
    if (arm != 0 && arm != 1) throw std::invalid_argument("always_arm: arm must be 0 or 1");
  }
  int num_branches(int) const override { return 1; }
  double branch_prob(int, int) const override { return 1.0; }
  int recommend(std::span<const int>, std::span<const int>) const override { return arm_; }

 private:
  int arm_;
};

class BayesianGreedyEnum final : public EnumerableRecAlgo {
 public:
  explicit BayesianGreedyEnum(TwoArmPrior prior) : prior_(std::move(prior)) {}
  int num_branches(int) const override { return 1; }
  double branch_prob(int, int) const override { return 1.0; }

  int recommend(std::span<const int> branches, std::span<const int> rewards) const override {
    // replay the compliant trajectory
    std::vector<std::pair<int, int>> history;
    const int t = static_cast<int>(branches.size());
    for (int s = 1; s < t; ++s) {
      const int rec = exploit_arm(prior_, history);
      history.emplace_back(rec, rewards[s - 1]);
    }
    return exploit_arm(prior_, history);
  }

 private:
  TwoArmPrior prior_;
};

class RheEnum final : public EnumerableRecAlgo {
 public:
  RheEnum(TwoArmPrior prior, BicParams params, ExploreFn inner)
      : prior_(std::move(prior)), params_(params), inner_(std::move(inner)) {}

  int num_branches(int round) const override { return round <= params_.n0 ? 1 : 2; }
  double branch_prob(int round, int branch) const override {
    if (round <= params_.n0) return 1.0;
    return branch == 1 ? params_.eps : 1.0 - params_.eps;  // 1 = explore
  }

  int recommend(std::span<const int> branches, std::span<const int> rewards) const override {
    const int t = static_cast<int>(branches.size());
    // reconstruct the exploration history before round t
    std::vector<std::pair<int, int>> exploration;
    for (int s = 1; s < t; ++s) {
      const bool explored = s <= params_.n0 || branches[s - 1] == 1;
      if (!explored) continue;
      const int rec = s <= params_.n0 ? 0 : inner_(exploration);
      exploration.emplace_back(rec, rewards[s - 1]);
    }
    if (t <= params_.n0) return 0;
    if (branches[t - 1] == 1) return inner_(exploration);
    return exploit_arm(prior_, exploration);
  }

 private:
  TwoArmPrior prior_;
  BicParams params_;
  ExploreFn inner_;
};

}  // namespace

std::unique_ptr<EnumerableRecAlgo> always_arm(int arm) {
  return std::make_unique<AlwaysArmAlgo>(arm);
}

std::unique_ptr<EnumerableRecAlgo> bayesian_greedy_enumerable(TwoArmPrior prior) {
  return std::make_unique<BayesianGreedyEnum>(std::move(prior));
}

std::unique_ptr<EnumerableRecAlgo> repeated_hidden_exploration_enumerable(TwoArmPrior prior,
                                                                          BicParams params,
                                                                          ExploreFn inner) {
  return std::make_unique<RheEnum>(std::move(prior), params, std::move(inner));
}

BicVerdict bic_verify(const EnumerableRecAlgo& algo, const TwoArmPrior& prior, int horizon,
                      long long path_cap) {
  if (horizon < 1) throw std::invalid_argument("bic_verify: horizon must be >= 1");
  // path-count estimate: prod_t (branches * 2 reward outcomes)
  long double estimate = static_cast<long double>(prior.support.size());
  for (int t = 1; t <= horizon; ++t)
    estimate *= static_cast<long double>(algo.num_branches(t)) * 2.0L;
  if (estimate > static_cast<long double>(path_cap))
    throw std::length_error("bic_verify: enumeration exceeds the configured cap");

  // accumulators[t][a]: (sum of w * (mu_a - mu_other), sum of w)
  struct Accumulator {
    double weighted_diff = 0.0;
    double weight = 0.0;
  };
  std::vector<std::array<Accumulator, 2>> acc(horizon + 1);

  const std::size_t support_size = prior.support.size();
  std::vector<int> branches;
  std::vector<int> rewards;
  long long paths = 0;

  // w[i] = P(mu_i) * prod branch probs * prod reward likelihoods so far
  std::function<void(int, std::vector<double>)> recurse = [&](int t, std::vector<double> w) {
    if (t > horizon) {
      ++paths;
      return;
    }
    for (int branch = 0; branch < algo.num_branches(t); ++branch) {
      const double bp = algo.branch_prob(t, branch);
      if (bp == 0.0) continue;
      branches.push_back(branch);
      const int rec = algo.recommend(branches, rewards);
      if (rec != 0 && rec != 1) throw std::logic_error("bic_verify: recommendation out of range");

      std::vector<double> wb(support_size);
      for (std::size_t i = 0; i < support_size; ++i) wb[i] = w[i] * bp;
      // record the contribution of this (round, recommendation) event
      for (std::size_t i = 0; i < support_size; ++i) {
        acc[t][rec].weighted_diff +=
            wb[i] * (prior.support[i][rec] - prior.support[i][1 - rec]);
        acc[t][rec].weight += wb[i];
      }
      // branch on the realized reward of the recommended (= played) arm
      for (int r = 0; r <= 1; ++r) {
        std::vector<double> wr(support_size);
        double mass = 0.0;
        for (std::size_t i = 0; i < support_size; ++i) {
          wr[i] = wb[i] * bernoulli_pmf(prior.support[i][rec], r);
          mass += wr[i];
        }
        if (mass == 0.0) continue;
        rewards.push_back(r);
        recurse(t + 1, std::move(wr));
        rewards.pop_back();
      }
      branches.pop_back();
    }
  };

  std::vector<double> w0 = prior.probs;
  recurse(1, std::move(w0));

  BicVerdict verdict;
  verdict.pass = true;
  verdict.worst_margin = std::numeric_limits<double>::infinity();
  verdict.paths_enumerated = paths;
  for (int t = 1; t <= horizon; ++t) {
    for (int a = 0; a < 2; ++a) {
      if (acc[t][a].weight <= 0.0) continue;
      const double margin = acc[t][a].weighted_diff / acc[t][a].weight;
      if (margin < verdict.worst_margin) {
        verdict.worst_margin = margin;
        verdict.worst_round = t;
        verdict.worst_arm = a;
      }
      if (margin < -1e-12) verdict.pass = false;
    }
  }
  return verdict;
}

}  // namespace banditlab::incentives
