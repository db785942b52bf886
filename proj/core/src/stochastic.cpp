#include "banditlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "banditlab/concentration.hpp"

namespace banditlab::stochastic {

using concentration::hoeffding_radius;

ArmIndex ArmStats::best_mean_arm() const {
  ArmIndex best = 0;
  for (std::size_t a = 1; a < pulls.size(); ++a)
    if (mean(static_cast<ArmIndex>(a)) > mean(best)) best = static_cast<ArmIndex>(a);
  return best;
}

ArmDistribution ArmDistribution::bernoulli(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("bernoulli: mean must be in [0,1]");
  return ArmDistribution{{1.0, 0.0}, {mu, 1.0 - mu}};
}

ArmDistribution ArmDistribution::point_mass(double value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw std::invalid_argument("point_mass: value must be in [0,1]");
  return ArmDistribution{{value}, {1.0}};
}

ArmDistribution ArmDistribution::finite(std::vector<double> values, std::vector<double> probs) {
  if (values.size() != probs.size() || values.empty())
    throw std::invalid_argument("finite: values/probs mismatch");
  double sum = 0.0;
  for (double v : values)
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("finite: support must be in [0,1]");
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("finite: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("finite: probs must sum to 1");
  return ArmDistribution{std::move(values), std::move(probs)};
}

double ArmDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probs[i];
  return m;
}

double ArmDistribution::sample(RngStream& rng) const {
  if (values.size() == 1) return values[0];
  return values[rng.categorical(probs)];
}

StochasticEnvSpec StochasticEnvSpec::bernoulli(std::vector<double> means) {
  StochasticEnvSpec spec;
  for (double m : means) spec.arms.push_back(ArmDistribution::bernoulli(m));
  return spec;
}

StochasticEnvSpec StochasticEnvSpec::deterministic(std::vector<double> values) {
  StochasticEnvSpec spec;
  for (double v : values) spec.arms.push_back(ArmDistribution::point_mass(v));
  return spec;
}

std::vector<double> StochasticEnvSpec::means() const {
  std::vector<double> m;
  m.reserve(arms.size());
  for (const auto& a : arms) m.push_back(a.mean());
  return m;
}

StochasticEnv::StochasticEnv(StochasticEnvSpec spec) : spec_(std::move(spec)) {
  if (spec_.arms.empty()) throw std::invalid_argument("StochasticEnv: no arms");
}

Feedback StochasticEnv::step(ArmIndex arm, RngStream& rng) {
  std::vector<double> row(spec_.arms.size());
  for (std::size_t a = 0; a < spec_.arms.size(); ++a) row[a] = spec_.arms[a].sample(rng);
  const double chosen = row.at(arm);
  last_row_ = std::move(row);
  return BanditReward{chosen};
}

// ---------------------------------------------------------------------------
// Explore-first

namespace {

class ExploreFirstAgent final : public Agent {
 public:
  ExploreFirstAgent(int num_arms, int horizon, long long budget)
      : k_(num_arms), horizon_(horizon), budget_(budget), stats_(num_arms) {
    if (k_ < 1) throw std::invalid_argument("explore_first: need at least one arm");
    if (budget_ < 1) throw std::invalid_argument("explore_first: budget must be >= 1");
    if (budget_ * k_ > horizon_)
      throw std::invalid_argument("explore_first: N*K exceeds the horizon");
  }

  int num_arms() const override { return k_; }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }

  ArmIndex act(RngStream&) override {
    ++round_;
    if (round_ <= budget_ * k_) {
      last_arm_ = static_cast<ArmIndex>((round_ - 1) % k_);
      return last_arm_;
    }
    if (!committed_) {
      committed_arm_ = stats_.best_mean_arm();
      committed_ = true;
    }
    last_arm_ = committed_arm_;
    return last_arm_;
  }

  void observe(const Feedback& fb) override {
    if (!committed_) stats_.record(last_arm_, std::get<BanditReward>(fb).value);
  }

 private:
  int k_;
  long long horizon_;
  long long budget_;
  ArmStats stats_;
  long long round_ = 0;
  ArmIndex last_arm_ = 0;
  bool committed_ = false;
  ArmIndex committed_arm_ = 0;
};

}  // namespace

std::unique_ptr<Agent> explore_first(int num_arms, int horizon, long long per_arm_budget) {
  return std::make_unique<ExploreFirstAgent>(num_arms, horizon, per_arm_budget);
}

long long explore_first_default_budget(int num_arms, int horizon) {
  if (num_arms < 1 || horizon < 2) throw std::invalid_argument("explore_first_default_budget");
  const double t = static_cast<double>(horizon);
  const double raw = std::pow(t / num_arms, 2.0 / 3.0) * std::cbrt(std::log(t));
  return std::max<long long>(1, static_cast<long long>(std::floor(raw)));
}

// ---------------------------------------------------------------------------
// Epsilon-greedy

double epsilon_greedy_schedule(int num_arms, long long t) {
  if (t <= 1) return 1.0;  // ln 1 = 0 would kill round-1 exploration
  const double raw =
      std::pow(static_cast<double>(t), -1.0 / 3.0) * std::cbrt(num_arms * std::log(static_cast<double>(t)));
  return std::min(1.0, raw);
}

namespace {

class EpsilonGreedyAgent final : public Agent {
 public:
  explicit EpsilonGreedyAgent(int num_arms) : k_(num_arms), stats_(num_arms) {
    if (k_ < 1) throw std::invalid_argument("epsilon_greedy: need at least one arm");
  }

  int num_arms() const override { return k_; }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }

  ArmIndex act(RngStream& rng) override {
    ++round_;
    const double eps = epsilon_greedy_schedule(k_, round_);
    last_arm_ = rng.bernoulli(eps) ? rng.uniform_int(k_) : stats_.best_mean_arm();
    return last_arm_;
  }

  void observe(const Feedback& fb) override {
    stats_.record(last_arm_, std::get<BanditReward>(fb).value);
  }

 private:
  int k_;
  ArmStats stats_;
  long long round_ = 0;
  ArmIndex last_arm_ = 0;
};

// ---------------------------------------------------------------------------
// Successive Elimination

class SuccessiveEliminationAgent final : public Agent {
 public:
  SuccessiveEliminationAgent(int num_arms, int horizon)
      : k_(num_arms), horizon_(horizon), stats_(num_arms), active_(num_arms, true) {
    if (k_ < 1) throw std::invalid_argument("successive_elimination: need at least one arm");
    if (horizon_ < 2) throw std::invalid_argument("successive_elimination: horizon must be >= 2");
    for (int a = 0; a < k_; ++a) pass_order_.push_back(a);
  }

  int num_arms() const override { return k_; }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }

  ArmIndex act(RngStream&) override {
    if (cursor_ >= pass_order_.size()) {
      deactivate_losers();
      rebuild_pass();
    }
    last_arm_ = pass_order_[cursor_++];
    return last_arm_;
  }

  void observe(const Feedback& fb) override {
    stats_.record(last_arm_, std::get<BanditReward>(fb).value);
  }

  const std::vector<bool>& active() const { return active_; }

 private:
  void deactivate_losers() {
    double best_lcb = -1.0;
    for (int a = 0; a < k_; ++a) {
      if (!active_[a] || stats_.pulls[a] == 0) continue;
      const double lcb = stats_.mean(a) - hoeffding_radius(stats_.pulls[a], horizon_);
      best_lcb = std::max(best_lcb, lcb);
    }
    int remaining = 0;
    for (int a = 0; a < k_; ++a)
      if (active_[a]) ++remaining;
    for (int a = 0; a < k_ && remaining > 1; ++a) {
      if (!active_[a] || stats_.pulls[a] == 0) continue;
      const double ucb = stats_.mean(a) + hoeffding_radius(stats_.pulls[a], horizon_);
      if (ucb < best_lcb) {
        active_[a] = false;
        --remaining;
      }
    }
  }

  void rebuild_pass() {
    pass_order_.clear();
    for (int a = 0; a < k_; ++a)
      if (active_[a]) pass_order_.push_back(a);
    cursor_ = 0;
  }

  int k_;
  long long horizon_;
  ArmStats stats_;
  std::vector<bool> active_;
  std::vector<ArmIndex> pass_order_;
  std::size_t cursor_ = 0;
  ArmIndex last_arm_ = 0;
};

// ---------------------------------------------------------------------------
// UCB1

class Ucb1Agent final : public Agent {
 public:
  Ucb1Agent(int num_arms, int horizon) : k_(num_arms), horizon_(horizon), stats_(num_arms) {
    if (k_ < 1) throw std::invalid_argument("ucb1: need at least one arm");
    if (horizon_ < k_) throw std::invalid_argument("ucb1: horizon must cover one pull per arm");
    if (horizon_ < 2) throw std::invalid_argument("ucb1: horizon must be >= 2");
  }

  int num_arms() const override { return k_; }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }

  ArmIndex act(RngStream&) override {
    ++round_;
    if (round_ <= k_) {
      last_arm_ = static_cast<ArmIndex>(round_ - 1);
      return last_arm_;
    }
    ArmIndex best = 0;
    double best_index = ucb1_index(stats_.mean(0), stats_.pulls[0], static_cast<int>(horizon_));
    for (int a = 1; a < k_; ++a) {
      const double idx = ucb1_index(stats_.mean(a), stats_.pulls[a], static_cast<int>(horizon_));
      if (idx > best_index) {
        best_index = idx;
        best = a;
      }
    }
    last_arm_ = best;
    return last_arm_;
  }

  void observe(const Feedback& fb) override {
    stats_.record(last_arm_, std::get<BanditReward>(fb).value);
  }

 private:
  int k_;
  long long horizon_;
  ArmStats stats_;
  long long round_ = 0;
  ArmIndex last_arm_ = 0;
};

}  // namespace

std::unique_ptr<Agent> epsilon_greedy(int num_arms) {
  return std::make_unique<EpsilonGreedyAgent>(num_arms);
}

std::unique_ptr<Agent> successive_elimination(int num_arms, int horizon) {
  return std::make_unique<SuccessiveEliminationAgent>(num_arms, horizon);
}

std::unique_ptr<Agent> ucb1(int num_arms, int horizon) {
  return std::make_unique<Ucb1Agent>(num_arms, horizon);
}

double ucb1_index(double mean, long long pulls, int horizon) {
  return mean + hoeffding_radius(pulls, horizon);
}

ArmIndex most_pulled_arm(const History& history, int num_arms) {
  std::vector<long long> counts(num_arms, 0);
  for (const auto& rec : history.records()) ++counts.at(rec.arm);
  ArmIndex best = 0;
  for (int a = 1; a < num_arms; ++a)
    if (counts[a] > counts[best]) best = a;
  return best;
}

}  // namespace banditlab::stochastic
