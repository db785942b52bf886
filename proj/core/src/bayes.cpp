#include "banditlab/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace banditlab::bayes {

using concentration::ProbVector;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log Pr[reward r | mean mu] for a Bernoulli arm.
double log_bernoulli(double mu, int r) {
  const double p = r == 1 ? mu : 1.0 - mu;
  return p > 0.0 ? std::log(p) : kNegInf;
}

ProbVector normalize_log(const std::vector<double>& logw) {
  const double peak = *std::max_element(logw.begin(), logw.end());
  if (peak == kNegInf)
    throw std::domain_error("posterior_update_finite: history impossible under the prior");
  std::vector<double> w(logw.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    w[i] = logw[i] == kNegInf ? 0.0 : std::exp(logw[i] - peak);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return ProbVector(std::move(w));
}

}  // namespace

FinitePrior::FinitePrior(std::vector<std::vector<double>> support_, std::vector<double> probs_)
    : support(std::move(support_)), probs(std::move(probs_)) {
  if (support.empty() || support.size() != probs.size())
    throw std::invalid_argument("FinitePrior: support/probs mismatch");
  const std::size_t k = support.front().size();
  if (k == 0) throw std::invalid_argument("FinitePrior: empty mean vectors");
  double sum = 0.0;
  for (const auto& mu : support) {
    if (mu.size() != k) throw std::invalid_argument("FinitePrior: ragged support");
    for (double m : mu)
      if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("FinitePrior: means must be in [0,1]");
  }
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("FinitePrior: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("FinitePrior: probs must sum to 1");
}

FinitePrior FinitePrior::product(const std::vector<std::vector<double>>& arm_values,
                                 const std::vector<std::vector<double>>& arm_probs) {
  if (arm_values.empty() || arm_values.size() != arm_probs.size())
    throw std::invalid_argument("FinitePrior::product: bad arguments");
  std::vector<std::vector<double>> support{{}};
  std::vector<double> probs{1.0};
  for (std::size_t a = 0; a < arm_values.size(); ++a) {
    if (arm_values[a].size() != arm_probs[a].size() || arm_values[a].empty())
      throw std::invalid_argument("FinitePrior::product: ragged arm supports");
    std::vector<std::vector<double>> next_support;
    std::vector<double> next_probs;
    for (std::size_t s = 0; s < support.size(); ++s) {
      for (std::size_t v = 0; v < arm_values[a].size(); ++v) {
        auto mu = support[s];
        mu.push_back(arm_values[a][v]);
        next_support.push_back(std::move(mu));
        next_probs.push_back(probs[s] * arm_probs[a][v]);
      }
    }
    support = std::move(next_support);
    probs = std::move(next_probs);
  }
  return FinitePrior(std::move(support), std::move(probs));
}

ProbVector posterior_update_finite(const FinitePrior& prior,
                                   const std::vector<std::pair<ArmIndex, int>>& observations) {
  std::vector<double> logw(prior.support.size());
  for (std::size_t i = 0; i < prior.support.size(); ++i)
    logw[i] = prior.probs[i] > 0.0 ? std::log(prior.probs[i]) : kNegInf;
  for (const auto& [arm, r] : observations) {
    if (r != 0 && r != 1)
      throw std::invalid_argument("posterior_update_finite: rewards must be 0 or 1");
    for (std::size_t i = 0; i < prior.support.size(); ++i) {
      if (logw[i] == kNegInf) continue;
      const auto& mu = prior.support[i];
      if (arm < 0 || static_cast<std::size_t>(arm) >= mu.size())
        throw std::out_of_range("posterior_update_finite: arm out of range");
      logw[i] += log_bernoulli(mu[arm], r);
    }
  }
  return normalize_log(logw);
}

ProbVector posterior_update_finite(const FinitePrior& prior, const History& history) {
  std::vector<std::pair<ArmIndex, int>> obs;
  obs.reserve(history.records().size());
  for (const auto& rec : history.records()) {
    const auto* br = std::get_if<BanditReward>(&rec.feedback);
    if (br == nullptr)
      throw std::invalid_argument("posterior_update_finite: history must be bandit rewards");
    if (br->value != 0.0 && br->value != 1.0)
      throw std::invalid_argument("posterior_update_finite: rewards must be 0 or 1");
    obs.emplace_back(rec.arm, br->value == 1.0 ? 1 : 0);
  }
  return posterior_update_finite(prior, obs);
}

BetaParams beta_bernoulli_update(BetaParams p, long long successes, long long failures) {
  if (successes < 0 || failures < 0)
    throw std::invalid_argument("beta_bernoulli_update: counts must be >= 0");
  return BetaParams{p.alpha + static_cast<double>(successes),
                    p.beta + static_cast<double>(failures)};
}

GaussianParams gaussian_update(GaussianParams prior, double obs_std, double sum, long long n) {
  if (!(obs_std > 0.0)) throw std::domain_error("gaussian_update: obs_std must be positive");
  if (n < 0) throw std::invalid_argument("gaussian_update: n must be >= 0");
  if (n == 0) return prior;
  const double prior_prec = 1.0 / (prior.std * prior.std);
  const double obs_prec = static_cast<double>(n) / (obs_std * obs_std);
  const double post_prec = prior_prec + obs_prec;
  const double post_mean = (prior_prec * prior.mean + sum / (obs_std * obs_std)) / post_prec;
  return GaussianParams{post_mean, std::sqrt(1.0 / post_prec)};
}

std::vector<double> best_arm_probabilities(const FinitePrior& prior,
                                           const ProbVector& posterior) {
  if (posterior.size() != prior.support.size())
    throw std::invalid_argument("best_arm_probabilities: size mismatch");
  std::vector<double> p(prior.num_arms(), 0.0);
  for (std::size_t i = 0; i < prior.support.size(); ++i) {
    const auto& mu = prior.support[i];
    ArmIndex best = 0;
    for (std::size_t a = 1; a < mu.size(); ++a)
      if (mu[a] > mu[best]) best = static_cast<ArmIndex>(a);
    p[best] += posterior[i];
  }
  return p;
}

ThompsonFiniteAgent::ThompsonFiniteAgent(FinitePrior prior) : prior_(std::move(prior)) {
  log_weights_.resize(prior_.support.size());
  for (std::size_t i = 0; i < prior_.support.size(); ++i)
    log_weights_[i] = prior_.probs[i] > 0.0 ? std::log(prior_.probs[i]) : kNegInf;
}

ProbVector ThompsonFiniteAgent::posterior() const { return normalize_log(log_weights_); }

ArmIndex ThompsonFiniteAgent::act(RngStream& rng) {
  const ProbVector post = posterior();
  const int i = rng.categorical(post.values());
  const auto& mu = prior_.support[i];
  ArmIndex best = 0;
  for (std::size_t a = 1; a < mu.size(); ++a)
    if (mu[a] > mu[best]) best = static_cast<ArmIndex>(a);
  last_arm_ = best;
  return best;
}

void ThompsonFiniteAgent::observe(const Feedback& fb) {
  const double value = std::get<BanditReward>(fb).value;
  if (value != 0.0 && value != 1.0)
    throw std::invalid_argument("thompson_finite: rewards must be 0 or 1");
  const int r = value == 1.0 ? 1 : 0;
  for (std::size_t i = 0; i < prior_.support.size(); ++i) {
    if (log_weights_[i] == kNegInf) continue;
    log_weights_[i] += log_bernoulli(prior_.support[i][last_arm_], r);
  }
}

std::unique_ptr<Agent> thompson_finite(FinitePrior prior) {
  return std::make_unique<ThompsonFiniteAgent>(std::move(prior));
}

namespace {

// Marsaglia-Tsang gamma sampler, shape >= 1.
double gamma_marsaglia_tsang(double shape, RngStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = std::max(rng.next_double(), 1e-300);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double gamma_draw(double shape, RngStream& rng) {
  if (shape < 1.0) {
    const double u = std::max(rng.next_double(), 1e-300);
    return gamma_marsaglia_tsang(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  return gamma_marsaglia_tsang(shape, rng);
}

}  // namespace

double sample_beta(BetaParams p, RngStream& rng) {
  const double x = gamma_draw(p.alpha, rng);
  const double y = gamma_draw(p.beta, rng);
  return x / (x + y);
}

ThompsonBetaAgent::ThompsonBetaAgent(int num_arms) : params_(num_arms, BetaParams{1.0, 1.0}) {
  if (num_arms < 1) throw std::invalid_argument("thompson_prior_free: need at least one arm");
}

ArmIndex ThompsonBetaAgent::act(RngStream& rng) {
  ArmIndex best = 0;
  double best_sample = -1.0;
  for (std::size_t a = 0; a < params_.size(); ++a) {
    const double s = sample_beta(params_[a], rng);
    if (s > best_sample) {
      best_sample = s;
      best = static_cast<ArmIndex>(a);
    }
  }
  last_arm_ = best;
  binarize_u_ = rng.next_double();  // coin for a possible non-binary reward
  return best;
}

void ThompsonBetaAgent::observe(const Feedback& fb) {
  const double r = std::get<BanditReward>(fb).value;
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("thompson_prior_free: rewards must be in [0,1]");
  int outcome;
  if (r == 0.0 || r == 1.0) {
    outcome = static_cast<int>(r);
  } else {
    outcome = binarize_u_ < r ? 1 : 0;  // coin with expectation r
  }
  params_[last_arm_] =
      beta_bernoulli_update(params_[last_arm_], outcome == 1 ? 1 : 0, outcome == 0 ? 1 : 0);
}

namespace {

class ThompsonGaussianAgent final : public Agent {
 public:
  explicit ThompsonGaussianAgent(int num_arms)
      : params_(num_arms, GaussianParams{0.0, 1.0}) {
    if (num_arms < 1) throw std::invalid_argument("thompson_prior_free: need at least one arm");
  }

  int num_arms() const override { return static_cast<int>(params_.size()); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }

  ArmIndex act(RngStream& rng) override {
    ArmIndex best = 0;
    double best_sample = std::numeric_limits<double>::lowest();
    for (std::size_t a = 0; a < params_.size(); ++a) {
      const double s = params_[a].mean + params_[a].std * rng.gaussian();
      if (s > best_sample) {
        best_sample = s;
        best = static_cast<ArmIndex>(a);
      }
    }
    last_arm_ = best;
    return best;
  }

  void observe(const Feedback& fb) override {
    const double r = std::get<BanditReward>(fb).value;
    params_[last_arm_] = gaussian_update(params_[last_arm_], 1.0, r, 1);
  }

 private:
  std::vector<GaussianParams> params_;
  ArmIndex last_arm_ = 0;
};

}  // namespace

std::unique_ptr<Agent> thompson_prior_free(int num_arms, PriorFreeMode mode) {
  if (mode == PriorFreeMode::BetaBernoulli) return std::make_unique<ThompsonBetaAgent>(num_arms);
  return std::make_unique<ThompsonGaussianAgent>(num_arms);
}

}  // namespace banditlab::bayes
