#pragma once

#include <memory>
#include <vector>

#include "banditlab/concentration.hpp"
#include "banditlab/episode.hpp"

namespace banditlab::bayes {

// Explicit finite support over mean-reward vectors, with Bernoulli rewards
// (reward of arm a is Bernoulli(mu(a)) for the drawn mu).
struct FinitePrior {
  std::vector<std::vector<double>> support;  // each entry is a mu vector in [0,1]^K
  std::vector<double> probs;

  FinitePrior(std::vector<std::vector<double>> support_, std::vector<double> probs_);
  int num_arms() const { return static_cast<int>(support.front().size()); }

  // Product prior over independent per-arm supports.
  static FinitePrior product(const std::vector<std::vector<double>>& arm_values,
                             const std::vector<std::vector<double>>& arm_probs);
};

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;
};

struct GaussianParams {
  double mean = 0.0;
  double std = 1.0;
};

// Exact posterior over the prior support given a Bernoulli bandit history.
// Throws std::domain_error when the history is impossible under every
// support point. Computation is done in log space.
concentration::ProbVector posterior_update_finite(const FinitePrior& prior,
                                                  const History& history);

// Same update from explicit (arm, reward) pairs; rewards must be 0 or 1.
concentration::ProbVector posterior_update_finite(
    const FinitePrior& prior, const std::vector<std::pair<ArmIndex, int>>& observations);

BetaParams beta_bernoulli_update(BetaParams p, long long successes, long long failures);

// Conjugate normal update from n observations with known noise std, given
// their sum.
GaussianParams gaussian_update(GaussianParams prior, double obs_std, double sum, long long n);

// Pr[a* = a] under a distribution over the support (ties to lowest index
// when a support point has several maximal arms).
std::vector<double> best_arm_probabilities(const FinitePrior& prior,
                                           const concentration::ProbVector& posterior);

// Thompson Sampling over an explicit finite prior; sequential exact updates.
class ThompsonFiniteAgent final : public Agent {
 public:
  explicit ThompsonFiniteAgent(FinitePrior prior);

  int num_arms() const override { return prior_.num_arms(); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }
  ArmIndex act(RngStream& rng) override;
  void observe(const Feedback& fb) override;

  const std::vector<double>& posterior_log_weights() const { return log_weights_; }
  concentration::ProbVector posterior() const;

 private:
  FinitePrior prior_;
  std::vector<double> log_weights_;
  ArmIndex last_arm_ = 0;
};

std::unique_ptr<Agent> thompson_finite(FinitePrior prior);

// Prior-independent Thompson Sampling.
enum class PriorFreeMode { BetaBernoulli, Gaussian };
std::unique_ptr<Agent> thompson_prior_free(int num_arms, PriorFreeMode mode);

// Exposed for tests: per-arm Beta parameters of a running agent.
class ThompsonBetaAgent final : public Agent {
 public:
  explicit ThompsonBetaAgent(int num_arms);
  int num_arms() const override { return static_cast<int>(params_.size()); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }
  ArmIndex act(RngStream& rng) override;
  void observe(const Feedback& fb) override;
  const std::vector<BetaParams>& params() const { return params_; }

 private:
  std::vector<BetaParams> params_;
  ArmIndex last_arm_ = 0;
  double binarize_u_ = 0.0;
};

double sample_beta(BetaParams p, RngStream& rng);

}  // namespace banditlab::bayes
