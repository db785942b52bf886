#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "banditlab/episode.hpp"

namespace banditlab::adversarial {

// Deterministic oblivious adversary: the whole cost table is fixed upfront.
struct CostTable {
  std::vector<std::vector<double>> costs;  // T x K, entries in [0, bound]
  double bound = 1.0;

  CostTable(std::vector<std::vector<double>> c, double bound_);
  int rounds() const { return static_cast<int>(costs.size()); }
  int num_arms() const { return static_cast<int>(costs.front().size()); }
};

// Full-feedback environment over a cost table: agents observe the entire
// per-round cost row.
class FullFeedbackCostEnv final : public Environment {
 public:
  explicit FullFeedbackCostEnv(CostTable table);
  int num_arms() const override { return table_.num_arms(); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::FullCosts; }
  Objective objective() const override { return Objective::Cost; }
  Feedback step(ArmIndex arm, RngStream& rng) override;
  std::optional<std::vector<double>> last_realized_row() const override { return last_row_; }

 private:
  CostTable table_;
  int round_ = 0;
  std::optional<std::vector<double>> last_row_;
};

// Bandit-feedback environment over per-arm cost distributions (for EXP3).
class BanditCostEnv final : public Environment {
 public:
  // means of Bernoulli costs, one per arm
  explicit BanditCostEnv(std::vector<double> cost_means);
  int num_arms() const override { return static_cast<int>(means_.size()); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }
  Objective objective() const override { return Objective::Cost; }
  Feedback step(ArmIndex arm, RngStream& rng) override;
  std::optional<std::vector<double>> true_means() const override { return means_; }
  std::optional<std::vector<double>> last_realized_row() const override { return last_row_; }

 private:
  std::vector<double> means_;
  std::optional<std::vector<double>> last_row_;
};

// Positive multiplicative weights shared by WMA/Hedge/EXP3/EXP4.
class WeightState {
 public:
  WeightState(int n, double eps);
  int size() const { return static_cast<int>(weights_.size()); }
  double eps() const { return eps_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double> probabilities() const;   // w / sum(w)
  void apply_cost(int index, double cost);     // w *= (1-eps)^cost, cost >= 0
  void apply_costs(std::span<const double> costs);

 private:
  void renormalize_if_tiny();
  std::vector<double> weights_;
  double eps_;
};

// Tuned parameters.
double hedge_epsilon_bounded(int num_actions, double total_cost_bound);   // sqrt(ln K / (2 U))
double hedge_epsilon_variance(int num_actions, double total_sq_bound);    // sqrt(ln K / (3 U))
double exp3_gamma_crude(int num_arms, int num_experts, int horizon);      // T^(-1/3) (K ln N)^(1/3)

// Majority vote over experts that never erred; requires a perfect expert.
// Predictions and labels are binary. Tie votes predict 0.
class MajorityVote {
 public:
  explicit MajorityVote(int num_experts);
  int predict(std::span<const int> expert_predictions) const;
  void observe(std::span<const int> expert_predictions, int true_label);
  int mistakes() const { return mistakes_; }
  const std::vector<bool>& alive() const { return alive_; }

 private:
  std::vector<bool> alive_;
  int mistakes_ = 0;
};

// Weighted majority for binary prediction; erring experts lose a (1-eps)
// weight factor.
class Wma {
 public:
  Wma(int num_experts, double eps);
  int predict(std::span<const int> expert_predictions) const;
  void observe(std::span<const int> expert_predictions, int true_label);
  int mistakes() const { return mistakes_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
  double eps_;
  int mistakes_ = 0;
};

// Hedge over K actions with nonnegative costs, full feedback.
class HedgeAgent final : public Agent {
 public:
  HedgeAgent(int num_actions, double eps);
  int num_arms() const override { return state_.size(); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::FullCosts; }
  ArmIndex act(RngStream& rng) override;
  void observe(const Feedback& fb) override;

  std::vector<double> distribution() const { return state_.probabilities(); }
  void observe_costs(std::span<const double> costs);

 private:
  WeightState state_;
};

std::unique_ptr<Agent> hedge(int num_actions, double eps);

// Expert advice fixed in advance: a[t][e] is the arm expert e recommends at
// round t.
struct ExpertTable {
  std::vector<std::vector<ArmIndex>> recs;  // T x N
  int num_arms = 0;
};

// EXP4 core: Hedge over experts plus uniform exploration over arms; fake
// costs by inverse propensity scoring. Exposed stepwise so both the bandit
// Agent wrapper and the contextual adapter can drive it.
class Exp4Core {
 public:
  Exp4Core(int num_arms, int num_experts, double gamma, double eps);

  const std::vector<double>& expert_weights() const { return experts_.weights(); }
  std::vector<double> expert_distribution() const { return experts_.probabilities(); }

  // Mixture distribution over arms induced by expert distribution p and the
  // exploration floor: q(a) = (1-gamma) p(a) + gamma / K.
  std::vector<double> arm_distribution(std::span<const ArmIndex> recommendations) const;

  ArmIndex sample_arm(std::span<const ArmIndex> recommendations, RngStream& rng);

  // IPS fake costs per expert given the realized chosen arm.
  std::vector<double> fake_costs(std::span<const ArmIndex> recommendations,
                                 ArmIndex chosen_arm, double chosen_cost) const;

  void update(std::span<const ArmIndex> recommendations, ArmIndex chosen_arm,
              double chosen_cost);

  int num_arms() const { return num_arms_; }
  int num_experts() const { return experts_.size(); }
  double gamma() const { return gamma_; }

 private:
  int num_arms_;
  double gamma_;
  WeightState experts_;
};

// Bandit agent following a precomputed expert table.
std::unique_ptr<Agent> exp4(ExpertTable table, double gamma, double eps);

// EXP3 = EXP4 with one identity expert per arm.
std::unique_ptr<Agent> exp3(int num_arms, double gamma, double eps);

}  // namespace banditlab::adversarial
