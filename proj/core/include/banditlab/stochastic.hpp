#pragma once

#include <memory>
#include <vector>

#include "banditlab/episode.hpp"

namespace banditlab::stochastic {

// Running per-arm pull counts and reward sums.
struct ArmStats {
  std::vector<long long> pulls;
  std::vector<double> sums;

  explicit ArmStats(int num_arms) : pulls(num_arms, 0), sums(num_arms, 0.0) {}
  void record(ArmIndex a, double reward) {
    ++pulls.at(a);
    sums.at(a) += reward;
  }
  double mean(ArmIndex a) const { return pulls[a] == 0 ? 0.0 : sums[a] / pulls[a]; }
  long long total_pulls() const {
    long long n = 0;
    for (long long p : pulls) n += p;
    return n;
  }
  // Empirical-best arm, ties to the lowest index.
  ArmIndex best_mean_arm() const;
};

// Per-arm reward distribution: Bernoulli(mu) or finite support on [0,1].
struct ArmDistribution {
  std::vector<double> values;  // support
  std::vector<double> probs;

  static ArmDistribution bernoulli(double mu);
  static ArmDistribution point_mass(double value);
  static ArmDistribution finite(std::vector<double> values, std::vector<double> probs);
  double mean() const;
  double sample(RngStream& rng) const;
};

struct StochasticEnvSpec {
  std::vector<ArmDistribution> arms;

  static StochasticEnvSpec bernoulli(std::vector<double> means);
  static StochasticEnvSpec deterministic(std::vector<double> values);
  std::vector<double> means() const;
};

// IID-reward environment. Realizes the full per-arm reward row each round
// (reward-tape style) so the driver can account hindsight regret; agents see
// only the chosen entry.
class StochasticEnv final : public Environment {
 public:
  explicit StochasticEnv(StochasticEnvSpec spec);

  int num_arms() const override { return static_cast<int>(spec_.arms.size()); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }
  Feedback step(ArmIndex arm, RngStream& rng) override;
  std::optional<std::vector<double>> true_means() const override { return spec_.means(); }
  std::optional<std::vector<double>> last_realized_row() const override { return last_row_; }

 private:
  StochasticEnvSpec spec_;
  std::optional<std::vector<double>> last_row_;
};

// Round-robin exploration for N rounds per arm, then play the empirical best
// from exploration forever.
std::unique_ptr<Agent> explore_first(int num_arms, int horizon, long long per_arm_budget);

// floor((T/K)^(2/3) (ln T)^(1/3)), the tuned budget with constant 1.
long long explore_first_default_budget(int num_arms, int horizon);

// eps_t = min(1, t^(-1/3) (K ln t)^(1/3)), clamped to 1 at t = 1.
std::unique_ptr<Agent> epsilon_greedy(int num_arms);
double epsilon_greedy_schedule(int num_arms, long long t);

// Cycles active arms; deactivates an arm once its UCB falls below some active
// arm's LCB, checked at pass boundaries.
std::unique_ptr<Agent> successive_elimination(int num_arms, int horizon);

// Classic optimism: try each arm once, then argmax of mean + radius.
std::unique_ptr<Agent> ucb1(int num_arms, int horizon);
double ucb1_index(double mean, long long pulls, int horizon);

// Most-pulled arm, ties to the lowest index; the default best-arm prediction.
ArmIndex most_pulled_arm(const History& history, int num_arms);

}  // namespace banditlab::stochastic
