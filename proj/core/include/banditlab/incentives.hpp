#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "banditlab/episode.hpp"

namespace banditlab::incentives {

// Two-arm Bernoulli prior with explicit finite support. Arms are relabeled at
// construction so the prior mean of arm 0 is weakly largest; `swapped` records
// the permutation.
struct TwoArmPrior {
  std::vector<std::array<double, 2>> support;  // (mu_1, mu_2) per point
  std::vector<double> probs;
  bool swapped = false;

  double prior_mean(int arm) const;

  static TwoArmPrior make(std::vector<std::array<double, 2>> support, std::vector<double> probs);
  // Lines: `point <mu1> <mu2> <prob>`.
  static TwoArmPrior load(std::istream& in);
  static TwoArmPrior load_file(const std::string& path);
};

// Posterior over the support given binary samples of arm 0 (the preferred
// arm); exact enumeration.
std::vector<double> posterior_over_support(const TwoArmPrior& prior,
                                           std::span<const int> arm0_samples);
// Posterior given an arbitrary compliant history of (arm, reward) pairs.
std::vector<double> posterior_over_support(const TwoArmPrior& prior,
                                           std::span<const std::pair<int, int>> history);

// G_{1,n} = E[mu_2 - mu_1 | n samples of arm 1], exact.
double posterior_gap(const TwoArmPrior& prior, std::span<const int> arm0_samples);

// (1/3) E[G . 1{G > 0}] over all 2^n0 sample tuples, exact. Zero means the
// prior gives no fighting chance at this n0.
double bic_epsilon_bound(const TwoArmPrior& prior, int n0);

struct BicParams {
  int n0 = 0;
  double eps = 0.0;

  // Validates eps <= bic_epsilon_bound(prior, n0).
  static BicParams checked(const TwoArmPrior& prior, int n0, double eps);
};

// Exploit arm given a signal: min argmax_a E[mu_a | signal].
int exploit_arm(const TwoArmPrior& prior, std::span<const std::pair<int, int>> signal);

// Deterministic function of the exploration history (the signal).
using ExploreFn = std::function<int(std::span<const std::pair<int, int>>)>;

// Single round of hidden exploration: explore with probability eps, else
// recommend the exploit arm.
int hidden_exploration(std::span<const std::pair<int, int>> signal, double eps,
                       const ExploreFn& explore_fn, const TwoArmPrior& prior, RngStream& rng);

// Recommendation algorithms are bandit agents here: compliant agents play the
// recommendation, so act() returns it and observe() feeds the reward back.
class RepeatedHiddenExplorationAgent final : public Agent {
 public:
  RepeatedHiddenExplorationAgent(TwoArmPrior prior, BicParams params, ExploreFn inner);

  int num_arms() const override { return 2; }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }
  ArmIndex act(RngStream& rng) override;
  void observe(const Feedback& fb) override;

  bool last_round_explored() const { return last_explored_; }
  const std::vector<std::pair<int, int>>& exploration_history() const { return exploration_; }

 private:
  TwoArmPrior prior_;
  BicParams params_;
  ExploreFn inner_;
  std::vector<std::pair<int, int>> exploration_;
  long long round_ = 0;
  bool last_explored_ = false;
  ArmIndex last_arm_ = 0;
};

std::unique_ptr<Agent> repeated_hidden_exploration(TwoArmPrior prior, BicParams params,
                                                   ExploreFn inner);

// rec_t = min argmax_a E[mu_a | full history].
class BayesianGreedyAgent final : public Agent {
 public:
  explicit BayesianGreedyAgent(TwoArmPrior prior);
  int num_arms() const override { return 2; }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }
  ArmIndex act(RngStream& rng) override;
  void observe(const Feedback& fb) override;
  bool ever_played(int arm) const { return played_.at(arm); }

 private:
  TwoArmPrior prior_;
  std::vector<std::pair<int, int>> history_;
  std::array<bool, 2> played_{false, false};
  ArmIndex last_arm_ = 0;
};

std::unique_ptr<Agent> bayesian_greedy(TwoArmPrior prior);

// Recommendation algorithm in enumerable form: per-round internal branches
// with probabilities, plus a deterministic recommendation given the branch
// sequence and the compliant reward realizations so far.
class EnumerableRecAlgo {
 public:
  virtual ~EnumerableRecAlgo() = default;
  virtual int num_branches(int round) const = 0;             // rounds are 1-based
  virtual double branch_prob(int round, int branch) const = 0;
  virtual int recommend(std::span<const int> branches,        // length = current round
                        std::span<const int> rewards) const = 0;  // length = round - 1
};

std::unique_ptr<EnumerableRecAlgo> always_arm(int arm);
std::unique_ptr<EnumerableRecAlgo> bayesian_greedy_enumerable(TwoArmPrior prior);
std::unique_ptr<EnumerableRecAlgo> repeated_hidden_exploration_enumerable(TwoArmPrior prior,
                                                                          BicParams params,
                                                                          ExploreFn inner);

struct BicVerdict {
  bool pass = false;
  double worst_margin = 0.0;  // min over rounds/arms of E[mu_a - mu_a' | rec = a]
  int worst_round = 0;
  int worst_arm = 0;
  long long paths_enumerated = 0;
};

// Exhaustively enumerates reward realizations and algorithm branches, then
// checks E[mu_a - mu_a' | rec_t = a, compliance] >= 0 for every round and
// every recommendation issued with positive probability. No Monte Carlo.
BicVerdict bic_verify(const EnumerableRecAlgo& algo, const TwoArmPrior& prior, int horizon,
                      long long path_cap = 1LL << 22);

}  // namespace banditlab::incentives
