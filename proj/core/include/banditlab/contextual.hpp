#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "banditlab/adversarial.hpp"
#include "banditlab/episode.hpp"

namespace banditlab::contextual {

// Explicit policy over a finite context set: table[context] -> arm.
struct Policy {
  std::vector<ArmIndex> table;

  ArmIndex operator()(int context) const { return table.at(context); }
  int num_contexts() const { return static_cast<int>(table.size()); }
};

// One logged interaction; `propensity` is the sampling probability of the
// chosen arm, the piece IPS needs.
struct LoggedPoint {
  int context = 0;
  ArmIndex arm = 0;
  double propensity = 0.0;
  double reward = 0.0;
};

struct DecisionTuple {
  long long tuple_id = 0;
  int context = 0;
  ArmIndex arm = 0;
  double propensity = 0.0;
};

struct OutcomeTuple {
  long long tuple_id = 0;
  double reward = 0.0;
};

// Contextual agents see the context before acting. Contexts are opaque ids
// here; Lipschitz and linear variants layer their own context types on top.
class ContextualAgent {
 public:
  virtual ~ContextualAgent() = default;
  virtual ArmIndex act(int context, RngStream& rng) = 0;
  virtual void observe(double reward) = 0;
};

// IID contextual environment over finite contexts with Bernoulli rewards.
class FiniteContextEnv {
 public:
  // means[x][a] = expected reward of arm a under context x; contexts drawn
  // from `context_probs` each round.
  FiniteContextEnv(std::vector<std::vector<double>> means, std::vector<double> context_probs);
  int num_contexts() const { return static_cast<int>(means_.size()); }
  int num_arms() const { return static_cast<int>(means_.front().size()); }
  int draw_context(RngStream& rng) const;
  double sample_reward(int context, ArmIndex arm, RngStream& rng) const;
  double mean(int context, ArmIndex arm) const { return means_.at(context).at(arm); }
  double policy_value(const Policy& policy) const;
  Policy best_response() const;

 private:
  std::vector<std::vector<double>> means_;
  std::vector<double> context_probs_;
};

struct ContextualEpisodeResult {
  double total_reward = 0.0;
  double pseudo_regret = 0.0;  // against the best-response policy
  std::vector<int> contexts;
  std::vector<ArmIndex> arms;
};

ContextualEpisodeResult run_contextual_episode(const FiniteContextEnv& env, ContextualAgent& agent,
                                               int T, RngStream rng);

// One lazily-created copy of the inner bandit algorithm per observed context.
class PerContextAgent final : public ContextualAgent {
 public:
  PerContextAgent(std::function<std::unique_ptr<Agent>()> inner_factory);
  ArmIndex act(int context, RngStream& rng) override;
  void observe(double reward) override;
  int instantiated_contexts() const { return static_cast<int>(copies_.size()); }

 private:
  std::function<std::unique_ptr<Agent>()> inner_factory_;
  std::unordered_map<int, std::unique_ptr<Agent>> copies_;
  Agent* last_copy_ = nullptr;
};

// Maps a real-valued context to the nearest mesh point (ties toward the
// smaller point), then defers to a per-context agent over mesh indices. The
// known Lipschitz constant bounds the discretization error at L * eps / 2.
class LipschitzContextAgent {
 public:
  LipschitzContextAgent(double lipschitz_constant, double eps,
                        std::function<std::unique_ptr<Agent>()> inner_factory);
  ArmIndex act(double context, RngStream& rng);
  void observe(double reward);
  double snap(double context) const;  // f_S(x)
  const std::vector<double>& mesh() const { return mesh_; }
  double lipschitz_constant() const { return lipschitz_; }
  double discretization_error_bound() const { return lipschitz_ * eps_ / 2.0; }

 private:
  double lipschitz_;
  double eps_;
  std::vector<double> mesh_;
  PerContextAgent inner_;
};

// LinUCB with per-arm ridge regression; beta scales the exploration bonus.
class LinUcbAgent {
 public:
  LinUcbAgent(int num_arms, int dim, double beta);

  // One feature vector per arm for this round.
  ArmIndex act(const std::vector<std::vector<double>>& arm_features);
  void observe(double reward);

  double ucb(ArmIndex arm, std::span<const double> x) const;
  std::vector<double> theta_hat(ArmIndex arm) const;

  static double default_beta(int dim, int horizon);  // sqrt(d ln T)

 private:
  int dim_;
  double beta_;
  std::vector<std::vector<double>> a_matrices_;  // row-major d x d, one per arm
  std::vector<std::vector<double>> b_vectors_;
  ArmIndex last_arm_ = 0;
  std::vector<double> last_features_;
};

// EXP4 with live experts: policies applied to the observed context.
class Exp4PoliciesAgent final : public ContextualAgent {
 public:
  Exp4PoliciesAgent(std::vector<Policy> policies, int num_arms, double gamma, double eps);
  ArmIndex act(int context, RngStream& rng) override;
  void observe(double reward) override;
  std::vector<double> expert_distribution() const { return core_.expert_distribution(); }

 private:
  std::vector<Policy> policies_;
  adversarial::Exp4Core core_;
  std::vector<ArmIndex> last_recs_;
  ArmIndex last_arm_ = 0;
};

// argmax over the policy list of sum_t fake_rewards[t][policy(x_t)]; ties to
// the first policy in the list.
struct ClassificationPoint {
  int context = 0;
  std::vector<double> fake_rewards;  // one per arm
};
int exact_classification_oracle(const std::vector<ClassificationPoint>& points,
                                const std::vector<Policy>& policies);

// Uniform exploration for N rounds, IPS fake rewards r K on the chosen arm,
// one oracle call, then play the returned policy.
class ExploreThenExploitAgent final : public ContextualAgent {
 public:
  ExploreThenExploitAgent(std::vector<Policy> policies, int num_arms, long long explore_rounds);
  ArmIndex act(int context, RngStream& rng) override;
  void observe(double reward) override;

  bool committed() const { return committed_; }
  int chosen_policy() const { return chosen_policy_; }
  const std::vector<ClassificationPoint>& dataset() const { return data_; }

  // N = T^(2/3) (K ln(|Pi| T))^(1/3)
  static long long default_explore_rounds(int num_arms, std::size_t num_policies, int horizon);

 private:
  std::vector<Policy> policies_;
  int num_arms_;
  long long explore_rounds_;
  long long round_ = 0;
  std::vector<ClassificationPoint> data_;
  int last_context_ = 0;
  ArmIndex last_arm_ = 0;
  bool committed_ = false;
  int chosen_policy_ = 0;
};

// (1/N) sum over matched points of r / p; the averaged IPS estimator on the
// policy-value scale.
double ips_estimate(const Policy& policy, const std::vector<LoggedPoint>& data);

struct JoinResult {
  std::vector<LoggedPoint> points;
  std::vector<bool> missing_outcome;  // flagged: decision had no outcome row
};

// Inner join on tuple_id; decisions without outcomes get reward 0 and are
// flagged; duplicate outcome ids are a data error.
JoinResult join_logs(const std::vector<DecisionTuple>& decisions,
                     const std::vector<OutcomeTuple>& outcomes);

// Tab-separated log lines: `D <id> <context> <arm> <propensity>` and
// `O <id> <reward>`; the joined export is `J <context> <arm> <propensity> <reward>`.
void write_decision_log(std::ostream& out, const std::vector<DecisionTuple>& decisions);
void write_outcome_log(std::ostream& out, const std::vector<OutcomeTuple>& outcomes);
std::vector<DecisionTuple> read_decision_log(std::istream& in);
std::vector<OutcomeTuple> read_outcome_log(std::istream& in);
void write_joined_log(std::ostream& out, const std::vector<LoggedPoint>& points);

}  // namespace banditlab::contextual
