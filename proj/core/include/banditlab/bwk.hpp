#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "banditlab/episode.hpp"

namespace banditlab::bwk {

// K x (d+1) table: column 0 is the expected reward, columns 1..d expected
// consumption per resource.
struct OutcomeMatrix {
  std::vector<std::vector<double>> rows;

  explicit OutcomeMatrix(std::vector<std::vector<double>> rows_);
  int num_arms() const { return static_cast<int>(rows.size()); }
  int num_resources() const { return static_cast<int>(rows.front().size()) - 1; }
  double reward(int arm) const { return rows[arm][0]; }
  double consumption(int arm, int resource) const { return rows[arm][resource + 1]; }
};

// Finite-support distribution over outcome rows (reward; consumptions).
struct OutcomeDistribution {
  std::vector<std::vector<double>> rows;  // each of length d+1, entries in [0,1]
  std::vector<double> probs;

  std::vector<double> expected() const;
  int sample_row(RngStream& rng) const;
};

// Raw instance: d resources with individual budgets; time is implicit. A null
// arm (zero reward, zero consumption) is appended when absent.
struct BwKInstance {
  std::vector<OutcomeDistribution> arms;
  std::vector<double> budgets;
  long long horizon = 0;
  int null_arm = -1;

  int num_arms() const { return static_cast<int>(arms.size()); }
  int num_resources() const { return static_cast<int>(budgets.size()); }
  OutcomeMatrix expected_matrix() const;

  static BwKInstance make(std::vector<OutcomeDistribution> arms, std::vector<double> budgets,
                          long long horizon);
};

// Common-budget form: B = min_i B_i, consumption of resource i scaled by
// B/B_i, and time appended as the last resource consuming B/T per round.
struct RescaledInstance {
  std::vector<OutcomeDistribution> arms;  // rows carry d+1 consumptions (time last)
  double budget = 0.0;                    // common budget B
  long long horizon = 0;
  int null_arm = -1;

  int num_arms() const { return static_cast<int>(arms.size()); }
  int num_resources() const;  // includes time
  OutcomeMatrix expected_matrix() const;
};

RescaledInstance rescale_budgets(const BwKInstance& instance);

struct LpSolution {
  std::vector<double> dist;
  double value = 0.0;        // per-round expected reward r(D)
  std::vector<int> binding;  // resources tight at the optimum
};

// Exact optimum of: max r(D) s.t. D in the simplex, c_i(D) <= caps[i], via
// enumeration of basic feasible solutions (desk scale: K <= 12, <= 5
// resources). Ties resolve to the lexicographically smallest support.
LpSolution solve_lp_general(const OutcomeMatrix& expected, const std::vector<double>& caps);

// The standard BwK relaxation: caps[i] = B / T for every resource.
LpSolution solve_bwk_lp(const OutcomeMatrix& expected, double budget, double horizon);

// L(a, i) = r(a) + 1 - (T/B) c_i(a).
double lagrange_payoff(const OutcomeMatrix& matrix, int arm, int resource, double horizon,
                       double budget);

// Environment over a rescaled instance; stops once any resource's cumulative
// consumption strictly exceeds the budget.
class BwKEnv final : public Environment {
 public:
  explicit BwKEnv(RescaledInstance instance);
  int num_arms() const override { return instance_.num_arms(); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::OutcomeRow; }
  Feedback step(ArmIndex arm, RngStream& rng) override;
  bool stopped() const override { return violated_; }
  bool violated() const { return violated_; }
  const std::vector<double>& consumed() const { return consumed_; }

 private:
  RescaledInstance instance_;
  std::vector<double> consumed_;
  bool violated_ = false;
};

// Total reward over all rounds strictly before the stopping round; when no
// budget was violated, all rounds count.
double adjusted_total_reward(const History& history, bool violated);

struct LagrangeBwkConfig {
  double primal_gamma = 0.0;  // 0 = tuned default min(0.5, sqrt(K ln K / T))
  double primal_eps = 0.0;    // 0 = tuned default
  double dual_eps = 0.0;      // 0 = tuned default sqrt(ln d / (2 T))
};

// Repeated Lagrange game: EXP3 primal over arms (bandit feedback), Hedge dual
// over resources (full feedback). Payoffs are scaled from [1 - T/B, 2] into
// [0, 1] before feeding either algorithm.
std::unique_ptr<Agent> lagrange_bwk(const RescaledInstance& instance,
                                    LagrangeBwkConfig config = {});

// Optimism for BwK: per-entry Hoeffding intervals truncated to [0,1], LP on
// the optimistic matrix with budgets shrunk to B(1 - eps),
// eps = min(0.5, sqrt(K/B)).
std::unique_ptr<Agent> ucb_bwk(const RescaledInstance& instance);
double ucb_bwk_epsilon(int num_arms, double budget);

// Optimistic matrix used by ucb_bwk: reward UCBs and consumption LCBs from
// per-entry Hoeffding intervals truncated to [0,1]; the final (time) column
// carries the known rate B/T.
OutcomeMatrix optimistic_outcome_matrix(const std::vector<long long>& pulls,
                                        const std::vector<double>& reward_sums,
                                        const std::vector<std::vector<double>>& consumption_sums,
                                        double time_rate, long long horizon);

// Payoffs (L(a_t, i))_i computed from one revealed outcome row, scaled from
// [1 - T/B, 2] into [0,1]; exactly what LagrangeBwK feeds its two learners.
std::vector<double> lagrange_scaled_payoffs(const OutcomeRow& row, double horizon, double budget);

// Example environments (finite-support value distributions).
struct ValueDistribution {
  std::vector<double> values;
  std::vector<double> probs;
};

// Arm = posted price: outcome (p, 1) when the buyer's value is >= p, else (0, 0).
BwKInstance pricing_env(const ValueDistribution& values, const std::vector<double>& price_grid,
                        double budget, long long horizon);
// Arm = offered price: outcome (1, p) when p >= the worker's value, else (0, 0).
BwKInstance procurement_env(const ValueDistribution& values, const std::vector<double>& price_grid,
                            double budget, long long horizon);
// Arm = ad: outcome (r_a, r_a on advertiser a's budget) on click.
BwKInstance ppc_env(const std::vector<double>& click_probs, const std::vector<double>& rewards,
                    const std::vector<double>& budgets, long long horizon);

// Structured text: `horizon T`, `budgets b1 ... bd`, `arm` opens an arm block,
// `row <prob> <reward> <c1> ... <cd>` adds an outcome row.
BwKInstance load_instance(std::istream& in);
BwKInstance load_instance_file(const std::string& path);

}  // namespace banditlab::bwk
