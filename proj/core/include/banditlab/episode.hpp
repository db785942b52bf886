#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "banditlab/rng.hpp"
#include "banditlab/types.hpp"

namespace banditlab {

class Agent {
 public:
  virtual ~Agent() = default;
  virtual int num_arms() const = 0;
  virtual FeedbackKind feedback_kind() const = 0;
  virtual ArmIndex act(RngStream& rng) = 0;
  virtual void observe(const Feedback& fb) = 0;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual int num_arms() const = 0;
  virtual FeedbackKind feedback_kind() const = 0;
  virtual Objective objective() const { return Objective::Reward; }
  virtual Feedback step(ArmIndex arm, RngStream& rng) = 0;

  // BwK environments signal a budget violation after the offending round.
  virtual bool stopped() const { return false; }

  // True per-arm means, when the environment knows them (pseudo-regret).
  virtual std::optional<std::vector<double>> true_means() const { return std::nullopt; }

  // Realized per-arm scalar outcomes of the last step, when the environment
  // can reveal them to the driver (hindsight benchmark). Never shown to agents.
  virtual std::optional<std::vector<double>> last_realized_row() const { return std::nullopt; }
};

struct EpisodeResult {
  History history;
  RegretReport report;
  bool stopped_early = false;  // env signalled stop before round T
};

// Runs T rounds (fewer if env stops), then fills the regret report from the
// trace. Bitwise deterministic given the seed carried by `rng`.
EpisodeResult run_episode(Environment& env, Agent& agent, int T, RngStream rng);

// Recomputes the report from a finished trace; used by run_episode and
// directly by tests.
RegretReport make_regret_report(const History& history, Objective objective,
                                const std::optional<std::vector<double>>& true_means,
                                const std::vector<std::vector<double>>& realized_table);

// Best fixed arm of a T x K scalar table: max column sum for rewards, min for
// costs. Ties resolve to the lowest index.
std::pair<ArmIndex, double> best_fixed_hindsight(const std::vector<std::vector<double>>& table,
                                                 Objective objective = Objective::Reward);

// mu* . T - sum_t mu(a_t), exactly.
double pseudo_regret(std::span<const double> means, std::span<const ArmIndex> arms);

using AgentFactory = std::function<std::unique_ptr<Agent>(int horizon)>;

// Doubling trick: phase i = 1, 2, ... occupies rounds [2^i - 1, 2^(i+1) - 2]
// and runs a fresh inner agent built for horizon 2^i.
std::unique_ptr<Agent> doubling_wrap(AgentFactory factory);

// Phase index of a 1-based round under the doubling schedule.
int doubling_phase(int round);

}  // namespace banditlab
