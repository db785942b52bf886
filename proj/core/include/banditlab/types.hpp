#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace banditlab {

using ArmIndex = int;

// Per-round feedback variants, the single currency between environments
// and agents.
struct BanditReward {
  double value = 0.0;  // reward (or cost, by env convention) of the chosen arm
};
struct FullCosts {
  std::vector<double> costs;  // one entry per arm
};
struct SemiBandit {
  std::vector<std::pair<int, double>> atom_costs;  // (atom id, cost) per atom of the chosen action
};
struct OutcomeRow {
  double reward = 0.0;
  std::vector<double> consumption;  // per-resource, in [0,1]
};

using Feedback = std::variant<BanditReward, FullCosts, SemiBandit, OutcomeRow>;

enum class FeedbackKind { BanditReward, FullCosts, SemiBandit, OutcomeRow };

FeedbackKind kind_of(const Feedback& fb);

struct RoundRecord {
  int t = 0;  // 1-based round number
  ArmIndex arm = 0;
  Feedback feedback;
};

// Ordered, append-only trace of an episode. Rounds number 1, 2, ...
class History {
 public:
  void append(ArmIndex arm, Feedback fb);
  const std::vector<RoundRecord>& records() const { return records_; }
  int rounds() const { return static_cast<int>(records_.size()); }
  bool empty() const { return records_.empty(); }

 private:
  std::vector<RoundRecord> records_;
};

enum class Objective { Reward, Cost };

// All fields use the reward convention; cost-based environments are negated
// on the way in, never inside algorithm state.
struct RegretReport {
  double total_reward = 0.0;
  std::optional<double> best_fixed_hindsight;
  std::optional<double> best_foresight;      // present when true means are known
  std::optional<double> regret;              // best_fixed_hindsight - total_reward
  std::optional<double> pseudo_regret;       // sum of per-round gaps, when means known
  std::vector<double> gaps;                  // per-arm gap, when means known
};

}  // namespace banditlab
