#include "banditlab/episode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace banditlab {

namespace {

double chosen_scalar(const RoundRecord& rec) {
  if (const auto* br = std::get_if<BanditReward>(&rec.feedback)) return br->value;
  if (const auto* fc = std::get_if<FullCosts>(&rec.feedback)) return fc->costs.at(rec.arm);
  if (const auto* sb = std::get_if<SemiBandit>(&rec.feedback)) {
    double total = 0.0;
    for (const auto& [atom, c] : sb->atom_costs) total += c;
    return total;
  }
  return std::get<OutcomeRow>(rec.feedback).reward;
}

}  // namespace

RegretReport make_regret_report(const History& history, Objective objective,
                                const std::optional<std::vector<double>>& true_means,
                                const std::vector<std::vector<double>>& realized_table) {
  const double sign = objective == Objective::Reward ? 1.0 : -1.0;
  RegretReport report;
  for (const auto& rec : history.records()) report.total_reward += sign * chosen_scalar(rec);

  if (!realized_table.empty()) {
    auto [arm, value] = best_fixed_hindsight(realized_table, objective);
    (void)arm;
    report.best_fixed_hindsight = sign * value;
    report.regret = *report.best_fixed_hindsight - report.total_reward;
  }

  if (true_means) {
    const auto& means = *true_means;
    const double best =
        objective == Objective::Reward
            ? *std::max_element(means.begin(), means.end())
            : *std::min_element(means.begin(), means.end());
    report.best_foresight = sign * best * history.rounds();
    report.gaps.resize(means.size());
    for (std::size_t a = 0; a < means.size(); ++a)
      report.gaps[a] = objective == Objective::Reward ? best - means[a] : means[a] - best;
    double pr = 0.0;
    for (const auto& rec : history.records()) pr += report.gaps.at(rec.arm);
    report.pseudo_regret = pr;
  }
  return report;
}

EpisodeResult run_episode(Environment& env, Agent& agent, int T, RngStream rng) {
  if (T < 1) throw std::invalid_argument("run_episode: T must be >= 1");
  if (agent.num_arms() != env.num_arms())
    throw std::invalid_argument("run_episode: agent/env arm counts disagree");
  if (agent.feedback_kind() != env.feedback_kind())
    throw std::invalid_argument("run_episode: agent/env feedback kinds disagree");

  RngStream agent_rng = rng.fork("agent");
  RngStream env_rng = rng.fork("env");

  EpisodeResult result;
  std::vector<std::vector<double>> realized_table;
  bool table_complete = true;
  for (int t = 1; t <= T; ++t) {
    const ArmIndex arm = agent.act(agent_rng);
    if (arm < 0 || arm >= env.num_arms())
      throw std::out_of_range("run_episode: agent chose an out-of-range arm");
    Feedback fb = env.step(arm, env_rng);
    agent.observe(fb);
    result.history.append(arm, std::move(fb));
    if (auto row = env.last_realized_row(); row && table_complete) {
      realized_table.push_back(std::move(*row));
    } else {
      table_complete = false;
    }
    if (env.stopped()) {
      result.stopped_early = t < T;
      break;
    }
  }
  if (!table_complete) realized_table.clear();
  result.report =
      make_regret_report(result.history, env.objective(), env.true_means(), realized_table);
  return result;
}

std::pair<ArmIndex, double> best_fixed_hindsight(const std::vector<std::vector<double>>& table,
                                                 Objective objective) {
  if (table.empty()) throw std::invalid_argument("best_fixed_hindsight: empty table");
  const std::size_t k = table.front().size();
  if (k == 0) throw std::invalid_argument("best_fixed_hindsight: empty rows");
  std::vector<double> sums(k, 0.0);
  for (const auto& row : table) {
    if (row.size() != k) throw std::invalid_argument("best_fixed_hindsight: ragged table");
    for (std::size_t a = 0; a < k; ++a) sums[a] += row[a];
  }
  ArmIndex best = 0;
  for (std::size_t a = 1; a < k; ++a) {
    const bool better = objective == Objective::Reward ? sums[a] > sums[best] : sums[a] < sums[best];
    if (better) best = static_cast<ArmIndex>(a);
  }
  return {best, sums[best]};
}

double pseudo_regret(std::span<const double> means, std::span<const ArmIndex> arms) {
  if (means.empty()) throw std::invalid_argument("pseudo_regret: no arms");
  for (double m : means)
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("pseudo_regret: means must be in [0,1]");
  const double best = *std::max_element(means.begin(), means.end());
  double total = 0.0;
  for (ArmIndex a : arms) {
    if (a < 0 || static_cast<std::size_t>(a) >= means.size())
      throw std::out_of_range("pseudo_regret: arm out of range");
    total += best - means[a];
  }
  return total;
}

int doubling_phase(int round) {
  if (round < 1) throw std::invalid_argument("doubling_phase: rounds are 1-based");
  int phase = 0;
  while ((1 << (phase + 1)) - 1 <= round) ++phase;
  return phase;  // round in [2^phase - 1, 2^(phase+1) - 2]
}

namespace {

class DoublingAgent final : public Agent {
 public:
  explicit DoublingAgent(AgentFactory factory)
      : factory_(std::move(factory)), inner_(factory_(2)), phase_(1) {}

  int num_arms() const override { return inner_->num_arms(); }
  FeedbackKind feedback_kind() const override { return inner_->feedback_kind(); }

  ArmIndex act(RngStream& rng) override {
    ++round_;
    const int phase = doubling_phase(round_);
    if (phase != phase_) {
      phase_ = phase;
      inner_ = factory_(1 << phase_);
    }
    return inner_->act(rng);
  }

  void observe(const Feedback& fb) override { inner_->observe(fb); }

 private:
  AgentFactory factory_;
  std::unique_ptr<Agent> inner_;
  int phase_ = 1;
  int round_ = 0;
};

}  // namespace

std::unique_ptr<Agent> doubling_wrap(AgentFactory factory) {
  return std::make_unique<DoublingAgent>(std::move(factory));
}

}  // namespace banditlab
