#include "banditlab/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace banditlab::adversarial {

CostTable::CostTable(std::vector<std::vector<double>> c, double bound_)
    : costs(std::move(c)), bound(bound_) {
  if (costs.empty() || costs.front().empty()) throw std::invalid_argument("CostTable: empty");
  const std::size_t k = costs.front().size();
  for (const auto& row : costs) {
    if (row.size() != k) throw std::invalid_argument("CostTable: ragged rows");
    for (double x : row)
      if (!(x >= 0.0 && x <= bound) || !std::isfinite(x))
        throw std::invalid_argument("CostTable: entries must be in [0, bound]");
  }
}

FullFeedbackCostEnv::FullFeedbackCostEnv(CostTable table) : table_(std::move(table)) {}

Feedback FullFeedbackCostEnv::step(ArmIndex, RngStream&) {
  if (round_ >= table_.rounds()) throw std::out_of_range("FullFeedbackCostEnv: table exhausted");
  auto row = table_.costs[round_++];
  last_row_ = row;
  return FullCosts{std::move(row)};
}

BanditCostEnv::BanditCostEnv(std::vector<double> cost_means) : means_(std::move(cost_means)) {
  if (means_.empty()) throw std::invalid_argument("BanditCostEnv: no arms");
  for (double m : means_)
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("BanditCostEnv: means in [0,1]");
}

Feedback BanditCostEnv::step(ArmIndex arm, RngStream& rng) {
  std::vector<double> row(means_.size());
  for (std::size_t a = 0; a < means_.size(); ++a) row[a] = rng.bernoulli(means_[a]) ? 1.0 : 0.0;
  const double chosen = row.at(arm);
  last_row_ = std::move(row);
  return BanditReward{chosen};
}

// ---------------------------------------------------------------------------
// Weights

WeightState::WeightState(int n, double eps) : weights_(n, 1.0), eps_(eps) {
  if (n < 1) throw std::invalid_argument("WeightState: need at least one action");
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("WeightState: eps must be in (0, 0.5]");
}

std::vector<double> WeightState::probabilities() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) p[i] = weights_[i] / sum;
  return p;
}

void WeightState::apply_cost(int index, double cost) {
  if (cost < 0.0) throw std::domain_error("WeightState: costs must be nonnegative");
  weights_.at(index) *= std::pow(1.0 - eps_, cost);
  renormalize_if_tiny();
}

void WeightState::apply_costs(std::span<const double> costs) {
  if (costs.size() != weights_.size()) throw std::invalid_argument("WeightState: size mismatch");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (costs[i] < 0.0) throw std::domain_error("WeightState: costs must be nonnegative");
    weights_[i] *= std::pow(1.0 - eps_, costs[i]);
  }
  renormalize_if_tiny();
}

void WeightState::renormalize_if_tiny() {
  // Common rescaling keeps the induced distribution intact.
  double peak = 0.0;
  for (double w : weights_) peak = std::max(peak, w);
  if (peak < 1e-280 && peak > 0.0) {
    for (double& w : weights_) w /= peak;
  }
}

double hedge_epsilon_bounded(int num_actions, double total_cost_bound) {
  if (num_actions < 2 || !(total_cost_bound > 0.0))
    throw std::invalid_argument("hedge_epsilon_bounded");
  return std::sqrt(std::log(static_cast<double>(num_actions)) / (2.0 * total_cost_bound));
}

double hedge_epsilon_variance(int num_actions, double total_sq_bound) {
  if (num_actions < 2 || !(total_sq_bound > 0.0))
    throw std::invalid_argument("hedge_epsilon_variance");
  return std::sqrt(std::log(static_cast<double>(num_actions)) / (3.0 * total_sq_bound));
}

double exp3_gamma_crude(int num_arms, int num_experts, int horizon) {
  if (num_arms < 1 || num_experts < 2 || horizon < 2)
    throw std::invalid_argument("exp3_gamma_crude");
  return std::pow(static_cast<double>(horizon), -1.0 / 3.0) *
         std::cbrt(num_arms * std::log(static_cast<double>(num_experts)));
}

// ---------------------------------------------------------------------------
// Binary prediction

MajorityVote::MajorityVote(int num_experts) : alive_(num_experts, true) {
  if (num_experts < 1) throw std::invalid_argument("MajorityVote: need at least one expert");
}

int MajorityVote::predict(std::span<const int> preds) const {
  if (preds.size() != alive_.size()) throw std::invalid_argument("MajorityVote: size mismatch");
  int ones = 0, total = 0;
  for (std::size_t e = 0; e < alive_.size(); ++e) {
    if (!alive_[e]) continue;
    ++total;
    ones += preds[e];
  }
  if (total == 0) throw std::logic_error("MajorityVote: no perfect expert (precondition breach)");
  return 2 * ones > total ? 1 : 0;  // ties predict 0
}

void MajorityVote::observe(std::span<const int> preds, int true_label) {
  if (predict(preds) != true_label) ++mistakes_;
  for (std::size_t e = 0; e < alive_.size(); ++e)
    if (alive_[e] && preds[e] != true_label) alive_[e] = false;
  bool any = false;
  for (bool a : alive_) any = any || a;
  if (!any) throw std::logic_error("MajorityVote: every expert erred (precondition breach)");
}

Wma::Wma(int num_experts, double eps) : weights_(num_experts, 1.0), eps_(eps) {
  if (num_experts < 1) throw std::invalid_argument("Wma: need at least one expert");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("Wma: eps must be in (0,1)");
}

int Wma::predict(std::span<const int> preds) const {
  if (preds.size() != weights_.size()) throw std::invalid_argument("Wma: size mismatch");
  double ones = 0.0, total = 0.0;
  for (std::size_t e = 0; e < weights_.size(); ++e) {
    total += weights_[e];
    if (preds[e] == 1) ones += weights_[e];
  }
  return 2.0 * ones > total ? 1 : 0;
}

void Wma::observe(std::span<const int> preds, int true_label) {
  if (predict(preds) != true_label) ++mistakes_;
  for (std::size_t e = 0; e < weights_.size(); ++e)
    if (preds[e] != true_label) weights_[e] *= 1.0 - eps_;
}

// ---------------------------------------------------------------------------
// Hedge

HedgeAgent::HedgeAgent(int num_actions, double eps) : state_(num_actions, eps) {}

ArmIndex HedgeAgent::act(RngStream& rng) {
  const auto p = state_.probabilities();
  return rng.categorical(p);
}

void HedgeAgent::observe(const Feedback& fb) {
  observe_costs(std::get<FullCosts>(fb).costs);
}

void HedgeAgent::observe_costs(std::span<const double> costs) { state_.apply_costs(costs); }

std::unique_ptr<Agent> hedge(int num_actions, double eps) {
  return std::make_unique<HedgeAgent>(num_actions, eps);
}

// ---------------------------------------------------------------------------
// EXP4 / EXP3

Exp4Core::Exp4Core(int num_arms, int num_experts, double gamma, double eps)
    : num_arms_(num_arms), gamma_(gamma), experts_(num_experts, eps) {
  if (num_arms < 1) throw std::invalid_argument("Exp4Core: need at least one arm");
  if (!(gamma >= 0.0 && gamma <= 0.5)) throw std::invalid_argument("Exp4Core: gamma in [0, 0.5]");
}

std::vector<double> Exp4Core::arm_distribution(std::span<const ArmIndex> recs) const {
  if (static_cast<int>(recs.size()) != experts_.size())
    throw std::invalid_argument("Exp4Core: one recommendation per expert required");
  const auto p = experts_.probabilities();
  std::vector<double> q(num_arms_, gamma_ / num_arms_);
  for (std::size_t e = 0; e < recs.size(); ++e) {
    const ArmIndex a = recs[e];
    if (a < 0 || a >= num_arms_) throw std::out_of_range("Exp4Core: recommendation out of range");
    q[a] += (1.0 - gamma_) * p[e];
  }
  return q;
}

ArmIndex Exp4Core::sample_arm(std::span<const ArmIndex> recs, RngStream& rng) {
  const auto p = experts_.probabilities();
  if (gamma_ > 0.0 && rng.bernoulli(gamma_)) return rng.uniform_int(num_arms_);
  const int e = rng.categorical(p);
  return recs[e];
}

std::vector<double> Exp4Core::fake_costs(std::span<const ArmIndex> recs, ArmIndex chosen_arm,
                                         double chosen_cost) const {
  const auto q = arm_distribution(recs);
  const double propensity = q.at(chosen_arm);
  if (!(propensity > 0.0))
    throw std::logic_error("Exp4Core: chosen arm has zero propensity");
  std::vector<double> fake(recs.size(), 0.0);
  for (std::size_t e = 0; e < recs.size(); ++e)
    if (recs[e] == chosen_arm) fake[e] = chosen_cost / propensity;
  return fake;
}

void Exp4Core::update(std::span<const ArmIndex> recs, ArmIndex chosen_arm, double chosen_cost) {
  if (chosen_cost < 0.0) throw std::domain_error("Exp4Core: costs must be nonnegative");
  experts_.apply_costs(fake_costs(recs, chosen_arm, chosen_cost));
}

namespace {

class Exp4Agent final : public Agent {
 public:
  Exp4Agent(ExpertTable table, double gamma, double eps)
      : table_(std::move(table)),
        core_(table_.num_arms, static_cast<int>(table_.recs.empty() ? 0 : table_.recs.front().size()),
              gamma, eps) {
    if (table_.recs.empty() || table_.recs.front().empty())
      throw std::invalid_argument("exp4: empty expert table");
  }

  int num_arms() const override { return core_.num_arms(); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }

  ArmIndex act(RngStream& rng) override {
    if (round_ >= static_cast<int>(table_.recs.size()))
      throw std::out_of_range("exp4: expert table exhausted");
    last_arm_ = core_.sample_arm(table_.recs[round_], rng);
    return last_arm_;
  }

  void observe(const Feedback& fb) override {
    const double cost = std::get<BanditReward>(fb).value;
    core_.update(table_.recs[round_], last_arm_, cost);
    ++round_;
  }

 private:
  ExpertTable table_;
  Exp4Core core_;
  int round_ = 0;
  ArmIndex last_arm_ = 0;
};

// Identity experts, so the table is implicit and never exhausts.
class Exp3Agent final : public Agent {
 public:
  Exp3Agent(int num_arms, double gamma, double eps)
      : identity_(num_arms), core_(num_arms, num_arms, gamma, eps) {
    for (int a = 0; a < num_arms; ++a) identity_[a] = a;
  }

  int num_arms() const override { return core_.num_arms(); }
  FeedbackKind feedback_kind() const override { return FeedbackKind::BanditReward; }

  ArmIndex act(RngStream& rng) override {
    last_arm_ = core_.sample_arm(identity_, rng);
    return last_arm_;
  }

  void observe(const Feedback& fb) override {
    core_.update(identity_, last_arm_, std::get<BanditReward>(fb).value);
  }

 private:
  std::vector<ArmIndex> identity_;
  Exp4Core core_;
  ArmIndex last_arm_ = 0;
};

}  // namespace

std::unique_ptr<Agent> exp4(ExpertTable table, double gamma, double eps) {
  return std::make_unique<Exp4Agent>(std::move(table), gamma, eps);
}

std::unique_ptr<Agent> exp3(int num_arms, double gamma, double eps) {
  return std::make_unique<Exp3Agent>(num_arms, gamma, eps);
}

}  // namespace banditlab::adversarial
