#include "banditlab/bwk.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "banditlab/adversarial.hpp"
#include "banditlab/concentration.hpp"
#include "banditlab/detail/linalg.hpp"

namespace banditlab::bwk {

OutcomeMatrix::OutcomeMatrix(std::vector<std::vector<double>> rows_) : rows(std::move(rows_)) {
  if (rows.empty() || rows.front().size() < 2)
    throw std::invalid_argument("OutcomeMatrix: need at least one arm and one resource");
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw std::invalid_argument("OutcomeMatrix: ragged rows");
}

std::vector<double> OutcomeDistribution::expected() const {
  if (rows.empty() || rows.size() != probs.size())
    throw std::invalid_argument("OutcomeDistribution: rows/probs mismatch");
  std::vector<double> mean(rows.front().size(), 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += probs[i] * rows[i][j];
  return mean;
}

int OutcomeDistribution::sample_row(RngStream& rng) const {
  return rng.categorical(probs);
}

OutcomeMatrix BwKInstance::expected_matrix() const {
  std::vector<std::vector<double>> rows;
  rows.reserve(arms.size());
  for (const auto& arm : arms) rows.push_back(arm.expected());
  return OutcomeMatrix(std::move(rows));
}

BwKInstance BwKInstance::make(std::vector<OutcomeDistribution> arms, std::vector<double> budgets,
                              long long horizon) {
  if (arms.empty()) throw std::invalid_argument("BwKInstance: no arms");
  if (budgets.empty()) throw std::invalid_argument("BwKInstance: no resources");
  if (horizon < 1) throw std::invalid_argument("BwKInstance: horizon must be >= 1");
  const std::size_t width = budgets.size() + 1;
  for (const auto& arm : arms) {
    if (arm.rows.empty() || arm.rows.size() != arm.probs.size())
      throw std::invalid_argument("BwKInstance: bad outcome distribution");
    double sum = 0.0;
    for (double p : arm.probs) sum += p;
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("BwKInstance: outcome probs must sum to 1");
    for (const auto& row : arm.rows) {
      if (row.size() != width)
        throw std::invalid_argument("BwKInstance: outcome rows must have d+1 entries");
      for (double x : row)
        if (!(x >= 0.0 && x <= 1.0))
          throw std::invalid_argument("BwKInstance: outcomes must lie in [0,1]");
    }
  }
  for (double b : budgets)
    if (!(b > 0.0 && b <= static_cast<double>(horizon)))
      throw std::invalid_argument("BwKInstance: budgets must lie in (0, T]");

  BwKInstance instance;
  instance.arms = std::move(arms);
  instance.budgets = std::move(budgets);
  instance.horizon = horizon;
  // locate or append the null arm: zero reward, zero consumption, surely
  for (std::size_t a = 0; a < instance.arms.size() && instance.null_arm < 0; ++a) {
    const auto mean = instance.arms[a].expected();
    bool zero = true;
    for (double x : mean) zero = zero && x == 0.0;
    if (zero) instance.null_arm = static_cast<int>(a);
  }
  if (instance.null_arm < 0) {
    OutcomeDistribution null_arm;
    null_arm.rows.push_back(std::vector<double>(width, 0.0));
    null_arm.probs.push_back(1.0);
    instance.arms.push_back(std::move(null_arm));
    instance.null_arm = static_cast<int>(instance.arms.size()) - 1;
  }
  return instance;
}

int RescaledInstance::num_resources() const {
  return static_cast<int>(arms.front().rows.front().size()) - 1;
}

OutcomeMatrix RescaledInstance::expected_matrix() const {
  std::vector<std::vector<double>> rows;
  rows.reserve(arms.size());
  for (const auto& arm : arms) rows.push_back(arm.expected());
  return OutcomeMatrix(std::move(rows));
}

RescaledInstance rescale_budgets(const BwKInstance& instance) {
  const double b = *std::min_element(instance.budgets.begin(), instance.budgets.end());
  const double time_rate = b / static_cast<double>(instance.horizon);
  RescaledInstance out;
  out.budget = b;
  out.horizon = instance.horizon;
  out.null_arm = instance.null_arm;
  out.arms.reserve(instance.arms.size());
  for (const auto& arm : instance.arms) {
    OutcomeDistribution scaled;
    scaled.probs = arm.probs;
    for (const auto& row : arm.rows) {
      std::vector<double> srow;
      srow.reserve(row.size() + 1);
      srow.push_back(row[0]);  // reward untouched
      for (std::size_t i = 1; i < row.size(); ++i)
        srow.push_back(row[i] * b / instance.budgets[i - 1]);
      srow.push_back(time_rate);  // time consumed uniformly
      scaled.rows.push_back(std::move(srow));
    }
    out.arms.push_back(std::move(scaled));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact LP by support enumeration

LpSolution solve_lp_general(const OutcomeMatrix& expected, const std::vector<double>& caps) {
  const int k = expected.num_arms();
  const int d = expected.num_resources();
  if (static_cast<int>(caps.size()) != d)
    throw std::invalid_argument("solve_lp_general: caps/resources mismatch");
  if (k > 12 || d > 5) throw std::invalid_argument("solve_lp_general: desk scale is K<=12, d<=5");

  LpSolution best;
  best.value = -1.0;
  std::vector<int> best_support;
  std::vector<std::vector<double>> optimal_vertices;  // same support, same value

  const auto feasible = [&](const std::vector<double>& dist) {
    for (int i = 0; i < d; ++i) {
      double c = 0.0;
      for (int a = 0; a < k; ++a) c += dist[a] * expected.consumption(a, i);
      if (c > caps[i] + 1e-9) return false;
    }
    return true;
  };

  const auto consider = [&](const std::vector<int>& support, const std::vector<int>& tight) {
    const int s = static_cast<int>(support.size());
    std::vector<double> a(s * s, 0.0);
    std::vector<double> rhs(s, 0.0);
    for (int c = 0; c < s; ++c) a[c] = 1.0;  // sum D = 1
    rhs[0] = 1.0;
    for (int r = 1; r < s; ++r) {
      const int resource = tight[r - 1];
      for (int c = 0; c < s; ++c) a[r * s + c] = expected.consumption(support[c], resource);
      rhs[r] = caps[resource];
    }
    std::vector<double> d_support;
    try {
      d_support = detail::solve_linear(std::move(a), std::move(rhs), s);
    } catch (const std::runtime_error&) {
      return;  // degenerate tight set
    }
    std::vector<double> dist(k, 0.0);
    for (int c = 0; c < s; ++c) {
      if (d_support[c] < -1e-9) return;
      dist[support[c]] = std::max(0.0, d_support[c]);
    }
    if (!feasible(dist)) return;
    double value = 0.0;
    for (int arm : support) value += dist[arm] * expected.reward(arm);
    if (value > best.value + 1e-12) {  // lex-first support wins ties across supports
      best.value = value;
      best_support = support;
      optimal_vertices.assign(1, dist);
    } else if (value > best.value - 1e-12 && support == best_support) {
      // degenerate optimum: several vertices share the winning support; keep
      // them all and return their barycenter (still optimal by convexity)
      optimal_vertices.push_back(dist);
    }
  };

  // supports in set-lexicographic order, sizes bounded by d+1
  std::vector<int> support;
  std::vector<int> tight;
  std::function<void(int)> tight_sets = [&](int from) {
    if (static_cast<int>(tight.size()) == static_cast<int>(support.size()) - 1) {
      consider(support, tight);
      return;
    }
    for (int i = from; i < d; ++i) {
      tight.push_back(i);
      tight_sets(i + 1);
      tight.pop_back();
    }
  };
  std::function<void(int)> supports = [&](int from) {
    if (!support.empty()) {
      tight.clear();
      tight_sets(0);
    }
    if (static_cast<int>(support.size()) >= std::min(k, d + 1)) return;
    for (int a = from; a < k; ++a) {
      support.push_back(a);
      supports(a + 1);
      support.pop_back();
    }
  };
  supports(0);

  if (best.value < 0.0) throw std::logic_error("solve_lp_general: no feasible support found");

  best.dist.assign(k, 0.0);
  for (const auto& vertex : optimal_vertices)
    for (int a = 0; a < k; ++a) best.dist[a] += vertex[a] / optimal_vertices.size();

  // bound resources at the optimum
  for (int i = 0; i < d; ++i) {
    double c = 0.0;
    for (int a = 0; a < k; ++a) c += best.dist[a] * expected.consumption(a, i);
    if (std::abs(c - caps[i]) <= 1e-9) best.binding.push_back(i);
  }
  return best;
}

LpSolution solve_bwk_lp(const OutcomeMatrix& expected, double budget, double horizon) {
  if (!(budget > 0.0) || !(horizon > 0.0)) throw std::invalid_argument("solve_bwk_lp: bad B or T");
  return solve_lp_general(expected, std::vector<double>(expected.num_resources(), budget / horizon));
}

double lagrange_payoff(const OutcomeMatrix& matrix, int arm, int resource, double horizon,
                       double budget) {
  if (!(budget > 0.0) || !std::isfinite(horizon / budget))
    throw std::invalid_argument("lagrange_payoff: T/B must be finite");
  return matrix.reward(arm) + 1.0 - horizon / budget * matrix.consumption(arm, resource);
}

// ---------------------------------------------------------------------------
// Environment

BwKEnv::BwKEnv(RescaledInstance instance)
    : instance_(std::move(instance)), consumed_(instance_.num_resources(), 0.0) {}

Feedback BwKEnv::step(ArmIndex arm, RngStream& rng) {
  if (violated_) throw std::logic_error("BwKEnv: stepping after stop");
  const auto& dist = instance_.arms.at(arm);
  const auto& row = dist.rows[dist.sample_row(rng)];
  OutcomeRow outcome;
  outcome.reward = row[0];
  outcome.consumption.assign(row.begin() + 1, row.end());
  for (std::size_t i = 0; i < consumed_.size(); ++i) {
    consumed_[i] += outcome.consumption[i];
    if (consumed_[i] > instance_.budget + 1e-12) violated_ = true;
  }
  return outcome;
}

double adjusted_total_reward(const History& history, bool violated) {
  double total = 0.0;
  const auto& records = history.records();
  const std::size_t cutoff = violated && !records.empty() ? records.size() - 1 : records.size();
  for (std::size_t i = 0; i < cutoff; ++i)
    total += std::get<OutcomeRow>(records[i].feedback).reward;
  return total;
}

// ---------------------------------------------------------------------------
// LagrangeBwK

namespace {

class LagrangeBwkAgent final : public Agent {
 public:
  LagrangeBwkAgent(const RescaledInstance& instance, LagrangeBwkConfig config)
      : num_arms_(instance.num_arms()),
        num_resources_(instance.num_resources()),
        horizon_(static_cast<double>(instance.horizon)),
        budget_(instance.budget),
        primal_(nullptr),
        dual_(num_resources_ >= 2
                  ? std::make_unique<adversarial::WeightState>(
                        num_resources_,
                        config.dual_eps > 0.0
                            ? config.dual_eps
                            : adversarial::hedge_epsilon_bounded(num_resources_, horizon_))
                  : nullptr) {
    const double gamma =
        config.primal_gamma > 0.0
            ? config.primal_gamma
            : std::min(0.5, std::sqrt(num_arms_ * std::log(static_cast<double>(num_arms_)) /
                                      horizon_));
    const double hedge_u = num_arms_ / std::max(1e-9, 1.0 - gamma) * horizon_;
    const double eps = config.primal_eps > 0.0
                           ? config.primal_eps
                           : adversarial::hedge_epsilon_variance(std::max(2, num_arms_), hedge_u);
    primal_ = std::make_unique<adversarial::Exp4Core>(num_arms_, num_arms_, gamma, eps);
    identity_.resize(num_arms_);
    for (int a = 0; a < num_arms_; ++a) identity_[a] = a;
  }

  int num_arms() const override { return num_arms_; }
  FeedbackKind feedback_kind() const override { return FeedbackKind::OutcomeRow; }

  ArmIndex act(RngStream& rng) override {
    last_arm_ = primal_->sample_arm(identity_, rng);
    last_resource_ = dual_ ? rng.categorical(dual_->probabilities()) : 0;
    return last_arm_;
  }

  void observe(const Feedback& fb) override {
    const auto scaled = lagrange_scaled_payoffs(std::get<OutcomeRow>(fb), horizon_, budget_);
    // primal: reward -> cost on the chosen arm only (bandit feedback)
    primal_->update(identity_, last_arm_, 1.0 - scaled.at(last_resource_));
    // dual: full feedback, payoff is its cost
    if (dual_) dual_->apply_costs(scaled);
  }

 private:
  int num_arms_;
  int num_resources_;
  double horizon_;
  double budget_;
  std::unique_ptr<adversarial::Exp4Core> primal_;
  std::unique_ptr<adversarial::WeightState> dual_;
  std::vector<ArmIndex> identity_;
  ArmIndex last_arm_ = 0;
  int last_resource_ = 0;
};

// ---------------------------------------------------------------------------
// UCB-BwK

class UcbBwkAgent final : public Agent {
 public:
  explicit UcbBwkAgent(const RescaledInstance& instance)
      : num_arms_(instance.num_arms()),
        num_resources_(instance.num_resources()),
        horizon_(instance.horizon),
        budget_(instance.budget),
        pulls_(num_arms_, 0),
        reward_sums_(num_arms_, 0.0),
        consumption_sums_(num_arms_, std::vector<double>(num_resources_, 0.0)) {
    const double eps = ucb_bwk_epsilon(num_arms_, budget_);
    shrunk_budget_ = budget_ * (1.0 - eps);
  }

  int num_arms() const override { return num_arms_; }
  FeedbackKind feedback_kind() const override { return FeedbackKind::OutcomeRow; }

  ArmIndex act(RngStream& rng) override {
    ++round_;
    if (round_ <= num_arms_) {
      last_arm_ = static_cast<ArmIndex>(round_ - 1);
      return last_arm_;
    }
    const auto lp = solve_lp_general(optimistic_matrix(), caps());
    last_arm_ = rng.categorical(lp.dist);
    return last_arm_;
  }

  void observe(const Feedback& fb) override {
    const auto& row = std::get<OutcomeRow>(fb);
    ++pulls_.at(last_arm_);
    reward_sums_[last_arm_] += row.reward;
    for (int i = 0; i < num_resources_; ++i)
      consumption_sums_[last_arm_][i] += row.consumption.at(i);
  }

  OutcomeMatrix optimistic_matrix() const {
    std::vector<std::vector<double>> trimmed(num_arms_);
    for (int a = 0; a < num_arms_; ++a)
      trimmed[a].assign(consumption_sums_[a].begin(), consumption_sums_[a].end() - 1);
    return optimistic_outcome_matrix(pulls_, reward_sums_, trimmed,
                                     budget_ / static_cast<double>(horizon_), horizon_);
  }

  std::vector<double> caps() const {
    std::vector<double> c(num_resources_, shrunk_budget_ / static_cast<double>(horizon_));
    c.back() = budget_ / static_cast<double>(horizon_);  // time budget is not shrunk
    return c;
  }

 private:
  int num_arms_;
  int num_resources_;
  long long horizon_;
  double budget_;
  double shrunk_budget_;
  long long round_ = 0;
  std::vector<long long> pulls_;
  std::vector<double> reward_sums_;
  std::vector<std::vector<double>> consumption_sums_;
  ArmIndex last_arm_ = 0;
};

}  // namespace

std::unique_ptr<Agent> lagrange_bwk(const RescaledInstance& instance, LagrangeBwkConfig config) {
  return std::make_unique<LagrangeBwkAgent>(instance, config);
}

std::unique_ptr<Agent> ucb_bwk(const RescaledInstance& instance) {
  return std::make_unique<UcbBwkAgent>(instance);
}

double ucb_bwk_epsilon(int num_arms, double budget) {
  if (num_arms < 1 || !(budget > 0.0)) throw std::invalid_argument("ucb_bwk_epsilon");
  return std::min(0.5, std::sqrt(num_arms / budget));
}

OutcomeMatrix optimistic_outcome_matrix(const std::vector<long long>& pulls,
                                        const std::vector<double>& reward_sums,
                                        const std::vector<std::vector<double>>& consumption_sums,
                                        double time_rate, long long horizon) {
  const std::size_t k = pulls.size();
  if (reward_sums.size() != k || consumption_sums.size() != k)
    throw std::invalid_argument("optimistic_outcome_matrix: per-arm stats disagree");
  std::vector<std::vector<double>> rows(k);
  for (std::size_t a = 0; a < k; ++a) {
    const long long n = std::max(1LL, pulls[a]);
    const double rad =
        concentration::hoeffding_radius(n, std::max(2.0, static_cast<double>(horizon)));
    auto& row = rows[a];
    row.push_back(std::clamp(reward_sums[a] / n + rad, 0.0, 1.0));
    for (double sum : consumption_sums[a]) row.push_back(std::clamp(sum / n - rad, 0.0, 1.0));
    row.push_back(time_rate);  // known exactly, no interval
  }
  return OutcomeMatrix(std::move(rows));
}

std::vector<double> lagrange_scaled_payoffs(const OutcomeRow& row, double horizon, double budget) {
  const double lo = 1.0 - horizon / budget;
  const double range = 1.0 + horizon / budget;
  std::vector<double> scaled(row.consumption.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    const double payoff = row.reward + 1.0 - horizon / budget * row.consumption[i];
    scaled[i] = (payoff - lo) / range;
  }
  return scaled;
}

// ---------------------------------------------------------------------------
// Example environments

namespace {

double acceptance_probability(const ValueDistribution& values, double price, bool buyer) {
  double p = 0.0;
  for (std::size_t i = 0; i < values.values.size(); ++i) {
    const bool accepted = buyer ? values.values[i] >= price : price >= values.values[i];
    if (accepted) p += values.probs[i];
  }
  return p;
}

}  // namespace

BwKInstance pricing_env(const ValueDistribution& values, const std::vector<double>& price_grid,
                        double budget, long long horizon) {
  if (price_grid.empty()) throw std::invalid_argument("pricing_env: empty price grid");
  std::vector<OutcomeDistribution> arms;
  for (double p : price_grid) {
    const double s = acceptance_probability(values, p, /*buyer=*/true);
    OutcomeDistribution arm;
    arm.rows = {{p, 1.0}, {0.0, 0.0}};
    arm.probs = {s, 1.0 - s};
    arms.push_back(std::move(arm));
  }
  return BwKInstance::make(std::move(arms), {budget}, horizon);
}

BwKInstance procurement_env(const ValueDistribution& values, const std::vector<double>& price_grid,
                            double budget, long long horizon) {
  if (price_grid.empty()) throw std::invalid_argument("procurement_env: empty price grid");
  std::vector<OutcomeDistribution> arms;
  for (double p : price_grid) {
    const double s = acceptance_probability(values, p, /*buyer=*/false);
    OutcomeDistribution arm;
    arm.rows = {{1.0, p}, {0.0, 0.0}};
    arm.probs = {s, 1.0 - s};
    arms.push_back(std::move(arm));
  }
  return BwKInstance::make(std::move(arms), {budget}, horizon);
}

BwKInstance ppc_env(const std::vector<double>& click_probs, const std::vector<double>& rewards,
                    const std::vector<double>& budgets, long long horizon) {
  if (click_probs.size() != rewards.size() || click_probs.size() != budgets.size() ||
      click_probs.empty())
    throw std::invalid_argument("ppc_env: per-ad vectors must align");
  const int k = static_cast<int>(click_probs.size());
  std::vector<OutcomeDistribution> arms;
  for (int a = 0; a < k; ++a) {
    OutcomeDistribution arm;
    std::vector<double> click(k + 1, 0.0), no_click(k + 1, 0.0);
    click[0] = rewards[a];
    click[a + 1] = rewards[a];  // advertiser a pays its per-click reward
    arm.rows = {click, no_click};
    arm.probs = {click_probs[a], 1.0 - click_probs[a]};
    arms.push_back(std::move(arm));
  }
  return BwKInstance::make(std::move(arms), budgets, horizon);
}

BwKInstance load_instance(std::istream& in) {
  long long horizon = 0;
  std::vector<double> budgets;
  std::vector<OutcomeDistribution> arms;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
    if (tag == "horizon") {
      if (!(ls >> horizon)) throw std::runtime_error("load_instance: bad horizon line");
    } else if (tag == "budgets") {
      double b;
      while (ls >> b) budgets.push_back(b);
    } else if (tag == "arm") {
      arms.emplace_back();
    } else if (tag == "row") {
      if (arms.empty()) throw std::runtime_error("load_instance: row before any arm");
      double prob;
      if (!(ls >> prob)) throw std::runtime_error("load_instance: bad row line");
      std::vector<double> row;
      double x;
      while (ls >> x) row.push_back(x);
      if (row.size() != budgets.size() + 1)
        throw std::runtime_error("load_instance: row needs reward plus d consumptions");
      arms.back().rows.push_back(std::move(row));
      arms.back().probs.push_back(prob);
    } else {
      throw std::runtime_error("load_instance: unknown tag '" + tag + "'");
    }
  }
  return BwKInstance::make(std::move(arms), std::move(budgets), horizon);
}

BwKInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_instance: cannot open " + path);
  return load_instance(in);
}

}  // namespace banditlab::bwk
