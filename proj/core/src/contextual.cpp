#include "banditlab/contextual.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "banditlab/detail/linalg.hpp"
#include "banditlab/lipschitz.hpp"

namespace banditlab::contextual {

FiniteContextEnv::FiniteContextEnv(std::vector<std::vector<double>> means,
                                   std::vector<double> context_probs)
    : means_(std::move(means)), context_probs_(std::move(context_probs)) {
  if (means_.empty() || means_.front().empty())
    throw std::invalid_argument("FiniteContextEnv: empty mean table");
  if (context_probs_.size() != means_.size())
    throw std::invalid_argument("FiniteContextEnv: context distribution size mismatch");
  for (const auto& row : means_) {
    if (row.size() != means_.front().size())
      throw std::invalid_argument("FiniteContextEnv: ragged mean table");
    for (double m : row)
      if (!(m >= 0.0 && m <= 1.0))
        throw std::invalid_argument("FiniteContextEnv: means must be in [0,1]");
  }
}

int FiniteContextEnv::draw_context(RngStream& rng) const {
  return rng.categorical(context_probs_);
}

double FiniteContextEnv::sample_reward(int context, ArmIndex arm, RngStream& rng) const {
  return rng.bernoulli(mean(context, arm)) ? 1.0 : 0.0;
}

double FiniteContextEnv::policy_value(const Policy& policy) const {
  double v = 0.0;
  for (int x = 0; x < num_contexts(); ++x) v += context_probs_[x] * mean(x, policy(x));
  return v;
}

Policy FiniteContextEnv::best_response() const {
  Policy pi;
  pi.table.resize(num_contexts());
  for (int x = 0; x < num_contexts(); ++x) {
    ArmIndex best = 0;
    for (int a = 1; a < num_arms(); ++a)
      if (mean(x, a) > mean(x, best)) best = a;
    pi.table[x] = best;
  }
  return pi;
}

ContextualEpisodeResult run_contextual_episode(const FiniteContextEnv& env, ContextualAgent& agent,
                                               int T, RngStream rng) {
  if (T < 1) throw std::invalid_argument("run_contextual_episode: T must be >= 1");
  RngStream agent_rng = rng.fork("agent");
  RngStream env_rng = rng.fork("env");
  const Policy star = env.best_response();
  ContextualEpisodeResult result;
  for (int t = 1; t <= T; ++t) {
    const int x = env.draw_context(env_rng);
    const ArmIndex a = agent.act(x, agent_rng);
    if (a < 0 || a >= env.num_arms())
      throw std::out_of_range("run_contextual_episode: arm out of range");
    const double r = env.sample_reward(x, a, env_rng);
    agent.observe(r);
    result.total_reward += r;
    result.pseudo_regret += env.mean(x, star(x)) - env.mean(x, a);
    result.contexts.push_back(x);
    result.arms.push_back(a);
  }
  return result;
}

PerContextAgent::PerContextAgent(std::function<std::unique_ptr<Agent>()> inner_factory)
    : inner_factory_(std::move(inner_factory)) {
  if (!inner_factory_) throw std::invalid_argument("per_context_agent: missing factory");
}

ArmIndex PerContextAgent::act(int context, RngStream& rng) {
  auto it = copies_.find(context);
  if (it == copies_.end()) it = copies_.emplace(context, inner_factory_()).first;
  last_copy_ = it->second.get();
  return last_copy_->act(rng);
}

void PerContextAgent::observe(double reward) {
  if (last_copy_ == nullptr) throw std::logic_error("per_context_agent: observe before act");
  last_copy_->observe(BanditReward{reward});
}

LipschitzContextAgent::LipschitzContextAgent(double lipschitz_constant, double eps,
                                             std::function<std::unique_ptr<Agent>()> inner_factory)
    : lipschitz_(lipschitz_constant),
      eps_(eps),
      mesh_(lipschitz::uniform_mesh(eps)),
      inner_(std::move(inner_factory)) {
  if (!(lipschitz_constant > 0.0))
    throw std::invalid_argument("lipschitz_context_agent: L must be positive");
}

double LipschitzContextAgent::snap(double context) const {
  if (!(context >= 0.0 && context <= 1.0))
    throw std::domain_error("lipschitz_context_agent: context outside [0,1]");
  double best = mesh_[0];
  double best_gap = std::abs(context - mesh_[0]);
  for (double m : mesh_) {
    const double gap = std::abs(context - m);
    if (gap < best_gap) {  // strict: ties keep the smaller mesh point
      best_gap = gap;
      best = m;
    }
  }
  return best;
}

ArmIndex LipschitzContextAgent::act(double context, RngStream& rng) {
  const double snapped = snap(context);
  const auto it = std::lower_bound(mesh_.begin(), mesh_.end(), snapped);
  return inner_.act(static_cast<int>(it - mesh_.begin()), rng);
}

void LipschitzContextAgent::observe(double reward) { inner_.observe(reward); }

// ---------------------------------------------------------------------------
// LinUCB

using detail::solve_linear;

LinUcbAgent::LinUcbAgent(int num_arms, int dim, double beta) : dim_(dim), beta_(beta) {
  if (num_arms < 1 || dim < 1) throw std::invalid_argument("linucb: bad dimensions");
  if (!(beta >= 0.0)) throw std::invalid_argument("linucb: beta must be >= 0");
  a_matrices_.assign(num_arms, std::vector<double>(dim * dim, 0.0));
  for (auto& m : a_matrices_)
    for (int i = 0; i < dim; ++i) m[i * dim + i] = 1.0;  // ridge identity
  b_vectors_.assign(num_arms, std::vector<double>(dim, 0.0));
}

double LinUcbAgent::default_beta(int dim, int horizon) {
  return std::sqrt(dim * std::log(static_cast<double>(horizon)));
}

std::vector<double> LinUcbAgent::theta_hat(ArmIndex arm) const {
  return solve_linear(a_matrices_.at(arm), b_vectors_.at(arm), dim_);
}

double LinUcbAgent::ucb(ArmIndex arm, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("linucb: dimension mismatch");
  const auto theta = theta_hat(arm);
  double mean = 0.0;
  for (int i = 0; i < dim_; ++i) mean += x[i] * theta[i];
  const auto a_inv_x = solve_linear(a_matrices_.at(arm), std::vector<double>(x.begin(), x.end()), dim_);
  double quad = 0.0;
  for (int i = 0; i < dim_; ++i) quad += x[i] * a_inv_x[i];
  return mean + beta_ * std::sqrt(std::max(0.0, quad));
}

ArmIndex LinUcbAgent::act(const std::vector<std::vector<double>>& arm_features) {
  if (arm_features.size() != a_matrices_.size())
    throw std::invalid_argument("linucb: need one feature vector per arm");
  ArmIndex best = 0;
  double best_ucb = ucb(0, arm_features[0]);
  for (std::size_t a = 1; a < arm_features.size(); ++a) {
    const double u = ucb(static_cast<ArmIndex>(a), arm_features[a]);
    if (u > best_ucb) {
      best_ucb = u;
      best = static_cast<ArmIndex>(a);
    }
  }
  last_arm_ = best;
  last_features_ = arm_features[best];
  return best;
}

void LinUcbAgent::observe(double reward) {
  auto& a = a_matrices_.at(last_arm_);
  auto& b = b_vectors_.at(last_arm_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) a[i * dim_ + j] += last_features_[i] * last_features_[j];
    b[i] += reward * last_features_[i];
  }
}

// ---------------------------------------------------------------------------
// Policies

Exp4PoliciesAgent::Exp4PoliciesAgent(std::vector<Policy> policies, int num_arms, double gamma,
                                     double eps)
    : policies_(std::move(policies)),
      core_(num_arms, static_cast<int>(policies_.size()), gamma, eps) {
  if (policies_.empty()) throw std::invalid_argument("exp4_policies: empty policy list");
}

ArmIndex Exp4PoliciesAgent::act(int context, RngStream& rng) {
  last_recs_.resize(policies_.size());
  for (std::size_t e = 0; e < policies_.size(); ++e) last_recs_[e] = policies_[e](context);
  last_arm_ = core_.sample_arm(last_recs_, rng);
  return last_arm_;
}

void Exp4PoliciesAgent::observe(double reward) {
  if (!(reward >= 0.0 && reward <= 1.0))
    throw std::invalid_argument("exp4_policies: rewards must be in [0,1]");
  core_.update(last_recs_, last_arm_, 1.0 - reward);  // cost = 1 - reward
}

int exact_classification_oracle(const std::vector<ClassificationPoint>& points,
                                const std::vector<Policy>& policies) {
  if (points.empty() || policies.empty())
    throw std::invalid_argument("exact_classification_oracle: empty input");
  int best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    double v = 0.0;
    for (const auto& pt : points) v += pt.fake_rewards.at(policies[i](pt.context));
    if (v > best_value) {  // strict: ties keep the first policy
      best_value = v;
      best = static_cast<int>(i);
    }
  }
  return best;
}

ExploreThenExploitAgent::ExploreThenExploitAgent(std::vector<Policy> policies, int num_arms,
                                                 long long explore_rounds)
    : policies_(std::move(policies)), num_arms_(num_arms), explore_rounds_(explore_rounds) {
  if (policies_.empty()) throw std::invalid_argument("explore_then_exploit: empty policy list");
  if (explore_rounds_ < 1) throw std::invalid_argument("explore_then_exploit: N must be >= 1");
}

long long ExploreThenExploitAgent::default_explore_rounds(int num_arms, std::size_t num_policies,
                                                          int horizon) {
  const double t = static_cast<double>(horizon);
  const double raw =
      std::pow(t, 2.0 / 3.0) * std::cbrt(num_arms * std::log(num_policies * t));
  return std::max<long long>(1, static_cast<long long>(std::floor(raw)));
}

ArmIndex ExploreThenExploitAgent::act(int context, RngStream& rng) {
  ++round_;
  last_context_ = context;
  if (round_ <= explore_rounds_) {
    last_arm_ = rng.uniform_int(num_arms_);
    return last_arm_;
  }
  if (!committed_) {
    chosen_policy_ = exact_classification_oracle(data_, policies_);
    committed_ = true;
  }
  last_arm_ = policies_[chosen_policy_](context);
  return last_arm_;
}

void ExploreThenExploitAgent::observe(double reward) {
  if (committed_ || round_ > explore_rounds_) return;
  ClassificationPoint pt;
  pt.context = last_context_;
  pt.fake_rewards.assign(num_arms_, 0.0);
  pt.fake_rewards[last_arm_] = reward * num_arms_;  // IPS with uniform propensity 1/K
  data_.push_back(std::move(pt));
}

double ips_estimate(const Policy& policy, const std::vector<LoggedPoint>& data) {
  if (data.empty()) throw std::invalid_argument("ips_estimate: empty dataset");
  double total = 0.0;
  for (const auto& pt : data) {
    if (!(pt.propensity > 0.0)) throw std::domain_error("ips_estimate: zero propensity");
    if (policy(pt.context) == pt.arm) total += pt.reward / pt.propensity;
  }
  return total / static_cast<double>(data.size());
}

JoinResult join_logs(const std::vector<DecisionTuple>& decisions,
                     const std::vector<OutcomeTuple>& outcomes) {
  std::unordered_map<long long, double> rewards;
  rewards.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    if (!rewards.emplace(o.tuple_id, o.reward).second)
      throw std::runtime_error("join_logs: duplicate outcome tuple_id " +
                               std::to_string(o.tuple_id));
  }
  std::set<long long> seen;
  JoinResult result;
  result.points.reserve(decisions.size());
  for (const auto& d : decisions) {
    if (!seen.insert(d.tuple_id).second)
      throw std::runtime_error("join_logs: duplicate decision tuple_id " +
                               std::to_string(d.tuple_id));
    LoggedPoint pt;
    pt.context = d.context;
    pt.arm = d.arm;
    pt.propensity = d.propensity;
    const auto it = rewards.find(d.tuple_id);
    if (it == rewards.end()) {
      pt.reward = 0.0;
      result.missing_outcome.push_back(true);
    } else {
      pt.reward = it->second;
      result.missing_outcome.push_back(false);
    }
    result.points.push_back(pt);
  }
  return result;
}

void write_decision_log(std::ostream& out, const std::vector<DecisionTuple>& decisions) {
  for (const auto& d : decisions)
    out << "D\t" << d.tuple_id << '\t' << d.context << '\t' << d.arm << '\t' << d.propensity
        << '\n';
}

void write_outcome_log(std::ostream& out, const std::vector<OutcomeTuple>& outcomes) {
  for (const auto& o : outcomes) out << "O\t" << o.tuple_id << '\t' << o.reward << '\n';
}

std::vector<DecisionTuple> read_decision_log(std::istream& in) {
  std::vector<DecisionTuple> decisions;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    DecisionTuple d;
    if (!(ls >> tag >> d.tuple_id >> d.context >> d.arm >> d.propensity) || tag != "D")
      throw std::runtime_error("read_decision_log: bad line: " + line);
    decisions.push_back(d);
  }
  return decisions;
}

std::vector<OutcomeTuple> read_outcome_log(std::istream& in) {
  std::vector<OutcomeTuple> outcomes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    OutcomeTuple o;
    if (!(ls >> tag >> o.tuple_id >> o.reward) || tag != "O")
      throw std::runtime_error("read_outcome_log: bad line: " + line);
    outcomes.push_back(o);
  }
  return outcomes;
}

void write_joined_log(std::ostream& out, const std::vector<LoggedPoint>& points) {
  for (const auto& pt : points)
    out << "J\t" << pt.context << '\t' << pt.arm << '\t' << pt.propensity << '\t' << pt.reward
        << '\n';
}

}  // namespace banditlab::contextual
