#include "banditlab/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace banditlab::lipschitz {

Interval1DMetric Interval1DMetric::scaled(double lipschitz_constant) {
  if (!(lipschitz_constant > 0.0)) throw std::invalid_argument("metric: L must be positive");
  return Interval1DMetric{Kind::Scaled, lipschitz_constant};
}

Interval1DMetric Interval1DMetric::power(double exponent_denominator) {
  if (!(exponent_denominator >= 1.0)) throw std::invalid_argument("metric: d must be >= 1");
  return Interval1DMetric{Kind::Power, exponent_denominator};
}

double Interval1DMetric::distance(double x, double y) const {
  const double gap = std::abs(x - y);
  return kind == Kind::Scaled ? param * gap : std::pow(gap, 1.0 / param);
}

double Interval1DMetric::ball_halfwidth(double r) const {
  if (r < 0.0) return 0.0;
  return kind == Kind::Scaled ? r / param : std::pow(r, param);
}

std::vector<double> uniform_mesh(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("uniform_mesh: eps must be in (0,1]");
  std::vector<double> mesh;
  for (long long i = 0;; ++i) {
    const double x = i * eps;
    if (x >= 1.0 - 1e-15) break;
    mesh.push_back(x);
  }
  mesh.push_back(1.0);
  return mesh;
}

double uniform_mesh_default_eps(double lipschitz_constant, int horizon) {
  if (!(lipschitz_constant > 0.0) || horizon < 2)
    throw std::invalid_argument("uniform_mesh_default_eps");
  const double t = static_cast<double>(horizon);
  return std::pow(t * lipschitz_constant * lipschitz_constant / std::log(t), -1.0 / 3.0);
}

double ContinuumEnv::sample(double x, RngStream& rng) const {
  return rng.bernoulli(mean(x)) ? 1.0 : 0.0;
}

BumpEnv::BumpEnv(double x_star, double eps, double lipschitz_constant)
    : x_star_(x_star), eps_(eps), lipschitz_(lipschitz_constant) {
  if (!(x_star >= 0.0 && x_star <= 1.0)) throw std::domain_error("BumpEnv: x* must be in [0,1]");
  if (!(eps > 0.0 && eps <= 0.5)) throw std::domain_error("BumpEnv: eps must be in (0, 1/2]");
  if (!(lipschitz_constant > 0.0)) throw std::domain_error("BumpEnv: L must be positive");
}

double BumpEnv::mean(double x) const {
  const double gap = std::abs(x - x_star_);
  if (gap >= eps_ / lipschitz_) return 0.5;
  return 0.5 + eps_ - lipschitz_ * gap;
}

TargetEnv::TargetEnv(double x_star, double mu_star, Interval1DMetric metric)
    : x_star_(x_star), mu_star_(mu_star), metric_(metric) {
  if (!(x_star >= 0.0 && x_star <= 1.0)) throw std::domain_error("TargetEnv: x* must be in [0,1]");
  if (!(mu_star > 0.0 && mu_star <= 1.0)) throw std::domain_error("TargetEnv: mu* must be in (0,1]");
}

double TargetEnv::mean(double x) const {
  return std::max(0.0, mu_star_ - metric_.distance(x, x_star_));
}

FixedDiscretizationAgent::FixedDiscretizationAgent(std::vector<double> mesh,
                                                   std::unique_ptr<Agent> inner)
    : mesh_(std::move(mesh)), inner_(std::move(inner)) {
  if (mesh_.empty()) throw std::invalid_argument("fixed_discretization: empty mesh");
  if (!inner_) throw std::invalid_argument("fixed_discretization: missing inner agent");
  if (inner_->num_arms() != static_cast<int>(mesh_.size()))
    throw std::invalid_argument("fixed_discretization: inner agent arm count != mesh size");
}

double FixedDiscretizationAgent::act(RngStream& rng) { return mesh_.at(inner_->act(rng)); }

void FixedDiscretizationAgent::observe(double reward) { inner_->observe(BanditReward{reward}); }

std::unique_ptr<ContinuumAgent> fixed_discretization(
    std::vector<double> mesh, const std::function<std::unique_ptr<Agent>(int)>& inner_factory) {
  auto inner = inner_factory(static_cast<int>(mesh.size()));
  return std::make_unique<FixedDiscretizationAgent>(std::move(mesh), std::move(inner));
}

ZoomingAgent::ZoomingAgent(int horizon, Interval1DMetric metric)
    : horizon_(horizon), metric_(metric) {
  if (horizon < 2) throw std::invalid_argument("zooming: horizon must be >= 2");
}

double ZoomingAgent::radius(const ActiveArm& arm) const {
  return std::sqrt(2.0 * std::log(static_cast<double>(horizon_)) /
                   static_cast<double>(arm.pulls + 1));
}

double ZoomingAgent::index(const ActiveArm& arm) const { return arm.mean() + 2.0 * radius(arm); }

std::optional<double> ZoomingAgent::leftmost_uncovered() const {
  // Sweep the closed confidence balls left to right over their stored
  // (double-precision) endpoints; no tolerance applied.
  std::vector<std::pair<double, double>> balls;
  balls.reserve(arms_.size());
  for (const auto& arm : arms_) {
    const double h = metric_.ball_halfwidth(radius(arm));
    balls.emplace_back(arm.x - h, arm.x + h);
  }
  std::sort(balls.begin(), balls.end());
  double covered_to = 0.0;  // [0, covered_to] is covered so far
  bool any = false;
  for (const auto& [lo, hi] : balls) {
    if (lo > covered_to || (!any && lo > 0.0)) break;
    covered_to = std::max(covered_to, hi);
    any = true;
    if (covered_to >= 1.0) return std::nullopt;
  }
  if (!any) return 0.0;
  return covered_to >= 1.0 ? std::nullopt : std::optional<double>(covered_to);
}

void ZoomingAgent::ensure_covered() {
  // Each activation covers [u - h, u + h] around the leftmost uncovered
  // point, so this terminates after finitely many steps (one, whenever the
  // fresh radius exceeds the metric diameter).
  while (auto uncovered = leftmost_uncovered()) {
    arms_.push_back(ActiveArm{*uncovered, 0, 0.0});
    if (arms_.size() > 100000) throw std::logic_error("zooming: runaway activation");
  }
}

double ZoomingAgent::act(RngStream&) {
  ensure_covered();
  // highest index, ties to the smallest x
  std::size_t best = 0;
  for (std::size_t i = 1; i < arms_.size(); ++i) {
    const double a = index(arms_[i]);
    const double b = index(arms_[best]);
    if (a > b || (a == b && arms_[i].x < arms_[best].x)) best = i;
  }
  last_arm_ = best;
  return arms_[best].x;
}

void ZoomingAgent::observe(double reward) {
  arms_.at(last_arm_).pulls += 1;
  arms_.at(last_arm_).reward_sum += reward;
  // playing the arm shrinks its ball; re-activate eagerly so the covering
  // invariant holds after the round, not just at the next selection
  ensure_covered();
}

ContinuumEpisodeResult run_continuum_episode(const ContinuumEnv& env, ContinuumAgent& agent,
                                             int T, RngStream rng) {
  if (T < 1) throw std::invalid_argument("run_continuum_episode: T must be >= 1");
  RngStream agent_rng = rng.fork("agent");
  RngStream env_rng = rng.fork("env");
  ContinuumEpisodeResult result;
  const double best = env.sup_mean();
  for (int t = 1; t <= T; ++t) {
    const double x = agent.act(agent_rng);
    if (!(x >= 0.0 && x <= 1.0)) throw std::out_of_range("run_continuum_episode: arm outside [0,1]");
    const double r = env.sample(x, env_rng);
    agent.observe(r);
    result.total_reward += r;
    result.pseudo_regret += best - env.mean(x);
    result.chosen.push_back(x);
  }
  return result;
}

}  // namespace banditlab::lipschitz
