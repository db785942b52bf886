#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "banditlab/episode.hpp"

namespace banditlab::lipschitz {

// Metric on [0,1]: either L*|x-y| or |x-y|^(1/d).
struct Interval1DMetric {
  enum class Kind { Scaled, Power };
  Kind kind = Kind::Scaled;
  double param = 1.0;  // L > 0 or d >= 1

  static Interval1DMetric scaled(double lipschitz_constant);
  static Interval1DMetric power(double exponent_denominator);
  double distance(double x, double y) const;
  // half-width h of {y : distance(x, y) <= r} around x
  double ball_halfwidth(double r) const;
};

// {0, eps, 2 eps, ..., 1}; 1 is always included.
std::vector<double> uniform_mesh(double eps);

// eps = (T L^2 / ln T)^(-1/3), the tuned uniform-discretization step.
double uniform_mesh_default_eps(double lipschitz_constant, int horizon);

// Environment over continuum arms x in [0,1] with Bernoulli rewards.
class ContinuumEnv {
 public:
  virtual ~ContinuumEnv() = default;
  virtual double mean(double x) const = 0;
  virtual double sup_mean() const = 0;
  double sample(double x, RngStream& rng) const;
};

// Mean per the bump construction: 1/2 + eps - L |x - x*|, floored at 1/2.
class BumpEnv final : public ContinuumEnv {
 public:
  BumpEnv(double x_star, double eps, double lipschitz_constant);
  double mean(double x) const override;
  double sup_mean() const override { return 0.5 + eps_; }
  double x_star() const { return x_star_; }

 private:
  double x_star_;
  double eps_;
  double lipschitz_;
};

// mu(x) = mu_star - distance(x, x*), floored at 0 (single-target instance).
class TargetEnv final : public ContinuumEnv {
 public:
  TargetEnv(double x_star, double mu_star, Interval1DMetric metric);
  double mean(double x) const override;
  double sup_mean() const override { return mu_star_; }

 private:
  double x_star_;
  double mu_star_;
  Interval1DMetric metric_;
};

class ContinuumAgent {
 public:
  virtual ~ContinuumAgent() = default;
  virtual double act(RngStream& rng) = 0;
  virtual void observe(double reward) = 0;
};

// Inner finite-armed bandit over mesh points; the chosen continuum arm is the
// mesh point itself.
class FixedDiscretizationAgent final : public ContinuumAgent {
 public:
  FixedDiscretizationAgent(std::vector<double> mesh, std::unique_ptr<Agent> inner);
  double act(RngStream& rng) override;
  void observe(double reward) override;
  const std::vector<double>& mesh() const { return mesh_; }

 private:
  std::vector<double> mesh_;
  std::unique_ptr<Agent> inner_;
};

std::unique_ptr<ContinuumAgent> fixed_discretization(
    std::vector<double> mesh, const std::function<std::unique_ptr<Agent>(int)>& inner_factory);

struct ActiveArm {
  double x = 0.0;
  long long pulls = 0;
  double reward_sum = 0.0;
  double mean() const { return pulls == 0 ? 0.0 : reward_sum / pulls; }
};

// Adaptive discretization: activate the leftmost uncovered point whenever the
// confidence balls of active arms leave part of [0,1] uncovered, then play
// the active arm with the highest mean + 2 * radius.
class ZoomingAgent final : public ContinuumAgent {
 public:
  ZoomingAgent(int horizon, Interval1DMetric metric);

  double act(RngStream& rng) override;
  void observe(double reward) override;

  const std::vector<ActiveArm>& active_arms() const { return arms_; }
  double radius(const ActiveArm& arm) const;  // sqrt(2 ln T / (n + 1))
  double index(const ActiveArm& arm) const;   // mean + 2 * radius

  // Leftmost point of [0,1] not covered by the active balls, or nullopt when
  // covered. Exact sweep over the stored interval endpoints.
  std::optional<double> leftmost_uncovered() const;
  bool covers_unit_interval() const { return !leftmost_uncovered().has_value(); }

 private:
  void ensure_covered();

  int horizon_;
  Interval1DMetric metric_;
  std::vector<ActiveArm> arms_;
  std::size_t last_arm_ = 0;
};

struct ContinuumEpisodeResult {
  double total_reward = 0.0;
  double pseudo_regret = 0.0;
  std::vector<double> chosen;
};

ContinuumEpisodeResult run_continuum_episode(const ContinuumEnv& env, ContinuumAgent& agent,
                                             int T, RngStream rng);

}  // namespace banditlab::lipschitz
