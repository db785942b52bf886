#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "banditlab/lipschitz.hpp"
#include "banditlab/stochastic.hpp"

using namespace banditlab;
using namespace banditlab::lipschitz;

TEST_CASE("uniform mesh includes both endpoints and satisfies the mesh property") {
  const auto half = uniform_mesh(0.5);
  CHECK(half == std::vector<double>{0.0, 0.5, 1.0});
  const auto unit = uniform_mesh(1.0);
  CHECK(unit == std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(uniform_mesh(0.0), std::domain_error);

  for (const double eps : {0.5, 0.3, 0.11, 0.07}) {
    const auto mesh = uniform_mesh(eps);
    for (int i = 0; i <= 10000; ++i) {
      const double x = i / 10000.0;
      double best = 1.0;
      for (double m : mesh) best = std::min(best, std::abs(x - m));
      CHECK(best <= eps + 1e-12);
    }
  }
}

TEST_CASE("default mesh step evaluates (T L^2 / ln T)^(-1/3)") {
  CHECK(uniform_mesh_default_eps(1.0, 5000) ==
        doctest::Approx(std::pow(5000.0 / std::log(5000.0), -1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("bump instance shape and Lipschitz continuity") {
  BumpEnv env(0.4, 0.2, 1.0);
  CHECK(env.mean(0.4) == doctest::Approx(0.7).epsilon(1e-12));  // 1/2 + eps
  CHECK(env.mean(0.4 + 0.2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(env.mean(0.9) == 0.5);  // beyond eps/L
  CHECK(env.mean(0.0) == 0.5);
  RngStream rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = rng.next_double(), y = rng.next_double();
    CHECK(std::abs(env.mean(x) - env.mean(y)) <= 1.0 * std::abs(x - y) + 1e-12);
  }
  CHECK_THROWS_AS(BumpEnv(1.5, 0.2, 1.0), std::domain_error);
  CHECK_THROWS_AS(BumpEnv(0.5, 0.7, 1.0), std::domain_error);
}

TEST_CASE("fixed discretization plays mesh points only") {
  // singleton mesh: constant arm
  auto constant = fixed_discretization({0.25}, [](int k) { return stochastic::ucb1(k, 2); });
  BumpEnv env(0.3, 0.1, 1.0);
  const auto result = run_continuum_episode(env, *constant, 10, RngStream(1));
  for (double x : result.chosen) CHECK(x == 0.25);

  // discretization error equals the distance from x* to the mesh (bump case)
  const std::vector<double> mesh = uniform_mesh(0.25);
  double best_mean = 0.0;
  for (double m : mesh) best_mean = std::max(best_mean, env.mean(m));
  double dist = 1.0;
  for (double m : mesh) dist = std::min(dist, std::abs(m - 0.3));
  CHECK(env.sup_mean() - best_mean == doctest::Approx(1.0 * dist).epsilon(1e-12));
  CHECK(env.sup_mean() - best_mean <= 1.0 * 0.25 + 1e-12);  // DE <= L * eps
}

TEST_CASE("zooming activates the leftmost uncovered point and covers [0,1]") {
  const int horizon = 200;
  ZoomingAgent agent(horizon, Interval1DMetric::scaled(1.0));
  RngStream rng(1);
  // round 1: no active arms, so 0 is uncovered and gets activated
  const double first = agent.act(rng);
  CHECK(first == 0.0);
  REQUIRE(agent.active_arms().size() == 1);
  CHECK(agent.active_arms()[0].x == 0.0);
  // its fresh radius sqrt(2 ln T) exceeds 1, so the whole interval is covered
  CHECK(agent.radius(agent.active_arms()[0]) > 1.0);
  CHECK(agent.covers_unit_interval());
  // index of a never-played arm is 0 + 2 sqrt(2 ln T)
  CHECK(agent.index(agent.active_arms()[0]) ==
        doctest::Approx(2.0 * std::sqrt(2.0 * std::log(static_cast<double>(horizon))))
            .epsilon(1e-12));
}

TEST_CASE("zooming keeps the covering invariant, monotone activations, exact radii") {
  const int horizon = 200;
  BumpEnv env(0.62, 0.3, 1.0);
  ZoomingAgent agent(horizon, Interval1DMetric::scaled(1.0));
  RngStream rng(7);
  RngStream agent_rng = rng.fork("agent");
  RngStream env_rng = rng.fork("env");
  std::vector<double> activation_order;
  for (int t = 1; t <= horizon; ++t) {
    const double x = agent.act(agent_rng);
    agent.observe(env.sample(x, env_rng));

    // covering invariant, exact sweep over stored endpoints
    CHECK(agent.covers_unit_interval());
    // secondary 1e-6 grid check
    for (int g = 0; g <= 100; ++g) {
      const double point = g / 100.0;
      bool covered = false;
      for (const auto& arm : agent.active_arms()) {
        const double h = agent.radius(arm);  // L = 1: metric radius = width
        covered = covered || std::abs(point - arm.x) <= h + 1e-6;
      }
      CHECK(covered);
    }
    // radii match sqrt(2 ln T / (n+1)) after every round
    for (const auto& arm : agent.active_arms())
      CHECK(agent.radius(arm) ==
            doctest::Approx(std::sqrt(2.0 * std::log(static_cast<double>(horizon)) /
                                      (arm.pulls + 1)))
                .epsilon(1e-12));
    // activation monotonicity: prefix of activations never changes
    if (agent.active_arms().size() > activation_order.size()) {
      for (std::size_t i = 0; i < activation_order.size(); ++i)
        CHECK(agent.active_arms()[i].x == activation_order[i]);
      activation_order.clear();
      for (const auto& arm : agent.active_arms()) activation_order.push_back(arm.x);
    }
  }
  // pull counts add up
  long long pulls = 0;
  for (const auto& arm : agent.active_arms()) pulls += arm.pulls;
  CHECK(pulls == horizon);
}

TEST_CASE("target instance mean follows mu* minus the metric distance") {
  TargetEnv env(0.7, 0.9, Interval1DMetric::scaled(1.0));
  CHECK(env.mean(0.7) == doctest::Approx(0.9));
  CHECK(env.mean(0.2) == doctest::Approx(0.4));
  CHECK(env.sup_mean() == doctest::Approx(0.9));
}

TEST_CASE("power metric distances and confidence balls") {
  const auto metric = Interval1DMetric::power(2.0);  // |x-y|^(1/2)
  CHECK(metric.distance(0.0, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(metric.ball_halfwidth(0.5) == doctest::Approx(0.25).epsilon(1e-12));

  // zooming under the power metric keeps the covering invariant
  ZoomingAgent agent(100, metric);
  BumpEnv env(0.5, 0.2, 1.0);
  RngStream rng(4);
  RngStream agent_rng = rng.fork("agent");
  RngStream env_rng = rng.fork("env");
  for (int t = 0; t < 100; ++t) {
    const double x = agent.act(agent_rng);
    agent.observe(env.sample(x, env_rng));
    CHECK(agent.covers_unit_interval());
  }
  CHECK_THROWS_AS(Interval1DMetric::power(0.5), std::invalid_argument);
  CHECK_THROWS_AS(Interval1DMetric::scaled(0.0), std::invalid_argument);
}
