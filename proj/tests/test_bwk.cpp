#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "banditlab/bwk.hpp"

using namespace banditlab;
using namespace banditlab::bwk;

namespace {

// Two arms, two resources: arm i yields reward 1 and consumes resource i.
BwKInstance two_arm_two_resource(double budget, long long horizon) {
  OutcomeDistribution arm0{{{1.0, 1.0, 0.0}}, {1.0}};
  OutcomeDistribution arm1{{{1.0, 0.0, 1.0}}, {1.0}};
  return BwKInstance::make({arm0, arm1}, {budget, budget}, horizon);
}

BwKInstance single_resource_unit(long long horizon, double budget) {
  OutcomeDistribution arm0{{{1.0, 1.0}}, {1.0}};
  return BwKInstance::make({arm0}, {budget}, horizon);
}

}  // namespace

TEST_CASE("a null arm is appended when absent and detected when present") {
  const auto instance = single_resource_unit(100, 50);
  CHECK(instance.num_arms() == 2);
  CHECK(instance.null_arm == 1);
  const auto mean = instance.arms[1].expected();
  for (double x : mean) CHECK(x == 0.0);

  OutcomeDistribution null_arm{{{0.0, 0.0}}, {1.0}};
  OutcomeDistribution live{{{0.5, 0.2}}, {1.0}};
  const auto explicit_null = BwKInstance::make({null_arm, live}, {10}, 100);
  CHECK(explicit_null.num_arms() == 2);
  CHECK(explicit_null.null_arm == 0);
}

TEST_CASE("rescaling divides consumption by B_i/B and appends the time resource") {
  OutcomeDistribution arm{{{1.0, 0.5, 0.8}}, {1.0}};
  const auto instance = BwKInstance::make({arm}, {100.0, 200.0}, 400);
  const auto rescaled = rescale_budgets(instance);
  CHECK(rescaled.budget == 100.0);
  const auto row = rescaled.arms[0].rows[0];
  CHECK(row[1] == doctest::Approx(0.5).epsilon(1e-12));        // budget already B
  CHECK(row[2] == doctest::Approx(0.4).epsilon(1e-12));        // halved
  CHECK(row[3] == doctest::Approx(100.0 / 400.0).epsilon(1e-12));  // time = B/T

  // equal budgets: identity on the original consumptions
  const auto equal = rescale_budgets(two_arm_two_resource(50, 100));
  CHECK(equal.arms[0].rows[0][1] == 1.0);
  CHECK(equal.arms[0].rows[0][2] == 0.0);
}

TEST_CASE("lp value is invariant under budget rescaling") {
  RngStream rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<OutcomeDistribution> arms;
    const int k = 2 + rng.uniform_int(3);
    for (int a = 0; a < k; ++a) {
      OutcomeDistribution arm;
      arm.rows = {{rng.next_double(), rng.next_double(), rng.next_double()}};
      arm.probs = {1.0};
      arms.push_back(std::move(arm));
    }
    const double b1 = 20 + 30 * rng.next_double();
    const double b2 = 20 + 60 * rng.next_double();
    const long long horizon = 100;
    const auto instance = BwKInstance::make(arms, {b1, b2}, horizon);

    // raw LP: per-resource caps B_i / T, no time row
    const auto raw = solve_lp_general(instance.expected_matrix(),
                                      {b1 / horizon, b2 / horizon});
    const auto rescaled = rescale_budgets(instance);
    const auto scaled =
        solve_bwk_lp(rescaled.expected_matrix(), rescaled.budget, horizon);
    CHECK(raw.value == doctest::Approx(scaled.value).epsilon(1e-9));
  }
}

TEST_CASE("hand-solved LPs come out exactly") {
  // arm 0: reward 1, consumption 1; null arm; B = T/2 -> D = (1/2, 1/2)
  const auto half = rescale_budgets(single_resource_unit(100, 50));
  const auto lp1 = solve_bwk_lp(half.expected_matrix(), half.budget, 100);
  CHECK(lp1.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(lp1.dist[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(lp1.dist[1] == doctest::Approx(0.5).epsilon(1e-9));

  // the two-arm/two-resource instance with T = 2B: uniform, value 1
  const auto both = rescale_budgets(two_arm_two_resource(500, 1000));
  const auto lp2 = solve_bwk_lp(both.expected_matrix(), both.budget, 1000);
  CHECK(lp2.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lp2.dist[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(lp2.dist[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(lp2.dist[2] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(1000.0 * lp2.value == doctest::Approx(2.0 * 500.0).epsilon(1e-6));  // total 2B

  // B = T: constraints are slack, the LP picks the max-reward arm
  OutcomeDistribution good{{{0.9, 1.0}}, {1.0}};
  OutcomeDistribution bad{{{0.4, 0.0}}, {1.0}};
  const auto free_instance = BwKInstance::make({good, bad}, {100.0}, 100);
  const auto free_lp = rescale_budgets(free_instance);
  const auto lp3 = solve_bwk_lp(free_lp.expected_matrix(), free_lp.budget, 100);
  CHECK(lp3.value == doctest::Approx(0.9).epsilon(1e-9));
}

TEST_CASE("lp matches a dense simplex grid search on random small instances") {
  RngStream rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    OutcomeDistribution a{{{rng.next_double(), rng.next_double(), rng.next_double()}}, {1.0}};
    OutcomeDistribution b{{{rng.next_double(), rng.next_double(), rng.next_double()}}, {1.0}};
    const double budget = 25 + 50 * rng.next_double();
    const auto instance = BwKInstance::make({a, b}, {budget, budget}, 100);
    const auto rescaled = rescale_budgets(instance);
    const auto matrix = rescaled.expected_matrix();
    const auto lp = solve_bwk_lp(matrix, rescaled.budget, 100);

    // sweep both live arms at resolution 1/200, null arm takes the slack
    double best = 0.0;
    const int grid = 200;
    for (int i = 0; i <= grid; ++i)
      for (int j = 0; i + j <= grid; ++j) {
        const std::vector<double> dist{i / 200.0, j / 200.0, 1.0 - (i + j) / 200.0};
        bool ok = true;
        for (int res = 0; res < matrix.num_resources() && ok; ++res) {
          double consumption = 0.0;
          for (int arm = 0; arm < 3; ++arm)
            consumption += dist[arm] * matrix.consumption(arm, res);
          ok = consumption <= rescaled.budget / 100.0 + 1e-12;
        }
        if (!ok) continue;
        double value = 0.0;
        for (int arm = 0; arm < 3; ++arm) value += dist[arm] * matrix.reward(arm);
        best = std::max(best, value);
      }
    CHECK(lp.value >= best - 1e-9);
    CHECK(lp.value <= best + 1e-2);
  }
}

TEST_CASE("lagrange payoff closed forms and linearity in the outcome draw") {
  OutcomeMatrix ideal({{1.0, 0.0}});
  CHECK(lagrange_payoff(ideal, 0, 0, 100, 50) == doctest::Approx(2.0).epsilon(1e-12));
  OutcomeMatrix costly({{0.0, 1.0}});
  CHECK(lagrange_payoff(costly, 0, 0, 100, 50) == doctest::Approx(-1.0).epsilon(1e-12));

  // E over outcome draws equals the payoff of the expected matrix
  OutcomeDistribution mixed{{{1.0, 1.0}, {0.2, 0.4}}, {0.3, 0.7}};
  const auto instance = BwKInstance::make({mixed}, {50}, 100);
  const auto matrix = instance.expected_matrix();
  double expectation = 0.0;
  for (std::size_t row = 0; row < mixed.rows.size(); ++row) {
    OutcomeMatrix single({mixed.rows[row]});
    expectation += mixed.probs[row] * lagrange_payoff(single, 0, 0, 100, 50);
  }
  CHECK(expectation == doctest::Approx(lagrange_payoff(matrix, 0, 0, 100, 50)).epsilon(1e-12));
}

TEST_CASE("scaled lagrange payoffs land in [0,1] and use only the revealed row") {
  OutcomeRow row;
  row.reward = 1.0;
  row.consumption = {0.0, 1.0, 0.5};
  const auto scaled = lagrange_scaled_payoffs(row, 100, 50);
  REQUIRE(scaled.size() == 3);
  CHECK(scaled[0] == doctest::Approx(1.0).epsilon(1e-12));  // payoff 2 -> 1
  for (double s : scaled) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
  // the i-th entry is exactly (L(a_t, i) - lo) / range for the revealed row
  OutcomeMatrix as_matrix({{1.0, 0.0, 1.0, 0.5}});
  for (int i = 0; i < 3; ++i) {
    const double lp = lagrange_payoff(as_matrix, 0, i, 100, 50);
    CHECK(scaled[i] == doctest::Approx((lp - (1.0 - 2.0)) / (1.0 + 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("bwk env stops exactly when a budget is exceeded") {
  const auto rescaled = rescale_budgets(single_resource_unit(100, 10));
  BwKEnv env(rescaled);
  RngStream rng(3);
  int rounds = 0;
  while (!env.stopped() && rounds < 100) {
    env.step(0, rng);  // always the consuming arm
    ++rounds;
    if (!env.stopped()) {
      for (double c : env.consumed()) CHECK(c <= rescaled.budget + 1e-12);
    }
  }
  CHECK(env.violated());
  CHECK(rounds == 11);  // budget 10 strictly exceeded on the 11th pull
  CHECK(env.consumed()[0] > rescaled.budget);
}

TEST_CASE("lagrange_bwk never stops early without consumption and stays near the LP value") {
  // all-zero consumption: runs the full horizon
  OutcomeDistribution free_arm{{{0.8, 0.0}}, {1.0}};
  const auto free_instance = rescale_budgets(BwKInstance::make({free_arm}, {50}, 60));
  BwKEnv env(free_instance);
  auto agent = lagrange_bwk(free_instance);
  const auto result = run_episode(env, *agent, 60, RngStream(2));
  CHECK_FALSE(result.stopped_early);
  CHECK(result.history.rounds() == 60);

  // deterministic single-resource instance: adjusted reward lands in the band
  const long long horizon = 200;
  const double budget = 100;
  const auto instance = rescale_budgets(single_resource_unit(horizon, budget));
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    BwKEnv run_env(instance);
    auto run_agent = lagrange_bwk(instance);
    const auto run = run_episode(run_env, *run_agent, horizon, RngStream(seed));
    const double reward = adjusted_total_reward(run.history, run_env.violated());
    CHECK(run.history.rounds() >= budget);  // cannot stop before B rounds
    total += reward;
    CHECK(reward <= budget + 1e-9);  // the LP benchmark caps deterministic reward
  }
  CHECK(total / 20.0 >= 0.5 * budget);
  CHECK(total / 20.0 <= budget + 1.0);
}

TEST_CASE("ucb_bwk epsilon clamps at one half") {
  CHECK(ucb_bwk_epsilon(4, 4.0) == 0.5);
  CHECK(ucb_bwk_epsilon(3, 500.0) == doctest::Approx(std::sqrt(3.0 / 500.0)).epsilon(1e-12));
}

TEST_CASE("adjusted reward never beats the LP benchmark plus stochastic slack") {
  // the LP benchmark upper-bounds realized reward up to stochastic slack
  const ValueDistribution values{{0.1, 0.3, 0.5, 0.7, 0.9}, std::vector<double>(5, 0.2)};
  const long long horizon = 400;
  const auto instance = pricing_env(values, {0.3, 0.5, 0.7}, 120.0, horizon);
  const auto rescaled = rescale_budgets(instance);
  const auto lp = solve_bwk_lp(rescaled.expected_matrix(), rescaled.budget, horizon);
  const double cap =
      horizon * lp.value + 2.0 * std::sqrt(horizon * std::log(static_cast<double>(horizon)));
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    BwKEnv env_l(rescaled);
    auto lagrange = lagrange_bwk(rescaled);
    const auto run_l = run_episode(env_l, *lagrange, horizon, RngStream(seed));
    CHECK(adjusted_total_reward(run_l.history, env_l.violated()) <= cap);

    BwKEnv env_u(rescaled);
    auto ucb = ucb_bwk(rescaled);
    const auto run_u = run_episode(env_u, *ucb, horizon, RngStream(seed));
    CHECK(adjusted_total_reward(run_u.history, env_u.violated()) <= cap);
  }
}

TEST_CASE("optimistic matrix collapses to the truth as intervals vanish") {
  // deterministic instance observed many times: UCB/LCB hug the truth
  const auto rescaled = rescale_budgets(two_arm_two_resource(500, 1000));
  const auto expected = rescaled.expected_matrix();
  const long long n = 1000000000;
  std::vector<long long> pulls(3, n);
  std::vector<double> reward_sums(3);
  std::vector<std::vector<double>> consumption_sums(3);
  for (int a = 0; a < 3; ++a) {
    reward_sums[a] = expected.reward(a) * n;
    consumption_sums[a] = {expected.consumption(a, 0) * n, expected.consumption(a, 1) * n};
  }
  const auto optimistic = optimistic_outcome_matrix(pulls, reward_sums, consumption_sums,
                                                    rescaled.budget / 1000.0, 1000);
  // optimistic LP value >= true LP value (truth lies in the region)
  const auto truth = solve_bwk_lp(expected, rescaled.budget, 1000);
  const auto hopeful = solve_bwk_lp(optimistic, rescaled.budget, 1000);
  CHECK(hopeful.value >= truth.value - 1e-9);
  // with vanishing radius the distributions coincide
  const auto tight_dist = hopeful.dist;
  for (std::size_t a = 0; a < tight_dist.size(); ++a)
    CHECK(tight_dist[a] == doctest::Approx(truth.dist[a]).epsilon(2e-3));
}

TEST_CASE("example environments produce the cited outcome rows") {
  const ValueDistribution uniform_values{{0.1, 0.3, 0.5, 0.7, 0.9},
                                         {0.2, 0.2, 0.2, 0.2, 0.2}};
  // price 0 always sells at reward 0
  const auto cheap = pricing_env(uniform_values, {0.0}, 10, 100);
  const auto row = cheap.arms[0].expected();
  CHECK(row[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(row[1] == doctest::Approx(1.0).epsilon(1e-12));

  // price 1 never sells: the null arm in disguise
  const auto pricey = pricing_env(uniform_values, {1.0}, 10, 100);
  CHECK(pricey.null_arm == 0);

  // expected matrix matches S(p) * (p, 1) on a grid
  const auto grid_instance = pricing_env(uniform_values, {0.2, 0.4, 0.6}, 10, 100);
  const std::vector<double> acceptance{0.8, 0.6, 0.4};  // Pr[v >= p]
  const auto matrix = grid_instance.expected_matrix();
  for (int a = 0; a < 3; ++a) {
    const double p = 0.2 * (a + 1);
    CHECK(matrix.reward(a) == doctest::Approx(acceptance[a] * p).epsilon(1e-12));
    CHECK(matrix.consumption(a, 0) == doctest::Approx(acceptance[a]).epsilon(1e-12));
  }

  // procurement: (1, p) on acceptance, acceptance means p >= value
  const auto hires = procurement_env(uniform_values, {0.5}, 10, 100);
  const auto hire_row = hires.arms[0].expected();
  CHECK(hire_row[0] == doctest::Approx(0.6).epsilon(1e-12));   // Pr[0.5 >= v]
  CHECK(hire_row[1] == doctest::Approx(0.3).epsilon(1e-12));   // p * Pr

  // ppc: (r_a, r_a) on click, on advertiser a's budget
  const auto ads = ppc_env({0.5, 0.25}, {0.8, 0.4}, {10, 10}, 100);
  const auto ad_matrix = ads.expected_matrix();
  CHECK(ad_matrix.reward(0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(ad_matrix.consumption(0, 0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(ad_matrix.consumption(0, 1) == 0.0);
}

TEST_CASE("instance files round trip") {
  std::ostringstream text;
  text << "horizon 100\n"
       << "budgets 50\n"
       << "arm\n"
       << "row 1.0 1.0 1.0\n";
  std::istringstream in(text.str());
  const auto instance = load_instance(in);
  CHECK(instance.horizon == 100);
  CHECK(instance.num_arms() == 2);  // null appended
  CHECK(instance.arms[0].expected()[0] == doctest::Approx(1.0));

  std::istringstream bad("budgets 10\nrow 1 1 1\n");
  CHECK_THROWS(load_instance(bad));
}
