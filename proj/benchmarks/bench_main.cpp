#include <benchmark/benchmark.h>

#include "banditlab/adversarial.hpp"
#include "banditlab/bayes.hpp"
#include "banditlab/bwk.hpp"
#include "banditlab/episode.hpp"
#include "banditlab/lipschitz.hpp"
#include "banditlab/stochastic.hpp"

using namespace banditlab;

namespace {

void BM_Ucb1Episode(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int horizon = 10000;
  std::vector<double> means(k);
  for (int a = 0; a < k; ++a) means[a] = 0.3 + 0.4 * a / k;
  for (auto _ : state) {
    stochastic::StochasticEnv env(stochastic::StochasticEnvSpec::bernoulli(means));
    auto agent = stochastic::ucb1(k, horizon);
    benchmark::DoNotOptimize(run_episode(env, *agent, horizon, RngStream(1)));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_Ucb1Episode)->Arg(2)->Arg(10)->Arg(50);

void BM_HedgeUpdate(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  adversarial::HedgeAgent hedge(k, 0.01);
  RngStream rng(2);
  std::vector<double> costs(k);
  for (double& c : costs) c = rng.next_double();
  for (auto _ : state) {
    hedge.observe_costs(costs);
    benchmark::DoNotOptimize(hedge.distribution());
  }
  state.SetItemsProcessed(state.iterations() * k);
}
BENCHMARK(BM_HedgeUpdate)->Arg(10)->Arg(100)->Arg(1000);

void BM_Exp3Episode(benchmark::State& state) {
  const int k = 10, horizon = 10000;
  const double gamma = adversarial::exp3_gamma_crude(k, k, horizon);
  const double eps = adversarial::hedge_epsilon_variance(k, k / (1.0 - gamma) * horizon);
  for (auto _ : state) {
    adversarial::BanditCostEnv env(std::vector<double>(k, 0.5));
    auto agent = adversarial::exp3(k, gamma, eps);
    benchmark::DoNotOptimize(run_episode(env, *agent, horizon, RngStream(3)));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_Exp3Episode);

void BM_FinitePosteriorUpdate(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  std::vector<std::vector<double>> support;
  std::vector<double> probs(points, 1.0 / points);
  for (int i = 0; i < points; ++i)
    support.push_back({0.1 + 0.8 * i / points, 0.9 - 0.8 * i / points});
  bayes::FinitePrior prior(std::move(support), std::move(probs));
  std::vector<std::pair<ArmIndex, int>> obs;
  RngStream rng(5);
  for (int t = 0; t < 50; ++t) obs.emplace_back(rng.uniform_int(2), rng.uniform_int(2));
  for (auto _ : state) benchmark::DoNotOptimize(bayes::posterior_update_finite(prior, obs));
  state.SetItemsProcessed(state.iterations() * points * obs.size());
}
BENCHMARK(BM_FinitePosteriorUpdate)->Arg(16)->Arg(256)->Arg(4096);

void BM_ZoomingEpisode(benchmark::State& state) {
  const int horizon = 5000;
  for (auto _ : state) {
    lipschitz::TargetEnv env(0.73, 0.9, lipschitz::Interval1DMetric::scaled(2.0));
    lipschitz::ZoomingAgent agent(horizon, lipschitz::Interval1DMetric::scaled(2.0));
    benchmark::DoNotOptimize(
        lipschitz::run_continuum_episode(env, agent, horizon, RngStream(7)));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_ZoomingEpisode);

void BM_BwkLpSolve(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  RngStream rng(11);
  std::vector<bwk::OutcomeDistribution> arms;
  for (int a = 0; a < k; ++a) {
    bwk::OutcomeDistribution arm;
    arm.rows = {{rng.next_double(), rng.next_double(), rng.next_double()}};
    arm.probs = {1.0};
    arms.push_back(std::move(arm));
  }
  const auto instance = bwk::BwKInstance::make(std::move(arms), {40.0, 60.0}, 100);
  const auto rescaled = bwk::rescale_budgets(instance);
  const auto matrix = rescaled.expected_matrix();
  for (auto _ : state)
    benchmark::DoNotOptimize(bwk::solve_bwk_lp(matrix, rescaled.budget, 100));
}
BENCHMARK(BM_BwkLpSolve)->Arg(4)->Arg(8)->Arg(11);

}  // namespace

BENCHMARK_MAIN();
