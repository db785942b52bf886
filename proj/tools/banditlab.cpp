// banditlab: seeded online-learning experiments with CSV output.
//
// Subcommands:
//   run        -- run a config-driven experiment, one CSV per seed
//   suite      -- run a named, pre-canned experiment suite
//   verify-bic -- exhaustively verify Bayesian incentive-compatibility
//
// Exit codes: 0 success, 2 configuration error, 3 property violation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "banditlab/adversarial.hpp"
#include "banditlab/bwk.hpp"
#include "banditlab/episode.hpp"
#include "banditlab/games.hpp"
#include "banditlab/harness.hpp"
#include "banditlab/incentives.hpp"
#include "banditlab/lipschitz.hpp"
#include "banditlab/stochastic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;

std::vector<std::uint64_t> seed_range(std::uint64_t first, int count) {
  std::vector<std::uint64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), first);
  return seeds;
}

int cmd_run(const std::string& config_path, const std::string& out_override) {
  auto config = banditlab::harness::Config::parse_file(config_path);
  const std::string out_dir =
      !out_override.empty() ? out_override : config.get_or("run.out", "out");
  const auto summary = banditlab::harness::run_experiment(config, out_dir);
  std::cout << "wrote " << summary.seeds.size() << " seed files to " << out_dir
            << " (mean final regret " << summary.mean << " +/- " << summary.stderr_mean << ")\n";
  return kExitOk;
}

// Named suites: small, fixed experiment fixtures with CSV output.
int cmd_suite(const std::string& name, const std::string& out_dir) {
  namespace harness = banditlab::harness;
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir + "/" + name + ".csv");
  if (!out) throw std::runtime_error("cannot write to " + out_dir);
  out.precision(10);

  if (name == "ch1-rates") {
    // pseudo-regret scaling of the classic stochastic-bandit algorithms
    out << "agent,T,mean_pseudo_regret\n";
    for (const int horizon : {2000, 8000}) {
      for (const std::string agent_kind :
           {"explore_first", "epsilon_greedy", "successive_elimination", "ucb1"}) {
        double total = 0.0;
        const auto seeds = seed_range(1, 50);
        for (const auto seed : seeds) {
          banditlab::stochastic::StochasticEnv env(
              banditlab::stochastic::StochasticEnvSpec::bernoulli({0.6, 0.5}));
          harness::Config cfg;
          cfg.set("agent.kind", agent_kind);
          auto agent = harness::make_agent(cfg, 2, horizon);
          total += banditlab::run_episode(env, *agent, horizon, banditlab::RngStream(seed))
                       .report.pseudo_regret.value();
        }
        out << agent_kind << ',' << horizon << ',' << total / seeds.size() << '\n';
      }
    }
  } else if (name == "ch2-coin") {
    out << "T,eps,p_high_given_fair,p_low_given_biased\n";
    for (const int tosses : {4, 100, 400}) {
      const auto report = harness::coin_decision_experiment(tosses, 0.4, seed_range(1, 1000));
      out << tosses << ",0.4," << report.p_high_given_fair << ',' << report.p_low_given_biased
          << '\n';
    }
  } else if (name == "ch2-bestarm") {
    out << "eps,T,error_frequency,stderr\n";
    const auto factory = [](int k, int horizon) { return banditlab::stochastic::ucb1(k, horizon); };
    const auto report = harness::best_arm_id_experiment(factory, 2, 0.3, 222, seed_range(1, 500));
    out << "0.3,222," << report.error_frequency << ',' << report.stderr_freq << '\n';
  } else if (name == "ch5-hedge") {
    // per-run check of the probability-1 Hedge guarantee on random cost tables
    out << "table,margin,holds\n";
    const int horizon = 1000, k = 10;
    const double eps = banditlab::adversarial::hedge_epsilon_bounded(k, horizon);
    const double bound = 2.0 * std::sqrt(2.0 * horizon * std::log(static_cast<double>(k)));
    bool all_hold = true;
    for (int table_id = 0; table_id < 20; ++table_id) {
      banditlab::RngStream rng(100 + table_id);
      std::vector<std::vector<double>> costs(horizon, std::vector<double>(k));
      for (auto& row : costs)
        for (double& c : row) c = rng.next_double();
      banditlab::adversarial::HedgeAgent hedge(k, eps);
      double hedge_cost = 0.0;
      std::vector<double> totals(k, 0.0);
      for (const auto& row : costs) {
        const auto p = hedge.distribution();
        for (int a = 0; a < k; ++a) {
          hedge_cost += p[a] * row[a];
          totals[a] += row[a];
        }
        hedge.observe_costs(row);
      }
      const double best = *std::min_element(totals.begin(), totals.end());
      const double margin = bound - (hedge_cost - best);
      all_hold = all_hold && margin > 0.0;
      out << table_id << ',' << margin << ',' << (margin > 0.0 ? 1 : 0) << '\n';
    }
    if (!all_hold) return kExitViolation;
  } else if (name == "ch9-pennies") {
    out << "seed,avg_cost,duality_gap\n";
    const banditlab::games::GameMatrix pennies({{0.0, 1.0}, {1.0, 0.0}});
    const int horizon = 10000;
    const double eps = banditlab::adversarial::hedge_epsilon_bounded(2, horizon);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto row = banditlab::games::hedge_player(2, eps);
      auto col = banditlab::games::hedge_player(2, eps);
      const auto result = banditlab::games::repeated_game(
          *row, *col, pennies, horizon, banditlab::games::GameFeedback::Full,
          banditlab::RngStream(seed));
      out << seed << ',' << result.report.value_estimate << ',' << result.report.duality_gap
          << '\n';
    }
  } else if (name == "ch4-zoom") {
    // adaptive vs uniform discretization on a single-target continuum instance
    out << "agent,seeds,T,mean_pseudo_regret\n";
    const int horizon = 5000;
    const double scale = 2.0;
    const auto metric = banditlab::lipschitz::Interval1DMetric::scaled(scale);
    const double mesh_eps = banditlab::lipschitz::uniform_mesh_default_eps(scale, horizon);
    double zoom_total = 0.0, unif_total = 0.0;
    const int seeds = 20;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      banditlab::lipschitz::TargetEnv env(0.73, 0.9, metric);
      banditlab::lipschitz::ZoomingAgent zoom(horizon, metric);
      zoom_total += banditlab::lipschitz::run_continuum_episode(env, zoom, horizon,
                                                                banditlab::RngStream(seed))
                        .pseudo_regret;
      auto unif = banditlab::lipschitz::fixed_discretization(
          banditlab::lipschitz::uniform_mesh(mesh_eps),
          [horizon](int k) { return banditlab::stochastic::ucb1(k, horizon); });
      unif_total += banditlab::lipschitz::run_continuum_episode(env, *unif, horizon,
                                                                banditlab::RngStream(seed))
                        .pseudo_regret;
    }
    out << "zooming," << seeds << ',' << horizon << ',' << zoom_total / seeds << '\n';
    out << "uniform," << seeds << ',' << horizon << ',' << unif_total / seeds << '\n';
  } else if (name == "ch10-bwk") {
    // two-arm/two-resource instance: LP benchmark and both solvers
    out << "quantity,value\n";
    banditlab::bwk::OutcomeDistribution arm0{{{1.0, 1.0, 0.0}}, {1.0}};
    banditlab::bwk::OutcomeDistribution arm1{{{1.0, 0.0, 1.0}}, {1.0}};
    const auto instance =
        banditlab::bwk::BwKInstance::make({arm0, arm1}, {500.0, 500.0}, 1000);
    const auto rescaled = banditlab::bwk::rescale_budgets(instance);
    const auto lp =
        banditlab::bwk::solve_bwk_lp(rescaled.expected_matrix(), rescaled.budget, 1000);
    out << "lp_per_round," << lp.value << '\n';
    double lagrange_total = 0.0, ucb_total = 0.0;
    const int seeds = 20;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
      banditlab::bwk::BwKEnv env_l(rescaled);
      auto lagrange = banditlab::bwk::lagrange_bwk(rescaled);
      const auto run_l = banditlab::run_episode(env_l, *lagrange, 1000,
                                                banditlab::RngStream(seed));
      lagrange_total += banditlab::bwk::adjusted_total_reward(run_l.history, env_l.violated());
      banditlab::bwk::BwKEnv env_u(rescaled);
      auto ucb = banditlab::bwk::ucb_bwk(rescaled);
      const auto run_u = banditlab::run_episode(env_u, *ucb, 1000, banditlab::RngStream(seed));
      ucb_total += banditlab::bwk::adjusted_total_reward(run_u.history, env_u.violated());
    }
    out << "lagrange_bwk_mean_adjusted," << lagrange_total / seeds << '\n';
    out << "ucb_bwk_mean_adjusted," << ucb_total / seeds << '\n';
  } else {
    std::cerr << "unknown suite: " << name
              << " (available: ch1-rates, ch2-coin, ch2-bestarm, ch4-zoom, ch5-hedge, "
                 "ch9-pennies, ch10-bwk)\n";
    return kExitConfig;
  }
  std::cout << "wrote " << out_dir << "/" << name << ".csv\n";
  return kExitOk;
}

int cmd_verify_bic(const std::string& prior_path, int n0, double eps, int horizon) {
  namespace inc = banditlab::incentives;
  const auto prior = inc::TwoArmPrior::load_file(prior_path);
  const double bound = inc::bic_epsilon_bound(prior, n0);
  std::cout << "bic epsilon bound at N0=" << n0 << ": " << bound << '\n';
  if (bound == 0.0) {
    std::cerr << "fighting-chance failure: the bound is zero for this prior\n";
    return kExitViolation;
  }
  if (eps > bound) {
    std::cerr << "eps " << eps << " exceeds the bound " << bound << '\n';
    return kExitViolation;
  }
  const auto params = inc::BicParams::checked(prior, n0, eps);
  const auto always_explore_arm2 = [](std::span<const std::pair<int, int>>) { return 1; };
  const auto algo = inc::repeated_hidden_exploration_enumerable(prior, params, always_explore_arm2);
  const auto verdict = inc::bic_verify(*algo, prior, horizon);
  std::cout << (verdict.pass ? "PASS" : "FAIL") << ": worst margin " << verdict.worst_margin
            << " at round " << verdict.worst_round << ", arm " << verdict.worst_arm + 1 << " ("
            << verdict.paths_enumerated << " paths)\n";
  return verdict.pass ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"banditlab: a reproducible online-learning laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite_name, prior_path;
  int n0 = 1, horizon = 4;
  double eps = 0.0;

  auto* run = app.add_subcommand("run", "run a config-driven experiment");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides run.out)");

  auto* suite = app.add_subcommand("suite", "run a named experiment suite");
  suite->add_option("--name", suite_name, "suite name")->required();
  suite->add_option("--out", out_dir, "output directory")->default_val("out");

  auto* verify = app.add_subcommand("verify-bic", "verify Bayesian incentive-compatibility");
  verify->add_option("--prior", prior_path, "prior file (`point <mu1> <mu2> <prob>` lines)")
      ->required();
  verify->add_option("--n0", n0, "initial exploration length")->required();
  verify->add_option("--eps", eps, "exploration probability")->required();
  verify->add_option("--T", horizon, "horizon to verify exhaustively")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (suite->parsed()) return cmd_suite(suite_name, out_dir);
    if (verify->parsed()) return cmd_verify_bic(prior_path, n0, eps, horizon);
  } catch (const banditlab::harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  }
  return kExitOk;
}
