#include "banditlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "banditlab/adversarial.hpp"
#include "banditlab/bayes.hpp"
#include "banditlab/bwk.hpp"
#include "banditlab/incentives.hpp"

namespace banditlab::harness {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Config Config::parse(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": missing '='");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    kv[key] = value;
  }
  return Config(std::move(kv));
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse(in);
}

Config Config::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

std::string Config::serialize() const {
  std::ostringstream out;
  for (const auto& [k, v] : kv_) out << k << " = " << v << '\n';
  return out.str();
}

const std::string& Config::get(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  try {
    std::size_t pos = 0;
    const double v = std::stod(get(key), &pos);
    if (pos != get(key).size()) throw ConfigError("trailing characters");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not a number: '" + get(key) + "'");
  }
}

long long Config::get_int(const std::string& key) const {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(get(key), &pos);
    if (pos != get(key).size()) throw ConfigError("trailing characters");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not an integer: '" + get(key) + "'");
  }
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::istringstream ls(get(key));
  std::vector<double> out;
  double x;
  while (ls >> x) out.push_back(x);
  if (out.empty()) throw ConfigError("config key " + key + " has no numeric entries");
  return out;
}

std::vector<std::uint64_t> Config::get_seeds(const std::string& key) const {
  std::istringstream ls(get(key));
  std::vector<std::uint64_t> out;
  std::uint64_t x;
  while (ls >> x) out.push_back(x);
  if (out.empty()) throw ConfigError("config key " + key + " has no seeds");
  return out;
}

// ---------------------------------------------------------------------------
// Registry

std::vector<std::string> env_kinds() {
  return {"bernoulli", "deterministic", "lb_instance", "bandit_cost", "bwk_pricing",
          "bwk_procurement", "bwk_file"};
}

std::vector<std::string> agent_kinds() {
  return {"explore_first", "epsilon_greedy", "successive_elimination", "ucb1",
          "thompson_beta", "thompson_gaussian", "thompson_finite", "exp3",
          "ucb1_doubling", "lagrange_bwk", "ucb_bwk", "bayesian_greedy"};
}

std::unique_ptr<Environment> make_env(const Config& config) {
  const std::string kind = config.get("env.kind");
  try {
    if (kind == "bernoulli") {
      return std::make_unique<stochastic::StochasticEnv>(
          stochastic::StochasticEnvSpec::bernoulli(config.get_doubles("env.means")));
    }
    if (kind == "deterministic") {
      return std::make_unique<stochastic::StochasticEnv>(
          stochastic::StochasticEnvSpec::deterministic(config.get_doubles("env.values")));
    }
    if (kind == "lb_instance") {
      return std::make_unique<stochastic::StochasticEnv>(
          lb_instance(static_cast<int>(config.get_int("env.k")), config.get_double("env.eps"),
                      static_cast<int>(config.get_int("env.best_arm"))));
    }
    if (kind == "bandit_cost") {
      return std::make_unique<adversarial::BanditCostEnv>(config.get_doubles("env.cost_means"));
    }
    if (kind == "bwk_pricing" || kind == "bwk_procurement") {
      bwk::ValueDistribution values;
      values.values = config.get_doubles("env.values");
      values.probs = config.get_doubles("env.value_probs");
      const auto grid = config.get_doubles("env.prices");
      const double budget = config.get_double("env.budget");
      const long long horizon = config.get_int("run.T");
      const auto instance = kind == "bwk_pricing"
                                ? bwk::pricing_env(values, grid, budget, horizon)
                                : bwk::procurement_env(values, grid, budget, horizon);
      return std::make_unique<bwk::BwKEnv>(bwk::rescale_budgets(instance));
    }
    if (kind == "bwk_file") {
      const auto instance = bwk::load_instance_file(config.get("env.path"));
      return std::make_unique<bwk::BwKEnv>(bwk::rescale_budgets(instance));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("env.kind " + kind + ": " + e.what());
  }
  throw ConfigError("unknown env.kind: " + kind);
}

std::unique_ptr<Agent> make_agent(const Config& config, int num_arms, int horizon) {
  const std::string kind = config.get("agent.kind");
  try {
    if (kind == "explore_first") {
      const long long budget =
          config.has("agent.N") ? config.get_int("agent.N")
                                : stochastic::explore_first_default_budget(num_arms, horizon);
      return stochastic::explore_first(num_arms, horizon, budget);
    }
    if (kind == "epsilon_greedy") return stochastic::epsilon_greedy(num_arms);
    if (kind == "successive_elimination")
      return stochastic::successive_elimination(num_arms, horizon);
    if (kind == "ucb1") return stochastic::ucb1(num_arms, horizon);
    if (kind == "ucb1_doubling") {
      return doubling_wrap([num_arms](int h) {
        return stochastic::ucb1(num_arms, std::max(h, num_arms + 1));
      });
    }
    if (kind == "thompson_beta")
      return bayes::thompson_prior_free(num_arms, bayes::PriorFreeMode::BetaBernoulli);
    if (kind == "thompson_gaussian")
      return bayes::thompson_prior_free(num_arms, bayes::PriorFreeMode::Gaussian);
    if (kind == "thompson_finite") {
      // prior over per-arm means given as a flattened support list with probs
      const auto flat = config.get_doubles("agent.prior_support");
      const auto probs = config.get_doubles("agent.prior_probs");
      if (flat.size() % num_arms != 0)
        throw ConfigError("agent.prior_support must list K means per point");
      std::vector<std::vector<double>> support;
      for (std::size_t i = 0; i < flat.size(); i += num_arms)
        support.emplace_back(flat.begin() + i, flat.begin() + i + num_arms);
      return bayes::thompson_finite(bayes::FinitePrior(std::move(support), probs));
    }
    if (kind == "exp3") {
      const double gamma = config.has("agent.gamma")
                               ? config.get_double("agent.gamma")
                               : adversarial::exp3_gamma_crude(num_arms, num_arms, horizon);
      const double eps = config.has("agent.eps")
                             ? config.get_double("agent.eps")
                             : adversarial::hedge_epsilon_variance(
                                   std::max(2, num_arms),
                                   num_arms / std::max(1e-9, 1.0 - gamma) *
                                       static_cast<double>(horizon));
      return adversarial::exp3(num_arms, gamma, eps);
    }
    if (kind == "lagrange_bwk" || kind == "ucb_bwk") {
      const auto instance = bwk::load_instance_file(config.get("agent.instance"));
      const auto rescaled = bwk::rescale_budgets(instance);
      return kind == "lagrange_bwk" ? bwk::lagrange_bwk(rescaled) : bwk::ucb_bwk(rescaled);
    }
    if (kind == "bayesian_greedy") {
      return incentives::bayesian_greedy(incentives::TwoArmPrior::load_file(config.get("agent.prior")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("agent.kind " + kind + ": " + e.what());
  }
  throw ConfigError("unknown agent.kind: " + kind);
}

// ---------------------------------------------------------------------------
// Experiments

ExperimentSummary run_experiment(const Config& config, const std::string& out_dir) {
  const int horizon = static_cast<int>(config.get_int("run.T"));
  if (horizon < 1) throw ConfigError("run.T must be >= 1");
  const auto seeds = config.get_seeds("run.seeds");

  std::filesystem::create_directories(out_dir);

  ExperimentSummary summary;
  summary.seeds = seeds;
  for (const std::uint64_t seed : seeds) {
    auto env = make_env(config);
    auto agent = make_agent(config, env->num_arms(), horizon);
    const auto result = run_episode(*env, *agent, horizon, RngStream(seed));

    const std::string path = out_dir + "/seed_" + std::to_string(seed) + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "seed,t,arm,reward,cum_reward,regret\n";
    out.precision(12);
    double cum_reward = 0.0;
    double cum_regret = 0.0;
    const bool have_gaps = !result.report.gaps.empty();
    for (const auto& rec : result.history.records()) {
      double reward = 0.0;
      if (const auto* br = std::get_if<BanditReward>(&rec.feedback)) reward = br->value;
      else if (const auto* orow = std::get_if<OutcomeRow>(&rec.feedback)) reward = orow->reward;
      else if (const auto* fc = std::get_if<FullCosts>(&rec.feedback)) reward = -fc->costs.at(rec.arm);
      cum_reward += reward;
      out << seed << ',' << rec.t << ',' << rec.arm << ',' << reward << ',' << cum_reward << ',';
      if (have_gaps) {
        cum_regret += result.report.gaps.at(rec.arm);
        out << cum_regret;
      }
      out << '\n';
    }
    summary.final_regret.push_back(have_gaps ? cum_regret
                                             : std::numeric_limits<double>::quiet_NaN());
  }

  double mean = 0.0;
  int counted = 0;
  for (double r : summary.final_regret)
    if (!std::isnan(r)) {
      mean += r;
      ++counted;
    }
  mean = counted > 0 ? mean / counted : std::numeric_limits<double>::quiet_NaN();
  double var = 0.0;
  for (double r : summary.final_regret)
    if (!std::isnan(r)) var += (r - mean) * (r - mean);
  summary.mean = mean;
  summary.stderr_mean =
      counted > 1 ? std::sqrt(var / (counted - 1) / counted) : 0.0;

  std::ofstream out(out_dir + "/summary.csv");
  out << "seed,final_regret\n";
  out.precision(12);
  for (std::size_t i = 0; i < seeds.size(); ++i)
    out << seeds[i] << ',' << summary.final_regret[i] << '\n';
  out << "mean," << summary.mean << '\n';
  out << "stderr," << summary.stderr_mean << '\n';
  return summary;
}

stochastic::StochasticEnvSpec lb_instance(int num_arms, double eps, int best_arm) {
  if (num_arms < 1) throw std::domain_error("lb_instance: need at least one arm");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("lb_instance: eps must be in (0,1)");
  if (best_arm < 0 || best_arm >= num_arms) throw std::domain_error("lb_instance: bad best arm");
  std::vector<double> means(num_arms, 0.5);
  means[best_arm] = (1.0 + eps) / 2.0;
  return stochastic::StochasticEnvSpec::bernoulli(means);
}

BestArmIdReport best_arm_id_experiment(const BestArmAgentFactory& factory, int num_arms,
                                       double eps, int horizon,
                                       const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("best_arm_id_experiment: no seeds");
  int errors = 0;
  for (const std::uint64_t seed : seeds) {
    RngStream rng(seed);
    const int planted = rng.fork("instance").uniform_int(num_arms);
    stochastic::StochasticEnvSpec spec;
    if (eps > 0.0) {
      spec = lb_instance(num_arms, eps, planted);
    } else {
      spec = stochastic::StochasticEnvSpec::bernoulli(std::vector<double>(num_arms, 0.5));
    }
    stochastic::StochasticEnv env(std::move(spec));
    auto agent = factory(num_arms, horizon);
    const auto result = run_episode(env, *agent, horizon, rng.fork("episode"));
    const ArmIndex prediction = stochastic::most_pulled_arm(result.history, num_arms);
    if (prediction != planted) ++errors;
  }
  BestArmIdReport report;
  report.num_seeds = static_cast<int>(seeds.size());
  report.error_frequency = static_cast<double>(errors) / report.num_seeds;
  report.stderr_freq = std::sqrt(report.error_frequency * (1.0 - report.error_frequency) /
                                 report.num_seeds);
  return report;
}

CoinDecisionReport coin_decision_experiment(int tosses, double eps,
                                            const std::vector<std::uint64_t>& seeds) {
  if (tosses < 1) throw std::invalid_argument("coin_decision_experiment: need at least one toss");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("coin_decision_experiment: bad eps");
  if (seeds.empty()) throw std::invalid_argument("coin_decision_experiment: no seeds");
  const double threshold = (2.0 + eps) / 4.0;  // midpoint of 1/2 and (1+eps)/2
  int high_given_fair = 0;
  int low_given_biased = 0;
  for (const std::uint64_t seed : seeds) {
    RngStream rng(seed);
    RngStream fair = rng.fork("fair");
    RngStream biased = rng.fork("biased");
    double fair_sum = 0.0, biased_sum = 0.0;
    for (int t = 0; t < tosses; ++t) {
      fair_sum += fair.bernoulli(0.5) ? 1.0 : 0.0;
      biased_sum += biased.bernoulli((1.0 + eps) / 2.0) ? 1.0 : 0.0;
    }
    if (fair_sum / tosses >= threshold) ++high_given_fair;
    if (biased_sum / tosses < threshold) ++low_given_biased;
  }
  CoinDecisionReport report;
  report.num_seeds = static_cast<int>(seeds.size());
  report.p_high_given_fair = static_cast<double>(high_given_fair) / report.num_seeds;
  report.p_low_given_biased = static_cast<double>(low_given_biased) / report.num_seeds;
  return report;
}

}  // namespace banditlab::harness
