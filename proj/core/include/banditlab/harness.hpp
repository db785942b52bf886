#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "banditlab/episode.hpp"
#include "banditlab/stochastic.hpp"

namespace banditlab::harness {

// Line-oriented `section.key = value` configuration.
class Config {
 public:
  Config() = default;
  explicit Config(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  static Config parse(std::istream& in);
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);
  std::string serialize() const;

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;   // space-separated
  std::vector<std::uint64_t> get_seeds(const std::string& key) const;
  void set(const std::string& key, std::string value) { kv_[key] = std::move(value); }

  const std::map<std::string, std::string>& entries() const { return kv_; }
  bool operator==(const Config& other) const { return kv_ == other.kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// Thrown for unknown kinds / malformed parameters; the CLI maps it to exit 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Registry of environment and agent kinds constructible from config keys.
std::vector<std::string> env_kinds();
std::vector<std::string> agent_kinds();
std::unique_ptr<Environment> make_env(const Config& config);
std::unique_ptr<Agent> make_agent(const Config& config, int num_arms, int horizon);

struct ExperimentSummary {
  std::vector<std::uint64_t> seeds;
  std::vector<double> final_regret;  // per seed; NaN when benchmark unknown
  double mean = 0.0;
  double stderr_mean = 0.0;
};

// Runs one seeded episode per seed and writes `seed_<s>.csv` files with the
// exact header `seed,t,arm,reward,cum_reward,regret`, plus `summary.csv`.
ExperimentSummary run_experiment(const Config& config, const std::string& out_dir);

// Bernoulli instance with mean (1+eps)/2 at arm j and 1/2 elsewhere.
stochastic::StochasticEnvSpec lb_instance(int num_arms, double eps, int best_arm);

struct BestArmIdReport {
  double error_frequency = 0.0;
  double stderr_freq = 0.0;
  int num_seeds = 0;
};

using BestArmAgentFactory = std::function<std::unique_ptr<Agent>(int num_arms, int horizon)>;

// Plants a best arm uniformly at random per seed, runs the agent, and counts
// how often the prediction (most-pulled arm) misses the planted arm.
BestArmIdReport best_arm_id_experiment(const BestArmAgentFactory& factory, int num_arms,
                                       double eps, int horizon,
                                       const std::vector<std::uint64_t>& seeds);

struct CoinDecisionReport {
  double p_high_given_fair = 0.0;    // error rate on the fair coin
  double p_low_given_biased = 0.0;   // error rate on the biased coin
  int num_seeds = 0;
};

// HIGH/LOW decision via the empirical-mean threshold (2 + eps) / 4.
CoinDecisionReport coin_decision_experiment(int tosses, double eps,
                                            const std::vector<std::uint64_t>& seeds);

}  // namespace banditlab::harness
