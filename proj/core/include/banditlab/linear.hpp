#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "banditlab/episode.hpp"

namespace banditlab::linear {

// Directed acyclic graph with a distinguished source and sink. Edges carry
// ids 0..d-1; edges that lie on no source->sink path are stripped at load.
struct Dag {
  struct Edge {
    int id = 0;
    int from = 0;
    int to = 0;
  };
  int num_nodes = 0;
  std::vector<Edge> edges;
  int source = 0;
  int sink = 0;
};

// Line-oriented format: `edge <id> <from> <to>`, `source <node>`, `sink <node>`.
Dag load_dag(std::istream& in);
Dag load_dag_file(const std::string& path);

// Validates acyclicity, strips off-path edges, renumbers atom ids densely.
Dag normalize_dag(Dag dag);

// A family of feasible actions over d atoms: either an explicit list of atom
// subsets, or the source->sink path family of a DAG.
class ActionFamily {
 public:
  static ActionFamily explicit_family(int num_atoms, std::vector<std::vector<int>> actions);
  static ActionFamily paths_of(const Dag& dag);

  int num_atoms() const { return num_atoms_; }

  // Exact minimizer of sum_{atom in action} v[atom]; v may be negative.
  // Explicit families scan all actions with ties to the lexicographically
  // smallest atom set; DAG families run a topological-order shortest-path DP
  // (ties follow the smallest tight edge id out of each node).
  std::vector<int> min_action(std::span<const double> v) const;

  // All actions, each a sorted atom set. DAG families enumerate their paths
  // on first use (desk scale only).
  const std::vector<std::vector<int>>& actions() const;

  // a^(e): a feasible action covering atom e; fewest atoms, ties lexicographic.
  const std::vector<int>& cover_action(int atom) const;

  static double action_cost(std::span<const int> action, std::span<const double> v);

 private:
  ActionFamily() = default;
  void build_covers() const;

  int num_atoms_ = 0;
  bool is_dag_ = false;
  Dag dag_;
  mutable std::vector<std::vector<int>> actions_;
  mutable std::vector<std::vector<int>> covers_;
  mutable bool actions_built_ = false;
  mutable bool covers_built_ = false;
};

// Full-feedback linear agent: picks an atom set, then observes the entire
// hidden vector v_t.
class LinearAgent {
 public:
  virtual ~LinearAgent() = default;
  virtual std::vector<int> act(RngStream& rng) = 0;
  virtual void observe(std::span<const double> atom_costs) = 0;
};

struct PerturbationSpec {
  double eps = 1.0;  // per-coordinate uniform on [-1/eps, 1/eps]
};

// eps = sqrt(d) / (U sqrt(T)).
double fpl_epsilon(int num_atoms, double cost_bound, int horizon);

// FPL with the tuned perturbation for action costs bounded by U over T rounds
// (per-coordinate hidden vectors in [0, U/d]).
std::unique_ptr<LinearAgent> fpl(const ActionFamily& family, double cost_bound, int horizon);

// Follow the Perturbed Leader. Draws v0 once, then plays M(v0 + v_{1:t-1}).
// Passing eps = 0 pins v0 = 0 and degenerates to Follow the Leader.
class FplAgent final : public LinearAgent {
 public:
  FplAgent(const ActionFamily& family, PerturbationSpec perturbation, double per_coord_bound);

  std::vector<int> act(RngStream& rng) override;
  void observe(std::span<const double> atom_costs) override;
  const std::vector<double>& accumulated() const { return accumulated_; }

 private:
  const ActionFamily& family_;
  PerturbationSpec perturbation_;
  double per_coord_bound_;  // entries of v_t must lie in [0, bound]
  std::vector<double> accumulated_;  // v0 + v_{1:t-1}
  bool initialized_ = false;
};

// Hedge over the explicitly enumerated action family (desk scale).
class HedgeOverActionsAgent final : public LinearAgent {
 public:
  HedgeOverActionsAgent(const ActionFamily& family, double eps);
  std::vector<int> act(RngStream& rng) override;
  void observe(std::span<const double> atom_costs) override;
  std::vector<double> action_distribution() const;

 private:
  const ActionFamily& family_;
  std::vector<double> weights_;
  double eps_;
};

struct LinearEpisodeResult {
  double algorithm_cost = 0.0;
  double best_fixed_cost = 0.0;  // OPT over the family on the realized table
  std::vector<std::vector<int>> chosen;
};

// Runs a full-feedback linear episode over a fixed table of hidden vectors.
LinearEpisodeResult run_linear_episode(const ActionFamily& family,
                                       const std::vector<std::vector<double>>& hidden_vectors,
                                       LinearAgent& agent, RngStream rng);

struct BplTrace {
  double bpl_cost = 0.0;
  double opt = 0.0;
  double bound = 0.0;  // opt + d/eps
  bool inequality_holds = false;
};

// Test-only diagnostic: plays M(v_{0:t}) with the round-t vector included and
// checks cost(BPL) <= OPT + d/eps on the realization.
BplTrace bpl_diagnostic(const ActionFamily& family,
                        const std::vector<std::vector<double>>& hidden_vectors,
                        PerturbationSpec perturbation, RngStream rng);

// Combinatorial semi-bandit agent: explores a uniform atom's cover with
// probability gamma, else follows the inner full-feedback algorithm; feeds
// the inner algorithm IPS fake atom costs.
class AlgSbAgent {
 public:
  AlgSbAgent(const ActionFamily& family, double gamma, std::unique_ptr<LinearAgent> inner);

  std::vector<int> act(RngStream& rng);
  // Semi-bandit feedback: costs of the chosen action's atoms.
  void observe(std::span<const std::pair<int, double>> atom_costs);

  double exploration_atom_probability() const;  // gamma / d
  // Fake atom-cost vector implied by one realized branch; pure, for tests.
  std::vector<double> fake_costs(bool explored, int explored_atom,
                                 std::span<const std::pair<int, double>> atom_costs) const;

 private:
  const ActionFamily& family_;
  double gamma_;
  std::unique_ptr<LinearAgent> inner_;
  bool last_explored_ = false;
  int last_atom_ = -1;
  std::vector<int> inner_action_;
};

struct SemiBanditEpisodeResult {
  double algorithm_cost = 0.0;
  double best_fixed_cost = 0.0;
};

SemiBanditEpisodeResult run_semibandit_episode(
    const ActionFamily& family, const std::vector<std::vector<double>>& atom_cost_table,
    AlgSbAgent& agent, RngStream rng);

// The synchronization example that defeats Follow the Leader: actions
// {(1,0),(0,1)}, v_1 = (1/3, 2/3), then (1,0) on even rounds and (0,1) on odd.
std::vector<std::vector<double>> ftl_sync_table(int rounds);
ActionFamily ftl_sync_family();

}  // namespace banditlab::linear
