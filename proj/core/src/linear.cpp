#include "banditlab/linear.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace banditlab::linear {

namespace {

std::vector<int> topological_order(const Dag& dag) {
  std::vector<std::vector<int>> out(dag.num_nodes);
  std::vector<int> indeg(dag.num_nodes, 0);
  for (const auto& e : dag.edges) {
    out[e.from].push_back(e.to);
    ++indeg[e.to];
  }
  std::vector<int> order;
  std::vector<int> queue;
  for (int v = 0; v < dag.num_nodes; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    order.push_back(v);
    for (int w : out[v])
      if (--indeg[w] == 0) queue.push_back(w);
  }
  if (static_cast<int>(order.size()) != dag.num_nodes)
    throw std::invalid_argument("Dag: graph has a cycle");
  return order;
}

bool set_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

Dag normalize_dag(Dag dag) {
  topological_order(dag);  // validates acyclicity
  // reachability from source / to sink
  std::vector<std::vector<int>> out(dag.num_nodes), in(dag.num_nodes);
  for (const auto& e : dag.edges) {
    out[e.from].push_back(e.to);
    in[e.to].push_back(e.from);
  }
  auto reach = [&](int start, const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(dag.num_nodes, false);
    std::vector<int> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    return seen;
  };
  const auto from_source = reach(dag.source, out);
  const auto to_sink = reach(dag.sink, in);

  std::vector<Dag::Edge> kept;
  for (const auto& e : dag.edges)
    if (from_source[e.from] && to_sink[e.to]) kept.push_back(e);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = static_cast<int>(i);
  dag.edges = std::move(kept);
  if (dag.edges.empty() && dag.source != dag.sink)
    throw std::invalid_argument("Dag: no source->sink path");
  return dag;
}

Dag load_dag(std::istream& in) {
  Dag dag;
  dag.source = -1;
  dag.sink = -1;
  std::string line;
  int max_node = -1;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
    if (tag == "edge") {
      Dag::Edge e;
      if (!(ls >> e.id >> e.from >> e.to)) throw std::invalid_argument("Dag: bad edge line");
      dag.edges.push_back(e);
      max_node = std::max({max_node, e.from, e.to});
    } else if (tag == "source") {
      if (!(ls >> dag.source)) throw std::invalid_argument("Dag: bad source line");
      max_node = std::max(max_node, dag.source);
    } else if (tag == "sink") {
      if (!(ls >> dag.sink)) throw std::invalid_argument("Dag: bad sink line");
      max_node = std::max(max_node, dag.sink);
    } else {
      throw std::invalid_argument("Dag: unknown line tag '" + tag + "'");
    }
  }
  if (dag.source < 0 || dag.sink < 0) throw std::invalid_argument("Dag: missing source or sink");
  dag.num_nodes = max_node + 1;
  return normalize_dag(std::move(dag));
}

Dag load_dag_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("Dag: cannot open " + path);
  return load_dag(in);
}

ActionFamily ActionFamily::explicit_family(int num_atoms, std::vector<std::vector<int>> actions) {
  if (num_atoms < 1) throw std::invalid_argument("ActionFamily: need at least one atom");
  if (actions.empty()) throw std::invalid_argument("ActionFamily: empty family");
  std::vector<bool> covered(num_atoms, false);
  for (auto& action : actions) {
    std::sort(action.begin(), action.end());
    action.erase(std::unique(action.begin(), action.end()), action.end());
    for (int atom : action) {
      if (atom < 0 || atom >= num_atoms) throw std::out_of_range("ActionFamily: atom out of range");
      covered[atom] = true;
    }
  }
  for (int e = 0; e < num_atoms; ++e)
    if (!covered[e])
      throw std::invalid_argument("ActionFamily: atom " + std::to_string(e) + " covered by no action");
  ActionFamily fam;
  fam.num_atoms_ = num_atoms;
  fam.actions_ = std::move(actions);
  fam.actions_built_ = true;
  return fam;
}

ActionFamily ActionFamily::paths_of(const Dag& dag) {
  ActionFamily fam;
  fam.dag_ = normalize_dag(dag);
  fam.is_dag_ = true;
  fam.num_atoms_ = static_cast<int>(fam.dag_.edges.size());
  if (fam.num_atoms_ == 0) throw std::invalid_argument("ActionFamily: DAG has no usable edges");
  return fam;
}

double ActionFamily::action_cost(std::span<const int> action, std::span<const double> v) {
  double c = 0.0;
  for (int atom : action) c += v[atom];
  return c;
}

std::vector<int> ActionFamily::min_action(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != num_atoms_)
    throw std::invalid_argument("min_action: cost vector has wrong length");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("min_action: costs must be finite");

  if (!is_dag_) {
    const auto& acts = actions();
    std::size_t best = 0;
    double best_cost = action_cost(acts[0], v);
    for (std::size_t i = 1; i < acts.size(); ++i) {
      const double c = action_cost(acts[i], v);
      if (c < best_cost || (c == best_cost && set_lex_less(acts[i], acts[best]))) {
        best = i;
        best_cost = c;
      }
    }
    return acts[best];
  }

  // Topological DP on negative-weight-safe DAG: dist[u] = min cost u -> sink.
  const auto order = topological_order(dag_);
  std::vector<std::vector<int>> out_edges(dag_.num_nodes);
  for (std::size_t i = 0; i < dag_.edges.size(); ++i) out_edges[dag_.edges[i].from].push_back(static_cast<int>(i));
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(dag_.num_nodes, kInf);
  dist[dag_.sink] = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int u = *it;
    for (int ei : out_edges[u]) {
      const auto& e = dag_.edges[ei];
      if (dist[e.to] == kInf) continue;
      dist[u] = std::min(dist[u], v[e.id] + dist[e.to]);
    }
  }
  if (dist[dag_.source] == kInf) throw std::logic_error("min_action: sink unreachable");
  // Reconstruct along tight edges, smallest edge id first.
  std::vector<int> action;
  int u = dag_.source;
  while (u != dag_.sink) {
    int chosen = -1;
    for (int ei : out_edges[u]) {
      const auto& e = dag_.edges[ei];
      if (dist[e.to] == kInf) continue;
      if (std::abs(v[e.id] + dist[e.to] - dist[u]) <= 1e-12 * std::max(1.0, std::abs(dist[u]))) {
        if (chosen == -1 || e.id < dag_.edges[chosen].id) chosen = ei;
      }
    }
    if (chosen == -1) throw std::logic_error("min_action: reconstruction failed");
    action.push_back(dag_.edges[chosen].id);
    u = dag_.edges[chosen].to;
  }
  std::sort(action.begin(), action.end());
  return action;
}

const std::vector<std::vector<int>>& ActionFamily::actions() const {
  if (actions_built_) return actions_;
  // enumerate all source->sink paths (desk scale)
  std::vector<std::vector<int>> out_edges(dag_.num_nodes);
  for (std::size_t i = 0; i < dag_.edges.size(); ++i)
    out_edges[dag_.edges[i].from].push_back(static_cast<int>(i));
  std::vector<int> current;
  std::vector<std::vector<int>> acc;
  constexpr std::size_t kMaxActions = 1 << 20;
  std::function<void(int)> dfs = [&](int u) {
    if (u == dag_.sink) {
      auto sorted = current;
      std::sort(sorted.begin(), sorted.end());
      acc.push_back(std::move(sorted));
      if (acc.size() > kMaxActions) throw std::length_error("ActionFamily: too many paths to enumerate");
      return;
    }
    for (int ei : out_edges[u]) {
      current.push_back(dag_.edges[ei].id);
      dfs(dag_.edges[ei].to);
      current.pop_back();
    }
  };
  dfs(dag_.source);
  std::sort(acc.begin(), acc.end(), set_lex_less);
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  actions_ = std::move(acc);
  actions_built_ = true;
  return actions_;
}

void ActionFamily::build_covers() const {
  const auto& acts = actions();
  covers_.assign(num_atoms_, {});
  std::vector<bool> have(num_atoms_, false);
  for (int e = 0; e < num_atoms_; ++e) {
    for (const auto& action : acts) {
      if (std::find(action.begin(), action.end(), e) == action.end()) continue;
      if (!have[e] || action.size() < covers_[e].size() ||
          (action.size() == covers_[e].size() && set_lex_less(action, covers_[e]))) {
        covers_[e] = action;
        have[e] = true;
      }
    }
    if (!have[e])
      throw std::invalid_argument("ActionFamily: atom " + std::to_string(e) + " has no cover");
  }
  covers_built_ = true;
}

const std::vector<int>& ActionFamily::cover_action(int atom) const {
  if (atom < 0 || atom >= num_atoms_) throw std::out_of_range("cover_action: atom out of range");
  if (!covers_built_) build_covers();
  return covers_[atom];
}

// ---------------------------------------------------------------------------
// FPL

double fpl_epsilon(int num_atoms, double cost_bound, int horizon) {
  if (num_atoms < 1 || !(cost_bound > 0.0) || horizon < 1)
    throw std::invalid_argument("fpl_epsilon");
  return std::sqrt(static_cast<double>(num_atoms)) /
         (cost_bound * std::sqrt(static_cast<double>(horizon)));
}

std::unique_ptr<LinearAgent> fpl(const ActionFamily& family, double cost_bound, int horizon) {
  const double eps = fpl_epsilon(family.num_atoms(), cost_bound, horizon);
  return std::make_unique<FplAgent>(family, PerturbationSpec{eps},
                                    cost_bound / family.num_atoms());
}

FplAgent::FplAgent(const ActionFamily& family, PerturbationSpec perturbation,
                   double per_coord_bound)
    : family_(family),
      perturbation_(perturbation),
      per_coord_bound_(per_coord_bound),
      accumulated_(family.num_atoms(), 0.0) {
  if (perturbation_.eps < 0.0) throw std::invalid_argument("FplAgent: eps must be >= 0");
}

std::vector<int> FplAgent::act(RngStream& rng) {
  if (!initialized_) {
    // v0 drawn exactly once per run
    if (perturbation_.eps > 0.0) {
      const double half = 1.0 / perturbation_.eps;
      for (double& x : accumulated_) x = rng.uniform(-half, half);
    }
    initialized_ = true;
  }
  return family_.min_action(accumulated_);
}

void FplAgent::observe(std::span<const double> atom_costs) {
  if (static_cast<int>(atom_costs.size()) != family_.num_atoms())
    throw std::invalid_argument("FplAgent: cost vector has wrong length");
  for (double c : atom_costs)
    if (!(c >= 0.0 && c <= per_coord_bound_ + 1e-12))
      throw std::domain_error("FplAgent: atom cost outside [0, U/d]");
  for (std::size_t i = 0; i < accumulated_.size(); ++i) accumulated_[i] += atom_costs[i];
}

HedgeOverActionsAgent::HedgeOverActionsAgent(const ActionFamily& family, double eps)
    : family_(family), weights_(family.actions().size(), 1.0), eps_(eps) {
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("HedgeOverActionsAgent: eps must be in (0, 0.5)");
}

std::vector<double> HedgeOverActionsAgent::action_distribution() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  std::vector<double> p(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) p[i] = weights_[i] / sum;
  return p;
}

std::vector<int> HedgeOverActionsAgent::act(RngStream& rng) {
  const auto p = action_distribution();
  return family_.actions()[rng.categorical(p)];
}

void HedgeOverActionsAgent::observe(std::span<const double> atom_costs) {
  const auto& acts = family_.actions();
  double peak = 0.0;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    const double c = ActionFamily::action_cost(acts[i], atom_costs);
    if (c < 0.0) throw std::domain_error("HedgeOverActionsAgent: negative action cost");
    weights_[i] *= std::pow(1.0 - eps_, c);
    peak = std::max(peak, weights_[i]);
  }
  if (peak < 1e-280 && peak > 0.0)
    for (double& w : weights_) w /= peak;
}

LinearEpisodeResult run_linear_episode(const ActionFamily& family,
                                       const std::vector<std::vector<double>>& hidden_vectors,
                                       LinearAgent& agent, RngStream rng) {
  LinearEpisodeResult result;
  RngStream agent_rng = rng.fork("agent");
  std::vector<double> total(family.num_atoms(), 0.0);
  for (const auto& v : hidden_vectors) {
    const auto action = agent.act(agent_rng);
    result.algorithm_cost += ActionFamily::action_cost(action, v);
    result.chosen.push_back(action);
    agent.observe(v);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += v[i];
  }
  result.best_fixed_cost = ActionFamily::action_cost(family.min_action(total), total);
  return result;
}

BplTrace bpl_diagnostic(const ActionFamily& family,
                        const std::vector<std::vector<double>>& hidden_vectors,
                        PerturbationSpec perturbation, RngStream rng) {
  if (!(perturbation.eps > 0.0)) throw std::invalid_argument("bpl_diagnostic: eps must be > 0");
  const int d = family.num_atoms();
  std::vector<double> acc(d, 0.0);
  const double half = 1.0 / perturbation.eps;
  RngStream noise = rng.fork("v0");
  for (double& x : acc) x = noise.uniform(-half, half);

  BplTrace trace;
  std::vector<double> total(d, 0.0);
  for (const auto& v : hidden_vectors) {
    for (int i = 0; i < d; ++i) {
      acc[i] += v[i];
      total[i] += v[i];
    }
    trace.bpl_cost += ActionFamily::action_cost(family.min_action(acc), v);
  }
  trace.opt = ActionFamily::action_cost(family.min_action(total), total);
  trace.bound = trace.opt + d / perturbation.eps;
  trace.inequality_holds = trace.bpl_cost <= trace.bound + 1e-9;
  return trace;
}

// ---------------------------------------------------------------------------
// AlgSB

AlgSbAgent::AlgSbAgent(const ActionFamily& family, double gamma,
                       std::unique_ptr<LinearAgent> inner)
    : family_(family), gamma_(gamma), inner_(std::move(inner)) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("AlgSbAgent: gamma in (0,1)");
  if (!inner_) throw std::invalid_argument("AlgSbAgent: missing inner algorithm");
  for (int e = 0; e < family_.num_atoms(); ++e) family_.cover_action(e);  // validates coverage
}

double AlgSbAgent::exploration_atom_probability() const { return gamma_ / family_.num_atoms(); }

std::vector<int> AlgSbAgent::act(RngStream& rng) {
  if (rng.bernoulli(gamma_)) {
    last_explored_ = true;
    last_atom_ = rng.uniform_int(family_.num_atoms());
    // still advance the inner agent's round so its state stays aligned
    inner_action_ = inner_->act(rng);
    return family_.cover_action(last_atom_);
  }
  last_explored_ = false;
  last_atom_ = -1;
  inner_action_ = inner_->act(rng);
  return inner_action_;
}

std::vector<double> AlgSbAgent::fake_costs(
    bool explored, int explored_atom,
    std::span<const std::pair<int, double>> atom_costs) const {
  std::vector<double> fake(family_.num_atoms(), 0.0);
  if (!explored) return fake;
  for (const auto& [atom, cost] : atom_costs) {
    if (atom == explored_atom) {
      // event Lambda_{t,e}: explored and the uniform draw picked this atom
      fake[atom] = cost * family_.num_atoms() / gamma_;
    }
  }
  return fake;
}

void AlgSbAgent::observe(std::span<const std::pair<int, double>> atom_costs) {
  inner_->observe(fake_costs(last_explored_, last_atom_, atom_costs));
}

SemiBanditEpisodeResult run_semibandit_episode(
    const ActionFamily& family, const std::vector<std::vector<double>>& atom_cost_table,
    AlgSbAgent& agent, RngStream rng) {
  SemiBanditEpisodeResult result;
  RngStream agent_rng = rng.fork("agent");
  std::vector<double> total(family.num_atoms(), 0.0);
  for (const auto& v : atom_cost_table) {
    const auto action = agent.act(agent_rng);
    std::vector<std::pair<int, double>> observed;
    observed.reserve(action.size());
    for (int atom : action) {
      result.algorithm_cost += v[atom];
      observed.emplace_back(atom, v[atom]);
    }
    agent.observe(observed);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += v[i];
  }
  result.best_fixed_cost = ActionFamily::action_cost(family.min_action(total), total);
  return result;
}

std::vector<std::vector<double>> ftl_sync_table(int rounds) {
  std::vector<std::vector<double>> table;
  table.reserve(rounds);
  for (int t = 1; t <= rounds; ++t) {
    if (t == 1)
      table.push_back({1.0 / 3.0, 2.0 / 3.0});
    else if (t % 2 == 0)
      table.push_back({1.0, 0.0});
    else
      table.push_back({0.0, 1.0});
  }
  return table;
}

ActionFamily ftl_sync_family() { return ActionFamily::explicit_family(2, {{0}, {1}}); }

}  // namespace banditlab::linear
