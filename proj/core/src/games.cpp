#include "banditlab/games.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "banditlab/adversarial.hpp"

namespace banditlab::games {

GameMatrix::GameMatrix(std::vector<std::vector<double>> entries) : m(std::move(entries)) {
  if (m.empty() || m.front().empty()) throw std::invalid_argument("GameMatrix: empty");
  for (const auto& row : m) {
    if (row.size() != m.front().size()) throw std::invalid_argument("GameMatrix: ragged rows");
    for (double x : row)
      if (!std::isfinite(x)) throw std::invalid_argument("GameMatrix: entries must be finite");
  }
}

double GameMatrix::min_entry() const {
  double v = m[0][0];
  for (const auto& row : m)
    for (double x : row) v = std::min(v, x);
  return v;
}

double GameMatrix::max_entry() const {
  double v = m[0][0];
  for (const auto& row : m)
    for (double x : row) v = std::max(v, x);
  return v;
}

double GameMatrix::value(std::span<const double> p, std::span<const double> q) const {
  if (static_cast<int>(p.size()) != rows() || static_cast<int>(q.size()) != cols())
    throw std::invalid_argument("GameMatrix::value: dimension mismatch");
  double v = 0.0;
  for (int i = 0; i < rows(); ++i) {
    if (p[i] == 0.0) continue;
    double row_val = 0.0;
    for (int j = 0; j < cols(); ++j) row_val += m[i][j] * q[j];
    v += p[i] * row_val;
  }
  return v;
}

double GameMatrix::f_of(std::span<const double> p) const {
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < cols(); ++j) {
    double v = 0.0;
    for (int i = 0; i < rows(); ++i) v += p[i] * m[i][j];
    best = std::max(best, v);
  }
  return best;
}

double GameMatrix::h_of(std::span<const double> q) const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < rows(); ++i) {
    double v = 0.0;
    for (int j = 0; j < cols(); ++j) v += q[j] * m[i][j];
    best = std::min(best, v);
  }
  return best;
}

GameMatrix load_matrix(std::istream& in) {
  int rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw std::runtime_error("load_matrix: bad header");
  std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (!(in >> m[i][j])) throw std::runtime_error("load_matrix: missing entries");
  return GameMatrix(std::move(m));
}

GameMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_matrix: cannot open " + path);
  return load_matrix(in);
}

int GamePlayer::sample(const std::vector<double>& strategy, RngStream& rng) {
  return rng.categorical(strategy);
}

namespace {

class HedgePlayer final : public GamePlayer {
 public:
  HedgePlayer(int num_actions, double eps) : weights_(num_actions, eps) {}
  int num_actions() const override { return weights_.size(); }
  std::vector<double> strategy() override { return weights_.probabilities(); }
  void observe_full(const std::vector<double>& costs) override { weights_.apply_costs(costs); }
  void observe_bandit(int, double) override {
    throw std::logic_error("hedge_player: needs full feedback");
  }

 private:
  adversarial::WeightState weights_;
};

class Exp3Player final : public GamePlayer {
 public:
  Exp3Player(int num_actions, double gamma, double eps)
      : identity_(num_actions), core_(num_actions, num_actions, gamma, eps) {
    for (int a = 0; a < num_actions; ++a) identity_[a] = a;
  }
  int num_actions() const override { return core_.num_arms(); }
  std::vector<double> strategy() override { return core_.arm_distribution(identity_); }
  int sample(const std::vector<double>& strategy, RngStream& rng) override {
    return rng.categorical(strategy);
  }
  void observe_full(const std::vector<double>&) override {
    throw std::logic_error("exp3_player: expects bandit feedback");
  }
  void observe_bandit(int action, double cost) override {
    core_.update(identity_, action, cost);
  }

 private:
  std::vector<int> identity_;
  adversarial::Exp4Core core_;
};

// Column player that best-responds to the row player's announced strategy.
class BestResponsePlayer final : public GamePlayer {
 public:
  explicit BestResponsePlayer(const GameMatrix& matrix) : matrix_(matrix) {}
  int num_actions() const override { return matrix_.cols(); }

  void see_opponent_strategy(const std::vector<double>& p) override {
    row_strategy_ = p;
    has_row_ = true;
  }

  std::vector<double> strategy() override {
    if (!has_row_) throw std::logic_error("best_response_adversary: row strategy not provided");
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < matrix_.cols(); ++j) {
      double v = 0.0;
      for (int i = 0; i < matrix_.rows(); ++i) v += row_strategy_[i] * matrix_.at(i, j);
      if (v > best_value) {  // strict: min argmax
        best_value = v;
        best = j;
      }
    }
    std::vector<double> point(matrix_.cols(), 0.0);
    point[best] = 1.0;
    return point;
  }

  void observe_full(const std::vector<double>&) override {}
  void observe_bandit(int, double) override {}

 private:
  const GameMatrix& matrix_;
  std::vector<double> row_strategy_;
  bool has_row_ = false;
};

}  // namespace

std::unique_ptr<GamePlayer> hedge_player(int num_actions, double eps) {
  return std::make_unique<HedgePlayer>(num_actions, eps);
}

std::unique_ptr<GamePlayer> exp3_player(int num_actions, double gamma, double eps) {
  return std::make_unique<Exp3Player>(num_actions, gamma, eps);
}

std::unique_ptr<GamePlayer> best_response_adversary(const GameMatrix& matrix) {
  return std::make_unique<BestResponsePlayer>(matrix);
}

namespace {

// Shared driver: `pick` returns the round-t payoff matrix, `benchmark` is the
// matrix the report is computed against, and (lo, hi) bound every entry the
// players can see.
RepeatedGameResult run_repeated(GamePlayer& row, GamePlayer& col,
                                const std::function<const GameMatrix&(int, RngStream&)>& pick,
                                const GameMatrix& benchmark, double lo, double hi, int rounds,
                                GameFeedback feedback, RngStream rng) {
  if (rounds < 1) throw std::invalid_argument("repeated_game: rounds must be >= 1");
  if (row.num_actions() != benchmark.rows() || col.num_actions() != benchmark.cols())
    throw std::invalid_argument("repeated_game: player/matrix dimension mismatch");

  const double range = hi > lo ? hi - lo : 1.0;
  RngStream row_rng = rng.fork("row");
  RngStream col_rng = rng.fork("col");
  RngStream matrix_rng = rng.fork("matrix");

  GameTrace trace;
  trace.row_cost_per_action.assign(benchmark.rows(), 0.0);
  trace.col_reward_per_action.assign(benchmark.cols(), 0.0);
  trace.sigma_bar.assign(benchmark.rows(), std::vector<double>(benchmark.cols(), 0.0));

  for (int t = 0; t < rounds; ++t) {
    const GameMatrix& matrix = pick(t, matrix_rng);
    // normalized costs in [0,1]: row minimizes (M - lo)/range, column
    // minimizes (hi - M)/range; the affine map preserves equilibria
    auto row_cost = [&](int i, int j) { return (matrix.at(i, j) - lo) / range; };
    auto col_cost = [&](int i, int j) { return (hi - matrix.at(i, j)) / range; };

    auto p = row.strategy();
    col.see_opponent_strategy(p);
    auto q = col.strategy();
    const int i = row.sample(p, row_rng);
    const int j = col.sample(q, col_rng);

    trace.row_actions.push_back(i);
    trace.col_actions.push_back(j);
    trace.total_row_cost += matrix.at(i, j);
    for (int a = 0; a < matrix.rows(); ++a) trace.row_cost_per_action[a] += matrix.at(a, j);
    for (int b = 0; b < matrix.cols(); ++b) trace.col_reward_per_action[b] += matrix.at(i, b);
    for (int a = 0; a < matrix.rows(); ++a)
      for (int b = 0; b < matrix.cols(); ++b) trace.sigma_bar[a][b] += p[a] * q[b];

    if (feedback == GameFeedback::Full) {
      std::vector<double> row_costs(matrix.rows());
      for (int a = 0; a < matrix.rows(); ++a) row_costs[a] = row_cost(a, j);
      std::vector<double> col_costs(matrix.cols());
      for (int b = 0; b < matrix.cols(); ++b) col_costs[b] = col_cost(i, b);
      row.observe_full(row_costs);
      col.observe_full(col_costs);
    } else {
      row.observe_bandit(i, row_cost(i, j));
      col.observe_bandit(j, col_cost(i, j));
    }
  }

  for (auto& r : trace.sigma_bar)
    for (double& x : r) x /= rounds;

  const double best_row_cost =
      *std::min_element(trace.row_cost_per_action.begin(), trace.row_cost_per_action.end());
  const double best_col_reward =
      *std::max_element(trace.col_reward_per_action.begin(), trace.col_reward_per_action.end());
  trace.row_realized_regret = trace.total_row_cost - best_row_cost;
  trace.col_realized_regret = best_col_reward - trace.total_row_cost;

  RepeatedGameResult result;
  result.report.row_avg_play.assign(benchmark.rows(), 0.0);
  result.report.col_avg_play.assign(benchmark.cols(), 0.0);
  for (int i : trace.row_actions) result.report.row_avg_play[i] += 1.0 / rounds;
  for (int j : trace.col_actions) result.report.col_avg_play[j] += 1.0 / rounds;
  result.report.value_estimate = trace.total_row_cost / rounds;
  result.report.f_row = benchmark.f_of(result.report.row_avg_play);
  result.report.h_col = benchmark.h_of(result.report.col_avg_play);
  result.report.duality_gap = result.report.f_row - result.report.h_col;
  result.report.certified_eps = result.report.duality_gap;
  result.trace = std::move(trace);
  return result;
}

}  // namespace

RepeatedGameResult repeated_game(GamePlayer& row, GamePlayer& col, const GameMatrix& matrix,
                                 int rounds, GameFeedback feedback, RngStream rng) {
  return run_repeated(
      row, col, [&matrix](int, RngStream&) -> const GameMatrix& { return matrix; }, matrix,
      matrix.min_entry(), matrix.max_entry(), rounds, feedback, std::move(rng));
}

StochasticGame::StochasticGame(std::vector<GameMatrix> matrices_, std::vector<double> probs_)
    : matrices(std::move(matrices_)), probs(std::move(probs_)) {
  if (matrices.empty() || matrices.size() != probs.size())
    throw std::invalid_argument("StochasticGame: matrices/probs mismatch");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("StochasticGame: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("StochasticGame: probs must sum to 1");
  for (const auto& m : matrices)
    if (m.rows() != matrices.front().rows() || m.cols() != matrices.front().cols())
      throw std::invalid_argument("StochasticGame: dimension mismatch across matrices");
}

GameMatrix StochasticGame::mean() const {
  std::vector<std::vector<double>> entries(matrices.front().rows(),
                                           std::vector<double>(matrices.front().cols(), 0.0));
  for (std::size_t m = 0; m < matrices.size(); ++m)
    for (int i = 0; i < matrices[m].rows(); ++i)
      for (int j = 0; j < matrices[m].cols(); ++j)
        entries[i][j] += probs[m] * matrices[m].at(i, j);
  return GameMatrix(std::move(entries));
}

RepeatedGameResult repeated_stochastic_game(GamePlayer& row, GamePlayer& col,
                                            const StochasticGame& game, int rounds,
                                            GameFeedback feedback, RngStream rng) {
  const GameMatrix mean = game.mean();
  double lo = game.matrices.front().min_entry();
  double hi = game.matrices.front().max_entry();
  for (const auto& m : game.matrices) {
    lo = std::min(lo, m.min_entry());
    hi = std::max(hi, m.max_entry());
  }
  return run_repeated(
      row, col,
      [&game](int, RngStream& matrix_rng) -> const GameMatrix& {
        return game.matrices[matrix_rng.categorical(game.probs)];
      },
      mean, lo, hi, rounds, feedback, std::move(rng));
}

EquilibriumReport minimax_selfplay(const GameMatrix& matrix, double tol, int max_doublings,
                                   std::uint64_t seed) {
  if (!(tol > 0.0)) throw std::invalid_argument("minimax_selfplay: tol must be positive");
  EquilibriumReport best;
  best.duality_gap = std::numeric_limits<double>::infinity();
  int rounds = 128;
  for (int it = 0; it < max_doublings; ++it, rounds *= 2) {
    const double eps = adversarial::hedge_epsilon_bounded(
        std::max(2, std::max(matrix.rows(), matrix.cols())), static_cast<double>(rounds));
    auto row = hedge_player(matrix.rows(), eps);
    auto col = hedge_player(matrix.cols(), eps);
    RngStream rng(seed + static_cast<std::uint64_t>(it));
    auto result = repeated_game(*row, *col, matrix, rounds, GameFeedback::Full, std::move(rng));
    if (result.report.duality_gap < best.duality_gap) best = result.report;
    if (best.duality_gap <= tol) break;
  }
  best.certified_eps = best.duality_gap;
  // midpoint of the certified bracket [h(q), f(p)]
  best.value_estimate = 0.5 * (best.f_row + best.h_col);
  return best;
}

double value_2x2(const GameMatrix& matrix) {
  if (matrix.rows() != 2 || matrix.cols() != 2) throw std::invalid_argument("value_2x2: not 2x2");
  const double a = matrix.at(0, 0), b = matrix.at(0, 1), c = matrix.at(1, 0), d = matrix.at(1, 1);
  // pure saddle: min over rows of the row max meets max over columns of the
  // column min (the row player minimizes cost)
  const double minimax = std::min(std::max(a, b), std::max(c, d));
  const double maximin = std::max(std::min(a, c), std::min(b, d));
  if (minimax == maximin) return minimax;
  const double denom = a - b - c + d;
  if (denom == 0.0) throw std::invalid_argument("value_2x2: degenerate matrix");
  return (a * d - b * c) / denom;  // cross-ratio formula for fully mixed play
}

CheckResult approx_nash_check(std::span<const double> p, std::span<const double> q,
                              const GameMatrix& matrix, double v_hat, double eps) {
  CheckResult result;
  const double col_margin = v_hat + eps - matrix.f_of(p);   // >= 0 required
  const double row_margin = matrix.h_of(q) - (v_hat - eps);  // >= 0 required
  result.worst_margin = std::min(col_margin, row_margin);
  result.pass = result.worst_margin >= -1e-12;
  return result;
}

CheckResult cce_check(const std::vector<std::vector<double>>& sigma, const GameMatrix& row_cost,
                      const GameMatrix& col_reward, double eps) {
  const int rows = row_cost.rows();
  const int cols = row_cost.cols();
  if (col_reward.rows() != rows || col_reward.cols() != cols)
    throw std::invalid_argument("cce_check: payoff matrices disagree");
  if (static_cast<int>(sigma.size()) != rows)
    throw std::invalid_argument("cce_check: sigma has wrong shape");
  double mass = 0.0;
  for (const auto& r : sigma) {
    if (static_cast<int>(r.size()) != cols)
      throw std::invalid_argument("cce_check: sigma has wrong shape");
    for (double x : r) {
      if (x < -1e-12) throw std::invalid_argument("cce_check: negative sigma entry");
      mass += x;
    }
  }
  if (std::abs(mass - 1.0) > 1e-9)
    throw std::invalid_argument("cce_check: sigma must be a distribution");

  // marginals
  std::vector<double> col_marginal(cols, 0.0), row_marginal(rows, 0.0);
  double row_cost_commit = 0.0, col_reward_commit = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      row_cost_commit += sigma[i][j] * row_cost.at(i, j);
      col_reward_commit += sigma[i][j] * col_reward.at(i, j);
      col_marginal[j] += sigma[i][j];
      row_marginal[i] += sigma[i][j];
    }

  CheckResult result;
  result.worst_margin = std::numeric_limits<double>::infinity();
  // row deviations: committing must cost at most deviating, up to eps
  for (int i0 = 0; i0 < rows; ++i0) {
    double dev = 0.0;
    for (int j = 0; j < cols; ++j) dev += col_marginal[j] * row_cost.at(i0, j);
    result.worst_margin = std::min(result.worst_margin, dev + eps - row_cost_commit);
  }
  // column deviations: committing must pay at least deviating, up to eps
  for (int j0 = 0; j0 < cols; ++j0) {
    double dev = 0.0;
    for (int i = 0; i < rows; ++i) dev += row_marginal[i] * col_reward.at(i, j0);
    result.worst_margin = std::min(result.worst_margin, col_reward_commit + eps - dev);
  }
  result.pass = result.worst_margin >= -1e-12;
  return result;
}

}  // namespace banditlab::games
