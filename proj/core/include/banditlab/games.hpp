#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "banditlab/rng.hpp"

namespace banditlab::games {

// Zero-sum game matrix: entry (i, j) is the row player's cost and the column
// player's reward.
struct GameMatrix {
  std::vector<std::vector<double>> m;

  explicit GameMatrix(std::vector<std::vector<double>> entries);
  int rows() const { return static_cast<int>(m.size()); }
  int cols() const { return static_cast<int>(m.front().size()); }
  double at(int i, int j) const { return m[i][j]; }
  double min_entry() const;
  double max_entry() const;

  // M(p, q) = p' M q; p and q may be point masses via basis vectors.
  double value(std::span<const double> p, std::span<const double> q) const;
  // f(p) = max_j M(p, j)
  double f_of(std::span<const double> p) const;
  // h(q) = min_i M(i, q)
  double h_of(std::span<const double> q) const;
};

// `m n` header then m rows of n entries, whitespace-separated.
GameMatrix load_matrix(std::istream& in);
GameMatrix load_matrix_file(const std::string& path);

enum class GameFeedback { Full, Bandit };

// A player of the repeated game. Payoffs handed to players are normalized to
// [0,1] costs; minimizing normalized cost is minimizing cost for the row
// player and maximizing reward for the column player.
class GamePlayer {
 public:
  virtual ~GamePlayer() = default;
  virtual int num_actions() const = 0;
  // Mixed strategy for this round (point mass for deterministic players).
  virtual std::vector<double> strategy() = 0;
  virtual int sample(const std::vector<double>& strategy, RngStream& rng);
  virtual void observe_full(const std::vector<double>& costs) = 0;
  virtual void observe_bandit(int action, double cost) = 0;
  // Hook for adversaries that react to the opponent's current mixed strategy.
  virtual void see_opponent_strategy(const std::vector<double>&) {}
};

// Hedge-driven player (works for both roles under the cost normalization).
std::unique_ptr<GamePlayer> hedge_player(int num_actions, double eps);
// EXP3-driven player for bandit feedback.
std::unique_ptr<GamePlayer> exp3_player(int num_actions, double gamma, double eps);
// Best response to the opponent's announced mixed strategy; for the column
// player: j_t = min argmax_j E_{i~p} M(i, j).
std::unique_ptr<GamePlayer> best_response_adversary(const GameMatrix& matrix);

struct EquilibriumReport {
  std::vector<double> row_avg_play;    // empirical distribution of realized i_t
  std::vector<double> col_avg_play;    // empirical distribution of realized j_t
  double value_estimate = 0.0;         // average realized cost per round
  double duality_gap = 0.0;            // f(row_avg) - h(col_avg) >= 0
  double f_row = 0.0;
  double h_col = 0.0;
  double certified_eps = 0.0;          // achieved gap
};

struct GameTrace {
  std::vector<int> row_actions;
  std::vector<int> col_actions;
  double total_row_cost = 0.0;                 // original matrix scale
  std::vector<double> row_cost_per_action;     // sum_t M(i, j_t) per row i
  std::vector<double> col_reward_per_action;   // sum_t M(i_t, j) per column j
  std::vector<std::vector<double>> sigma_bar;  // average of p_t x q_t
  double row_realized_regret = 0.0;            // cost(ALG) - min_i cost(i)
  double col_realized_regret = 0.0;            // max_j rew(j) - rew(ADV)
};

struct RepeatedGameResult {
  GameTrace trace;
  EquilibriumReport report;
};

// Simultaneous-move repeated zero-sum game. The row player receives costs and
// the column player rewards; with full feedback each sees its entire
// row/column of the realized payoffs.
RepeatedGameResult repeated_game(GamePlayer& row, GamePlayer& col, const GameMatrix& matrix,
                                 int rounds, GameFeedback feedback, RngStream rng);

// Stochastic game: the round matrix M_t is drawn IID from a finite list; the
// equilibrium report is computed against the mean matrix.
struct StochasticGame {
  std::vector<GameMatrix> matrices;
  std::vector<double> probs;

  StochasticGame(std::vector<GameMatrix> matrices_, std::vector<double> probs_);
  GameMatrix mean() const;
};

RepeatedGameResult repeated_stochastic_game(GamePlayer& row, GamePlayer& col,
                                            const StochasticGame& game, int rounds,
                                            GameFeedback feedback, RngStream rng);

// Hedge-vs-Hedge self play with doubling horizons until the duality gap is at
// most `tol` (or the iteration cap is reached; the report then carries the
// best achieved gap as certified_eps).
EquilibriumReport minimax_selfplay(const GameMatrix& matrix, double tol, int max_doublings = 14,
                                   std::uint64_t seed = 1);

// Exact value of a 2x2 game (cross-ratio closed form), for cross-checks.
double value_2x2(const GameMatrix& matrix);

struct CheckResult {
  bool pass = false;
  double worst_margin = 0.0;  // most violated constraint (negative = violation)
};

// max_j M(p, j) <= v_hat + eps and min_i M(i, q) >= v_hat - eps.
CheckResult approx_nash_check(std::span<const double> p, std::span<const double> q,
                              const GameMatrix& matrix, double v_hat, double eps);

// Coarse correlated equilibrium check for a general two-player game given by
// the row player's cost matrix and the column player's reward matrix.
CheckResult cce_check(const std::vector<std::vector<double>>& sigma,
                      const GameMatrix& row_cost, const GameMatrix& col_reward, double eps);

}  // namespace banditlab::games
