// Copyright 2026 The minimaxpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "minimaxpi/core.hpp"
#include "minimaxpi/matrix_game.hpp"

namespace minimaxpi {

/// Two-player zero-sum Markov game with finite states and n x m stage
/// matrices. At state x with mixed strategies (u, v) the stage cost is
/// u' A(x) v and the next state is y with probability u' Q_xy v.
///
/// Discounted games have stochastic rows (sum_y q = 1) and alpha < 1.
/// Terminating games allow substochastic rows and alpha <= 1; the missing mass
/// goes to a cost-free absorbing state that is not represented.
struct DiscountedMarkovGame {
  std::vector<PayoffMatrix> payoff;                  // A(x)
  std::vector<std::vector<PayoffMatrix>> transition;  // transition[x][y](i, j) = q_xy(i, j)
  double alpha = 0.9;
  bool terminating = false;
  std::vector<double> weights;  // empty means unit weights

  std::size_t states() const { return payoff.size(); }
  Eigen::Index rows() const { return payoff.empty() ? 0 : payoff.front().rows(); }
  Eigen::Index cols() const { return payoff.empty() ? 0 : payoff.front().cols(); }
  WeightedSpace space() const;

  /// Shape, probability and contraction checks. Throws ValidationError naming
  /// the offending field, or NonContractive when a terminating game fails the
  /// contraction screen.
  void validate() const;

  /// alpha * max_{x,i,j} sum_y q_xy(i,j) xi(y) / xi(x): the modulus of the
  /// Shapley operator and of every T_{mu,nu} in the weighted sup-norm.
  double modulus() const;

  /// A(x) + scale * sum_y Q_xy J(y).
  PayoffMatrix stage_matrix(std::size_t x, std::span<const double> j, double scale) const;
};

/// u' (A(x) + alpha sum_y Q_xy J(y)) v.
double markov_H(const DiscountedMarkovGame& game, std::size_t x, std::span<const double> u,
                std::span<const double> v, std::span<const double> j);

/// Distribution over next states, u' Q_xy v for each y.
std::vector<double> transition_probs(const DiscountedMarkovGame& game, std::size_t x,
                                     std::span<const double> u, std::span<const double> v);

/// (T J)(x) = val(A(x) + alpha sum_y Q_xy J(y)).
ValueTable shapley_operator(const DiscountedMarkovGame& game, std::span<const double> j);

/// ||J - T J|| for the Shapley operator.
double game_bellman_residual(const DiscountedMarkovGame& game, std::span<const double> j);

struct ShapleyResult {
  ValueTable J;
  std::vector<MixedStrategy> mu;
  std::vector<MixedStrategy> nu;
  std::size_t iterations = 0;
  std::vector<double> residuals;
};

/// Shapley value iteration J <- T J from `j0` (zeros when empty) until the
/// change is at most `tol`. Throws MaxItersExceeded.
ShapleyResult shapley_value_iteration(const DiscountedMarkovGame& game, double tol = 1e-8,
                                      std::size_t max_iters = 1'000'000, ValueTable j0 = {});

/// Modulus estimate over random mixed policy pairs and random value tables.
double estimate_modulus(const DiscountedMarkovGame& game, std::size_t samples,
                        std::uint64_t seed);

/// Monotonicity of J -> u'(A + alpha sum Q J)v under random mixed policies.
MonotoneCheck check_monotone(const DiscountedMarkovGame& game, std::size_t samples,
                             std::uint64_t seed);

/// 1 / sqrt(modulus), the default scaling factor.
double default_beta(double modulus);

/// Requires beta > 1 and modulus * beta < 1; throws InvalidBeta otherwise.
void validate_beta(double modulus, double beta);

/// Convex piecewise-linear function u -> max_k u' lines[k] on the simplex.
struct LineSet {
  std::vector<std::vector<double>> lines;

  double eval(std::span<const double> u) const;
  bool operator==(const LineSet&) const = default;
};

/// sup_u |f(u) - g(u)| over the probability simplex, computed exactly with
/// one small LP per line.
double sup_distance(const LineSet& f, const LineSet& g);

/// Separated reformulation of a Markov game with scaling beta and mixed
/// minimizer strategies. X1 = X and X2 = pairs (x, u) with u in the simplex;
/// a table over X2 holds, per x, the function u -> J2(x, u), which is a
/// LineSet for every table the algorithms produce.
///
///   H1(x, u, J2) = J2(x, u) / beta
///   H2((x, u), j, J1) = u' (A(x) + alpha beta sum_y Q_xy J1(y)) e_j
///
/// The fixed point satisfies beta * J1* = J*. A maximizer policy picks one
/// column per x; improvement picks the best response to the minimizer's
/// current strategy at x.
class MarkovSeparated {
 public:
  using Action1 = MixedStrategy;
  using Action2 = std::size_t;
  using Value2 = LineSet;
  using Table1 = ValueTable;
  using Table2 = std::vector<LineSet>;
  static constexpr bool kColumnPolicy2 = true;

  MarkovSeparated(DiscountedMarkovGame game, double beta);

  const DiscountedMarkovGame& game() const { return game_; }
  double beta() const { return beta_; }

  std::size_t size1() const { return game_.states(); }
  std::size_t size2() const { return game_.states(); }
  double modulus() const;

  Action1 initial_action1(std::size_t) const;
  Action2 initial_action2(std::size_t) const { return 0; }
  Value2 zero2(std::size_t) const;

  double h1(std::size_t x, const Action1& u, const Table2& j2) const;
  Value2 h2(std::size_t x, Action2 j, const Table1& j1) const;
  Choice<Action1, double> minimize1(std::size_t x, const Table2& j2) const;
  Choice<Action2, Value2> maximize2(std::size_t x, const Table1& j1, const Action1* hint) const;
  const Action1* hint_for(std::size_t x, const std::vector<Action1>& mu) const { return &mu[x]; }

  Value2 upper2(const Value2& v, const Value2& j) const;
  double distance1(const Table1& a, const Table1& b) const;
  double distance2(const Table2& a, const Table2& b) const;

  /// beta * J1, the game value estimate.
  ValueTable game_values(const Table1& j1) const;

 private:
  DiscountedMarkovGame game_;
  WeightedSpace space_;
  double beta_;
};

/// Validates beta (default_beta(modulus) when beta <= 0) and builds the
/// implicit reformulation.
MarkovSeparated separate_markov_game(const DiscountedMarkovGame& game, double beta = 0.0);

/// Finite restriction of the reformulation: X2 = X x strategies, with the
/// minimizer choosing among `strategies` (pure strategies plus the uniform
/// one when empty). X2 index of (x, s) is x * |strategies| + s.
SeparatedProblem separate_markov_game_finite(const DiscountedMarkovGame& game, double beta,
                                             std::vector<MixedStrategy> strategies = {});

/// Deterministic separated minimax model: the minimizer at x1 moves to
/// next2 in X2 at cost g1, the maximizer at x2 moves to next1 in X1 at cost
/// g2.
///   H1(x1, u, J2) = g1(x1, u) + alpha J2(f1(x1, u))
///   H2(x2, v, J1) = g2(x2, v) + alpha J1(f2(x2, v))
struct SeparatedMinimaxModel {
  struct Move {
    std::size_t next = 0;
    double cost = 0.0;
  };
  WeightedSpace space1;
  WeightedSpace space2;
  std::vector<std::vector<Move>> min_moves;  // per x1, per u
  std::vector<std::vector<Move>> max_moves;  // per x2, per v
  double alpha = 0.9;

  void validate() const;
};

SeparatedProblem to_separated_problem(const SeparatedMinimaxModel& model);

/// Sequential minimax control: at x the minimizer picks u, then the
/// maximizer picks v, then (next, cost) is drawn from a finite distribution.
struct MinimaxControlModel {
  struct Outcome {
    double probability = 1.0;
    std::size_t next = 0;
    double cost = 0.0;
  };
  WeightedSpace space;
  /// transitions[x][u][v] = outcome distribution.
  std::vector<std::vector<std::vector<std::vector<Outcome>>>> transitions;
  double alpha = 0.9;

  std::size_t states() const { return transitions.size(); }
  void validate() const;
};

/// Reformulation with X1 = X and X2 = (x, u) pairs:
///   H1(x, u, J2) = J2(x, u) / beta
///   H2((x, u), v, J1) = E[g + alpha beta J1(next)]
/// `pair_index[x][u]` gives the X2 index of (x, u).
struct ControlSeparation {
  SeparatedProblem problem;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<std::size_t>> pair_index;
  double beta = 0.0;
};

/// beta <= 0 selects default_beta(alpha).
ControlSeparation to_separated_problem(const MinimaxControlModel& model, double beta = 0.0);

}  // namespace minimaxpi
