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

#include "minimaxpi/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "minimaxpi/errors.hpp"

namespace minimaxpi {
namespace {

constexpr double kProbTol = 1e-10;

std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

MixedStrategy random_mixed(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  for (double& x : p) x = e(rng);
  return normalize_strategy(std::move(p));
}

}  // namespace

WeightedSpace DiscountedMarkovGame::space() const {
  return weights.empty() ? WeightedSpace(states()) : WeightedSpace(weights);
}

void DiscountedMarkovGame::validate() const {
  const std::size_t nx = states();
  if (nx == 0) throw ValidationError("states", "at least one state is required");
  const Eigen::Index n = rows();
  const Eigen::Index m = cols();
  if (n == 0 || m == 0) throw ValidationError("states[0].payoff", "empty payoff matrix");
  if (!weights.empty() && weights.size() != nx) {
    throw ValidationError("weights", "expected one weight per state");
  }
  (void)space();  // weight positivity
  if (terminating) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha", "must lie in (0, 1]");
  } else if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha", "must lie in (0, 1)");
  }
  if (transition.size() != nx) throw ValidationError("transitions", "expected one per state");
  for (std::size_t x = 0; x < nx; ++x) {
    const std::string base = idx("states", x);
    if (payoff[x].rows() != n || payoff[x].cols() != m) {
      throw ValidationError(base + ".payoff", "all payoff matrices must share one shape");
    }
    if (!payoff[x].allFinite()) throw ValidationError(base + ".payoff", "non-finite entry");
    if (transition[x].size() != nx) {
      throw ValidationError(base + ".transitions", "expected one matrix per next state");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        double total = 0.0;
        for (std::size_t y = 0; y < nx; ++y) {
          const PayoffMatrix& q = transition[x][y];
          if (q.rows() != n || q.cols() != m) {
            throw ValidationError(idx(base + ".transitions", y), "shape mismatch");
          }
          const double p = q(i, j);
          if (!(p >= 0.0) || !std::isfinite(p)) {
            throw ValidationError(idx(base + ".transitions", y), "negative probability");
          }
          total += p;
        }
        const std::string where = base + ".transitions[" + std::to_string(i) + "][" +
                                  std::to_string(j) + "]";
        if (terminating ? total > 1.0 + kProbTol : std::abs(total - 1.0) > kProbTol) {
          throw ValidationError(where, terminating ? "row sum exceeds one"
                                                   : "row does not sum to one");
        }
      }
    }
  }
  const double rho = modulus();
  if (!(rho < 1.0)) {
    if (terminating) {
      throw NonContractive("terminating game has modulus " + std::to_string(rho) +
                           " >= 1; some pair of actions never terminates");
    }
    throw ValidationError("weights", "weighted modulus " + std::to_string(rho) + " >= 1");
  }
}

double DiscountedMarkovGame::modulus() const {
  const WeightedSpace sp = space();
  double worst = 0.0;
  for (std::size_t x = 0; x < states(); ++x) {
    for (Eigen::Index i = 0; i < rows(); ++i) {
      for (Eigen::Index j = 0; j < cols(); ++j) {
        double s = 0.0;
        for (std::size_t y = 0; y < states(); ++y) s += transition[x][y](i, j) * sp.weight(y);
        worst = std::max(worst, s / sp.weight(x));
      }
    }
  }
  return alpha * worst;
}

PayoffMatrix DiscountedMarkovGame::stage_matrix(std::size_t x, std::span<const double> j,
                                                double scale) const {
  PayoffMatrix out = payoff[x];
  for (std::size_t y = 0; y < states(); ++y) {
    if (j[y] != 0.0) out += (scale * j[y]) * transition[x][y];
  }
  return out;
}

double markov_H(const DiscountedMarkovGame& game, std::size_t x, std::span<const double> u,
                std::span<const double> v, std::span<const double> j) {
  const PayoffMatrix m = game.stage_matrix(x, j, game.alpha);
  const Eigen::Map<const Eigen::VectorXd> uu(u.data(), static_cast<Eigen::Index>(u.size()));
  const Eigen::Map<const Eigen::VectorXd> vv(v.data(), static_cast<Eigen::Index>(v.size()));
  return uu.dot(m * vv);
}

std::vector<double> transition_probs(const DiscountedMarkovGame& game, std::size_t x,
                                     std::span<const double> u, std::span<const double> v) {
  const Eigen::Map<const Eigen::VectorXd> uu(u.data(), static_cast<Eigen::Index>(u.size()));
  const Eigen::Map<const Eigen::VectorXd> vv(v.data(), static_cast<Eigen::Index>(v.size()));
  std::vector<double> out(game.states());
  for (std::size_t y = 0; y < game.states(); ++y) out[y] = uu.dot(game.transition[x][y] * vv);
  return out;
}

ValueTable shapley_operator(const DiscountedMarkovGame& game, std::span<const double> j) {
  ValueTable out(game.states());
  for (std::size_t x = 0; x < game.states(); ++x) {
    out[x] = solve_matrix_game(game.stage_matrix(x, j, game.alpha)).value;
  }
  return out;
}

double game_bellman_residual(const DiscountedMarkovGame& game, std::span<const double> j) {
  return game.space().distance(j, shapley_operator(game, j));
}

ShapleyResult shapley_value_iteration(const DiscountedMarkovGame& game, double tol,
                                      std::size_t max_iters, ValueTable j0) {
  game.validate();
  const WeightedSpace sp = game.space();
  ShapleyResult out;
  out.J = j0.empty() ? ValueTable(game.states(), 0.0) : std::move(j0);
  out.mu.resize(game.states());
  out.nu.resize(game.states());
  for (std::size_t k = 0; k < max_iters; ++k) {
    ValueTable next(game.states());
    for (std::size_t x = 0; x < game.states(); ++x) {
      SaddleSolution s = solve_matrix_game(game.stage_matrix(x, out.J, game.alpha));
      next[x] = s.value;
      out.mu[x] = std::move(s.u_star);
      out.nu[x] = std::move(s.v_star);
    }
    const double change = sp.distance(out.J, next);
    out.residuals.push_back(change);
    out.J = std::move(next);
    if (change <= tol) {
      out.iterations = k + 1;
      return out;
    }
  }
  throw MaxItersExceeded("shapley_value_iteration: no convergence in " +
                         std::to_string(max_iters) + " sweeps");
}

double estimate_modulus(const DiscountedMarkovGame& game, std::size_t samples,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  std::bernoulli_distribution coin(0.5);
  const WeightedSpace sp = game.space();
  const std::size_t nx = game.states();
  const auto n = static_cast<std::size_t>(game.rows());
  const auto m = static_cast<std::size_t>(game.cols());
  double worst = 0.0;
  std::size_t usable = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    ValueTable a(nx);
    ValueTable b(nx);
    const double c = std::abs(dist(rng)) + 0.01;
    for (std::size_t x = 0; x < nx; ++x) {
      a[x] = dist(rng) * sp.weight(x);
      b[x] = s % 2 == 0 ? dist(rng) * sp.weight(x)
                        : a[x] + (coin(rng) ? c : -c) * sp.weight(x);
    }
    const double before = sp.distance(a, b);
    if (!(before > 0.0)) continue;
    ++usable;
    double after = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      const MixedStrategy u = random_mixed(n, rng);
      const MixedStrategy v = random_mixed(m, rng);
      after = std::max(after, std::abs(markov_H(game, x, u, v, a) - markov_H(game, x, u, v, b)) /
                                  sp.weight(x));
    }
    worst = std::max(worst, after / before);
  }
  if (usable == 0) throw DegeneratePair("estimate_modulus: every sampled pair had zero distance");
  return worst;
}

MonotoneCheck check_monotone(const DiscountedMarkovGame& game, std::size_t samples,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  std::uniform_real_distribution<double> bump(0.0, 5.0);
  const std::size_t nx = game.states();
  const auto n = static_cast<std::size_t>(game.rows());
  const auto m = static_cast<std::size_t>(game.cols());
  for (std::size_t s = 0; s < samples; ++s) {
    ValueTable lo(nx);
    ValueTable hi(nx);
    for (std::size_t x = 0; x < nx; ++x) {
      lo[x] = dist(rng);
      hi[x] = lo[x] + bump(rng);
    }
    for (std::size_t x = 0; x < nx; ++x) {
      const MixedStrategy u = random_mixed(n, rng);
      const MixedStrategy v = random_mixed(m, rng);
      const double a = markov_H(game, x, u, v, lo);
      const double b = markov_H(game, x, u, v, hi);
      if (a > b + 1e-12 * (1.0 + std::abs(b))) {
        std::ostringstream msg;
        msg << "sample " << s << ": H at x=" << x << " gave " << a << " > " << b
            << " for a larger J";
        return {false, msg.str()};
      }
    }
  }
  return {};
}

double default_beta(double modulus) {
  if (!(modulus > 0.0 && modulus < 1.0)) {
    throw InvalidBeta("default_beta: modulus " + std::to_string(modulus) + " not in (0, 1)");
  }
  return 1.0 / std::sqrt(modulus);
}

void validate_beta(double modulus, double beta) {
  if (!(beta > 1.0)) throw InvalidBeta("beta " + std::to_string(beta) + " must exceed 1");
  if (!(modulus * beta < 1.0)) {
    throw InvalidBeta("beta " + std::to_string(beta) + " times modulus " +
                      std::to_string(modulus) + " must be below 1");
  }
}

double LineSet::eval(std::span<const double> u) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : lines) best = std::max(best, dot(u, c));
  return best;
}

namespace {

// sup_u (f(u) - g(u)) = max_k -min_u max_l u'(g_l - f_k).
double sup_difference(const LineSet& f, const LineSet& g) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> shifted(g.lines.size());
  for (const auto& fk : f.lines) {
    for (std::size_t l = 0; l < g.lines.size(); ++l) {
      shifted[l].resize(fk.size());
      for (std::size_t i = 0; i < fk.size(); ++i) shifted[l][i] = g.lines[l][i] - fk[i];
    }
    const SimplexMinMax r = min_simplex_max_linear(std::span<const std::vector<double>>(shifted));
    best = std::max(best, -r.value);
  }
  return best;
}

}  // namespace

double sup_distance(const LineSet& f, const LineSet& g) {
  if (f.lines.empty() || g.lines.empty()) throw std::invalid_argument("sup_distance: empty set");
  if (f == g) return 0.0;
  if (f.lines.size() == 1 && g.lines.size() == 1) {
    // Linear difference: extreme at a vertex.
    double out = 0.0;
    for (std::size_t i = 0; i < f.lines[0].size(); ++i) {
      out = std::max(out, std::abs(f.lines[0][i] - g.lines[0][i]));
    }
    return out;
  }
  return std::max({0.0, sup_difference(f, g), sup_difference(g, f)});
}

MarkovSeparated::MarkovSeparated(DiscountedMarkovGame game, double beta)
    : game_(std::move(game)), beta_(beta) {
  game_.validate();
  space_ = game_.space();
  validate_beta(game_.modulus(), beta_);
}

double MarkovSeparated::modulus() const {
  return std::max(1.0 / beta_, game_.modulus() * beta_);
}

MarkovSeparated::Action1 MarkovSeparated::initial_action1(std::size_t) const {
  return pure_strategy(static_cast<std::size_t>(game_.rows()), 0);
}

LineSet MarkovSeparated::zero2(std::size_t) const {
  return LineSet{{std::vector<double>(static_cast<std::size_t>(game_.rows()), 0.0)}};
}

double MarkovSeparated::h1(std::size_t x, const Action1& u, const Table2& j2) const {
  return j2[x].eval(u) / beta_;
}

LineSet MarkovSeparated::h2(std::size_t x, Action2 j, const Table1& j1) const {
  const double scale = game_.alpha * beta_;
  const PayoffMatrix& a = game_.payoff[x];
  std::vector<double> col(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) col[static_cast<std::size_t>(i)] = a(i, j);
  for (std::size_t y = 0; y < game_.states(); ++y) {
    if (j1[y] == 0.0) continue;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      col[static_cast<std::size_t>(i)] += scale * j1[y] * game_.transition[x][y](i, j);
    }
  }
  return LineSet{{std::move(col)}};
}

Choice<MarkovSeparated::Action1, double> MarkovSeparated::minimize1(std::size_t x,
                                                                   const Table2& j2) const {
  const LineSet& f = j2[x];
  if (f.lines.size() == 1) {
    const auto& c = f.lines[0];
    const auto it = std::min_element(c.begin(), c.end());
    return {*it / beta_, pure_strategy(c.size(), static_cast<std::size_t>(it - c.begin()))};
  }
  SimplexMinMax r = min_simplex_max_linear(std::span<const std::vector<double>>(f.lines));
  return {r.value / beta_, std::move(r.u_star)};
}

Choice<MarkovSeparated::Action2, LineSet> MarkovSeparated::maximize2(std::size_t x,
                                                                    const Table1& j1,
                                                                    const Action1* hint) const {
  const double scale = game_.alpha * beta_;
  const PayoffMatrix m = game_.stage_matrix(x, j1, scale);
  LineSet all;
  all.lines.resize(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    auto& c = all.lines[static_cast<std::size_t>(j)];
    c.resize(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) c[static_cast<std::size_t>(i)] = m(i, j);
  }
  std::size_t arg = 0;
  if (hint != nullptr) arg = best_response_value(m, *hint).second;
  return {std::move(all), arg};
}

LineSet MarkovSeparated::upper2(const LineSet& v, const LineSet& j) const {
  LineSet out = v;
  for (const auto& c : j.lines) {
    if (std::find(out.lines.begin(), out.lines.end(), c) == out.lines.end()) {
      out.lines.push_back(c);
    }
  }
  return out;
}

double MarkovSeparated::distance1(const Table1& a, const Table1& b) const {
  return space_.distance(a, b);
}

double MarkovSeparated::distance2(const Table2& a, const Table2& b) const {
  double out = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    out = std::max(out, sup_distance(a[x], b[x]) / space_.weight(x));
  }
  return out;
}

ValueTable MarkovSeparated::game_values(const Table1& j1) const {
  ValueTable out = j1;
  for (double& v : out) v *= beta_;
  return out;
}

MarkovSeparated separate_markov_game(const DiscountedMarkovGame& game, double beta) {
  game.validate();
  if (beta <= 0.0) beta = default_beta(game.modulus());
  return MarkovSeparated(game, beta);
}

SeparatedProblem separate_markov_game_finite(const DiscountedMarkovGame& game, double beta,
                                             std::vector<MixedStrategy> strategies) {
  game.validate();
  if (beta <= 0.0) beta = default_beta(game.modulus());
  validate_beta(game.modulus(), beta);
  const auto n = static_cast<std::size_t>(game.rows());
  const auto m = static_cast<std::size_t>(game.cols());
  if (strategies.empty()) {
    for (std::size_t i = 0; i < n; ++i) strategies.push_back(pure_strategy(n, i));
    if (n > 1) strategies.push_back(MixedStrategy(n, 1.0 / static_cast<double>(n)));
  }
  for (auto& s : strategies) {
    if (s.size() != n) throw std::invalid_argument("separate_markov_game_finite: bad strategy");
    s = normalize_strategy(std::move(s));
  }
  const std::size_t ns = strategies.size();
  const std::size_t nx = game.states();
  const WeightedSpace sp = game.space();
  std::vector<double> w2(nx * ns);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t s = 0; s < ns; ++s) w2[x * ns + s] = sp.weight(x);
  }
  const double scale = game.alpha * beta;

  SeparatedProblem p;
  p.space1 = sp;
  p.space2 = WeightedSpace(std::move(w2));
  p.actions1.assign(nx, ns);
  p.actions2.assign(nx * ns, m);
  p.alpha = std::max(1.0 / beta, game.modulus() * beta);
  p.eval1 = [ns, beta](std::size_t x, std::size_t s, std::span<const double> j2) {
    return j2[x * ns + s] / beta;
  };
  p.eval2 = [game, strategies, ns, scale](std::size_t x2, std::size_t j,
                                          std::span<const double> j1) {
    const std::size_t x = x2 / ns;
    const MixedStrategy& u = strategies[x2 % ns];
    double out = 0.0;
    for (Eigen::Index i = 0; i < game.rows(); ++i) {
      double c = game.payoff[x](i, static_cast<Eigen::Index>(j));
      for (std::size_t y = 0; y < game.states(); ++y) {
        c += scale * j1[y] * game.transition[x][y](i, static_cast<Eigen::Index>(j));
      }
      out += u[static_cast<std::size_t>(i)] * c;
    }
    return out;
  };
  p.reach1 = [ns](std::size_t x, std::size_t s) { return std::vector<std::size_t>{x * ns + s}; };
  p.reach2 = [game, ns](std::size_t x2, std::size_t j) {
    std::vector<std::size_t> out;
    const std::size_t x = x2 / ns;
    for (std::size_t y = 0; y < game.states(); ++y) {
      if (game.transition[x][y].col(static_cast<Eigen::Index>(j)).maxCoeff() > 0.0) {
        out.push_back(y);
      }
    }
    return out;
  };
  return p;
}

void SeparatedMinimaxModel::validate() const {
  if (min_moves.size() != space1.size()) {
    throw ValidationError("min_actions", "expected one entry per state of X1");
  }
  if (max_moves.size() != space2.size()) {
    throw ValidationError("max_actions", "expected one entry per state of X2");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha", "must lie in (0, 1)");
  for (std::size_t x = 0; x < min_moves.size(); ++x) {
    if (min_moves[x].empty()) throw ValidationError(idx("min_actions", x), "empty action set");
    for (std::size_t u = 0; u < min_moves[x].size(); ++u) {
      const SeparatedMinimaxModel::Move& mv = min_moves[x][u];
      if (mv.next >= space2.size() || !std::isfinite(mv.cost)) {
        throw ValidationError(idx(idx("min_actions", x), u), "bad next state or cost");
      }
    }
  }
  for (std::size_t x = 0; x < max_moves.size(); ++x) {
    if (max_moves[x].empty()) throw ValidationError(idx("max_actions", x), "empty action set");
    for (std::size_t v = 0; v < max_moves[x].size(); ++v) {
      const SeparatedMinimaxModel::Move& mv = max_moves[x][v];
      if (mv.next >= space1.size() || !std::isfinite(mv.cost)) {
        throw ValidationError(idx(idx("max_actions", x), v), "bad next state or cost");
      }
    }
  }
}

SeparatedProblem to_separated_problem(const SeparatedMinimaxModel& model) {
  model.validate();
  SeparatedProblem p;
  p.space1 = model.space1;
  p.space2 = model.space2;
  double ratio = 0.0;
  for (std::size_t x = 0; x < model.min_moves.size(); ++x) {
    p.actions1.push_back(model.min_moves[x].size());
    for (const auto& mv : model.min_moves[x]) {
      ratio = std::max(ratio, model.space2.weight(mv.next) / model.space1.weight(x));
    }
  }
  for (std::size_t x = 0; x < model.max_moves.size(); ++x) {
    p.actions2.push_back(model.max_moves[x].size());
    for (const auto& mv : model.max_moves[x]) {
      ratio = std::max(ratio, model.space1.weight(mv.next) / model.space2.weight(x));
    }
  }
  p.alpha = model.alpha * ratio;
  if (!(p.alpha < 1.0)) {
    throw ValidationError("weights", "weighted modulus " + std::to_string(p.alpha) + " >= 1");
  }
  const auto min_moves = model.min_moves;
  const auto max_moves = model.max_moves;
  const double alpha = model.alpha;
  p.eval1 = [min_moves, alpha](std::size_t x, std::size_t u, std::span<const double> j2) {
    const SeparatedMinimaxModel::Move& mv = min_moves[x][u];
    return mv.cost + alpha * j2[mv.next];
  };
  p.eval2 = [max_moves, alpha](std::size_t x, std::size_t v, std::span<const double> j1) {
    const SeparatedMinimaxModel::Move& mv = max_moves[x][v];
    return mv.cost + alpha * j1[mv.next];
  };
  p.reach1 = [min_moves](std::size_t x, std::size_t u) {
    return std::vector<std::size_t>{min_moves[x][u].next};
  };
  p.reach2 = [max_moves](std::size_t x, std::size_t v) {
    return std::vector<std::size_t>{max_moves[x][v].next};
  };
  return p;
}

void MinimaxControlModel::validate() const {
  const std::size_t nx = states();
  if (nx == 0) throw ValidationError("states", "at least one state is required");
  if (space.size() != nx) throw ValidationError("weights", "expected one weight per state");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha", "must lie in (0, 1)");
  for (std::size_t x = 0; x < nx; ++x) {
    const std::string bx = idx("states", x);
    if (transitions[x].empty()) throw ValidationError(bx + ".controls", "empty control set");
    for (std::size_t u = 0; u < transitions[x].size(); ++u) {
      const std::string bu = idx(bx + ".controls", u);
      if (transitions[x][u].empty()) throw ValidationError(bu, "empty disturbance set");
      for (std::size_t v = 0; v < transitions[x][u].size(); ++v) {
        const std::string bv = idx(bu, v);
        const auto& outcomes = transitions[x][u][v];
        if (outcomes.empty()) throw ValidationError(bv, "no outcomes");
        double total = 0.0;
        for (const auto& o : outcomes) {
          if (!(o.probability >= 0.0) || o.next >= nx || !std::isfinite(o.cost)) {
            throw ValidationError(bv, "bad probability, next state or cost");
          }
          total += o.probability;
        }
        if (std::abs(total - 1.0) > kProbTol) {
          throw ValidationError(bv, "outcome probabilities do not sum to one");
        }
      }
    }
  }
}

ControlSeparation to_separated_problem(const MinimaxControlModel& model, double beta) {
  model.validate();
  const std::size_t nx = model.states();
  double ratio = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (const auto& per_u : model.transitions[x]) {
      for (const auto& outcomes : per_u) {
        double s = 0.0;
        for (const auto& o : outcomes) s += o.probability * model.space.weight(o.next);
        ratio = std::max(ratio, s / model.space.weight(x));
      }
    }
  }
  const double rho = model.alpha * ratio;
  if (!(rho < 1.0)) {
    throw ValidationError("weights", "weighted modulus " + std::to_string(rho) + " >= 1");
  }
  if (beta <= 0.0) beta = default_beta(rho);
  validate_beta(rho, beta);

  ControlSeparation out;
  out.beta = beta;
  out.pair_index.resize(nx);
  std::vector<double> w2;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t u = 0; u < model.transitions[x].size(); ++u) {
      out.pair_index[x].push_back(out.pairs.size());
      out.pairs.emplace_back(x, u);
      w2.push_back(model.space.weight(x));
    }
  }
  SeparatedProblem& p = out.problem;
  p.space1 = model.space;
  p.space2 = WeightedSpace(std::move(w2));
  for (std::size_t x = 0; x < nx; ++x) p.actions1.push_back(model.transitions[x].size());
  for (const auto& [x, u] : out.pairs) p.actions2.push_back(model.transitions[x][u].size());
  p.alpha = std::max(1.0 / beta, rho * beta);
  const auto index = out.pair_index;
  const auto pairs = out.pairs;
  const auto transitions = model.transitions;
  const double scale = model.alpha * beta;
  p.eval1 = [index, beta](std::size_t x, std::size_t u, std::span<const double> j2) {
    return j2[index[x][u]] / beta;
  };
  p.eval2 = [pairs, transitions, scale](std::size_t x2, std::size_t v,
                                        std::span<const double> j1) {
    const auto [x, u] = pairs[x2];
    double out = 0.0;
    for (const auto& o : transitions[x][u][v]) out += o.probability * (o.cost + scale * j1[o.next]);
    return out;
  };
  p.reach1 = [index](std::size_t x, std::size_t u) {
    return std::vector<std::size_t>{index[x][u]};
  };
  p.reach2 = [pairs, transitions](std::size_t x2, std::size_t v) {
    const auto [x, u] = pairs[x2];
    std::vector<std::size_t> out;
    for (const auto& o : transitions[x][u][v]) out.push_back(o.next);
    return out;
  };
  return out;
}

}  // namespace minimaxpi
