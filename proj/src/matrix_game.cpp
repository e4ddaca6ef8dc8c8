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

#include "minimaxpi/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "minimaxpi/errors.hpp"
#include "minimaxpi/lp.hpp"

namespace minimaxpi {

MixedStrategy normalize_strategy(std::vector<double> p) {
  double sum = 0.0;
  for (double& x : p) {
    if (x < -1e-9) {
      throw LPNumericalFailure("strategy entry " + std::to_string(x) + " is negative");
    }
    x = std::max(x, 0.0);
    sum += x;
  }
  if (!(sum > 0.0)) throw LPNumericalFailure("strategy has zero mass");
  for (double& x : p) x /= sum;
  return p;
}

MixedStrategy pure_strategy(std::size_t n, std::size_t i) {
  MixedStrategy u(n, 0.0);
  u.at(i) = 1.0;
  return u;
}

SimplexMinMax min_simplex_max_linear(std::span<const AffineLine> lines) {
  if (lines.empty()) throw std::invalid_argument("min_simplex_max_linear: no lines");
  const std::size_t n = lines.front().coeffs.size();
  if (n == 0) throw std::invalid_argument("min_simplex_max_linear: zero dimension");
  for (const auto& line : lines) {
    if (line.coeffs.size() != n) {
      throw std::invalid_argument("min_simplex_max_linear: ragged coefficient arrays");
    }
  }

  // Single-point simplex: nothing to optimize.
  if (n == 1) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& line : lines) best = std::max(best, line.offset + line.coeffs[0]);
    return {best, {1.0}};
  }

  // On the simplex, offset + c'u = sum_i u_i (offset + c_i). Shifting every
  // entry to at least 1 gives the positive-payoff program
  //   maximize sum y  s.t.  D y <= 1, y >= 0,
  // whose solution normalizes to u* (value 1 / sum y minus the shift). The
  // slack basis is feasible, so no phase one or free variable is needed.
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& line : lines) {
    for (double c : line.coeffs) lowest = std::min(lowest, line.offset + c);
  }
  const double shift = 1.0 - lowest;
  lp::LinearProgram prog;
  prog.objective.assign(n, -1.0);
  double magnitude = 1.0;
  for (const auto& line : lines) {
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
      row[i] = line.offset + line.coeffs[i] + shift;
      magnitude = std::max(magnitude, row[i]);
    }
    prog.add_row(std::move(row), lp::Sense::kLessEqual, 1.0);
  }
  lp::SimplexOptions options;
  options.optimality_tol = 1e-13 * magnitude;
  options.pivot_tol = 1e-11 * magnitude;
  const lp::Solution sol = lp::solve(prog, options);
  if (!(-sol.objective > 0.0)) {
    throw LPNumericalFailure("min_simplex_max_linear: degenerate positive-payoff program");
  }
  SimplexMinMax out;
  out.u_star = normalize_strategy(sol.x);
  // Re-evaluate the objective at the cleaned strategy.
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& line : lines) {
    double v = line.offset;
    for (std::size_t i = 0; i < n; ++i) v += out.u_star[i] * line.coeffs[i];
    best = std::max(best, v);
  }
  out.value = best;
  return out;
}

SimplexMinMax min_simplex_max_linear(std::span<const std::vector<double>> coeffs) {
  std::vector<AffineLine> lines;
  lines.reserve(coeffs.size());
  for (const auto& c : coeffs) lines.push_back({0.0, c});
  return min_simplex_max_linear(std::span<const AffineLine>(lines));
}

SaddleSolution solve_matrix_game(const PayoffMatrix& m, double tol) {
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  if (rows == 0 || cols == 0) throw std::invalid_argument("solve_matrix_game: empty matrix");
  if (!m.allFinite()) throw std::invalid_argument("solve_matrix_game: non-finite payoff");

  // Minimizer: lines are the columns of M.
  std::vector<AffineLine> columns(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    columns[j].coeffs.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) columns[j].coeffs[i] = m(i, j);
  }
  // Maximizer: max_v min_i M(i,:) v = -min_v max_i (-M(i,:)) v.
  std::vector<AffineLine> negated_rows(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    negated_rows[i].coeffs.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) negated_rows[i].coeffs[j] = -m(i, j);
  }
  const SimplexMinMax primal = min_simplex_max_linear(std::span<const AffineLine>(columns));
  const SimplexMinMax dual = min_simplex_max_linear(std::span<const AffineLine>(negated_rows));

  SaddleSolution out;
  out.value = primal.value;
  out.dual_value = -dual.value;
  out.u_star = primal.u_star;
  out.v_star = dual.u_star;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (std::abs(out.value - out.dual_value) > tol * scale) {
    throw LPNumericalFailure("solve_matrix_game: duality gap " +
                             std::to_string(out.value - out.dual_value));
  }
  return out;
}

std::pair<double, std::size_t> best_response_value(const PayoffMatrix& m,
                                                   std::span<const double> u) {
  if (u.size() != static_cast<std::size_t>(m.rows())) {
    throw std::invalid_argument("best_response_value: strategy length mismatch");
  }
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) v += u[static_cast<std::size_t>(i)] * m(i, j);
    if (v > best) {
      best = v;
      arg = static_cast<std::size_t>(j);
    }
  }
  return {best, arg};
}

std::pair<double, std::size_t> best_response_row(const PayoffMatrix& m,
                                                 std::span<const double> v) {
  if (v.size() != static_cast<std::size_t>(m.cols())) {
    throw std::invalid_argument("best_response_row: strategy length mismatch");
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += m(i, j) * v[static_cast<std::size_t>(j)];
    if (s < best) {
      best = s;
      arg = static_cast<std::size_t>(i);
    }
  }
  return {best, arg};
}

}  // namespace minimaxpi
