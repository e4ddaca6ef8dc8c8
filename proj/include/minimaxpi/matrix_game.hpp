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

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace minimaxpi {

/// Row player minimizes, column player maximizes u' M v.
using PayoffMatrix = Eigen::MatrixXd;

/// Probability vector. Produced strategies are clamped at zero and
/// renormalized to sum to one.
using MixedStrategy = std::vector<double>;

struct SaddleSolution {
  double value = 0.0;
  MixedStrategy u_star;  // rows (minimizer)
  MixedStrategy v_star;  // columns (maximizer)
  /// max_v min_u value obtained from the maximizer's LP; equals `value` up to
  /// the duality gap.
  double dual_value = 0.0;
};

/// offset + u' coeffs, a linear function on the probability simplex.
struct AffineLine {
  double offset = 0.0;
  std::vector<double> coeffs;
};

struct SimplexMinMax {
  double value = 0.0;
  MixedStrategy u_star;
};

/// Clamps entries at zero (anything below -1e-9 is rejected) and rescales to
/// unit sum.
MixedStrategy normalize_strategy(std::vector<double> p);

/// Pure strategy e_i of length n.
MixedStrategy pure_strategy(std::size_t n, std::size_t i);

/// Minimizes max_k (offset_k + u' coeffs_k) over the probability simplex via
/// the epigraph LP. Throws LPNumericalFailure on a failed solve and
/// std::invalid_argument on empty or ragged input.
SimplexMinMax min_simplex_max_linear(std::span<const AffineLine> lines);

/// Same as above for lines through the origin given as coefficient vectors.
SimplexMinMax min_simplex_max_linear(std::span<const std::vector<double>> coeffs);

/// Solves min_u max_v u' M v exactly with two LPs (one per player). Throws
/// LPNumericalFailure when the two optimal values differ by more than `tol`
/// (scaled by the payoff magnitude).
SaddleSolution solve_matrix_game(const PayoffMatrix& m, double tol = 1e-8);

/// max_j u' M(:, j) and the lowest attaining column index.
std::pair<double, std::size_t> best_response_value(const PayoffMatrix& m,
                                                   std::span<const double> u);

/// min_i M(i, :) v and the lowest attaining row index.
std::pair<double, std::size_t> best_response_row(const PayoffMatrix& m,
                                                 std::span<const double> v);

}  // namespace minimaxpi
