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
#include <vector>

namespace minimaxpi::lp {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

/// minimize  objective' x   subject to  rows[i]' x (sense[i]) rhs[i],  x >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<Sense> senses;
  std::vector<double> rhs;

  void add_row(std::vector<double> coeffs, Sense sense, double b) {
    rows.push_back(std::move(coeffs));
    senses.push_back(sense);
    rhs.push_back(b);
  }
};

struct Solution {
  std::vector<double> x;
  double objective = 0.0;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  /// Entries with magnitude below this are treated as zero in pivoting.
  double pivot_tol = 1e-11;
  /// A column enters only if its reduced cost is below -optimality_tol.
  double optimality_tol = 1e-9;
  /// Phase-one objective above this means the program is infeasible.
  double feasibility_tol = 1e-9;
  /// 0 selects a limit proportional to the tableau size.
  std::size_t max_pivots = 0;
};

/// Dense two-phase revised simplex with Bland's smallest-index rule for both
/// the entering and the leaving variable. Throws LPNumericalFailure when the
/// program is infeasible, unbounded, or the pivot limit is reached.
Solution solve(const LinearProgram& program, const SimplexOptions& options = {});

}  // namespace minimaxpi::lp
