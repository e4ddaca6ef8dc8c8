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

#include "minimaxpi/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "minimaxpi/errors.hpp"

namespace minimaxpi::lp {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Standard form A x = b, x >= 0, b >= 0, with a basis. Every iteration
// refactorizes the basis matrix from the original columns, so rounding does
// not accumulate across pivots the way it does in an updated tableau.
struct StandardForm {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<std::size_t> basis;
  std::vector<bool> artificial;
};

struct BasisSolve {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::VectorXd x;  // basic values
};

BasisSolve factor(const StandardForm& f) {
  const auto m = static_cast<Eigen::Index>(f.basis.size());
  Eigen::MatrixXd bm(m, m);
  for (Eigen::Index i = 0; i < m; ++i) bm.col(i) = f.a.col(static_cast<Eigen::Index>(f.basis[i]));
  BasisSolve s{Eigen::PartialPivLU<Eigen::MatrixXd>(bm), {}};
  if (!(s.lu.rcond() > 1e-14)) throw LPNumericalFailure("simplex: singular basis");
  s.x = s.lu.solve(f.b);
  return s;
}

// Primal simplex with Bland's rule for entering and leaving variables.
// Columns with allowed[j] false never enter. Returns false on unboundedness.
bool iterate(StandardForm& f, const Eigen::VectorXd& cost, const std::vector<bool>& allowed,
             const SimplexOptions& opt, std::size_t max_pivots, std::size_t& pivots) {
  const auto cols = f.a.cols();
  std::vector<bool> in_basis(static_cast<std::size_t>(cols), false);
  for (;;) {
    std::fill(in_basis.begin(), in_basis.end(), false);
    for (std::size_t j : f.basis) in_basis[j] = true;
    const BasisSolve s = factor(f);
    Eigen::VectorXd cb(static_cast<Eigen::Index>(f.basis.size()));
    for (std::size_t i = 0; i < f.basis.size(); ++i) {
      cb[static_cast<Eigen::Index>(i)] = cost[static_cast<Eigen::Index>(f.basis[i])];
    }
    const Eigen::VectorXd y = s.lu.transpose().solve(cb);

    std::size_t enter = kNone;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      if (!allowed[ju] || in_basis[ju]) continue;
      if (cost[j] - y.dot(f.a.col(j)) < -opt.optimality_tol) {
        enter = ju;
        break;
      }
    }
    if (enter == kNone) return true;

    const Eigen::VectorXd d = s.lu.solve(f.a.col(static_cast<Eigen::Index>(enter)));
    std::size_t leave = kNone;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.basis.size(); ++i) {
      const double di = d[static_cast<Eigen::Index>(i)];
      if (di <= opt.pivot_tol) continue;
      // Rounding can leave a basic value slightly negative; it counts as 0.
      const double ratio = std::max(0.0, s.x[static_cast<Eigen::Index>(i)]) / di;
      const double tie = 1e-14 * std::max(1.0, best);
      if (ratio < best - tie ||
          (std::abs(ratio - best) <= tie && f.basis[i] < f.basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == kNone) return false;
    if (++pivots > max_pivots) {
      throw LPNumericalFailure("simplex: pivot limit reached (" + std::to_string(max_pivots) +
                               ")");
    }
    f.basis[leave] = enter;
  }
}

}  // namespace

Solution solve(const LinearProgram& program, const SimplexOptions& options) {
  const std::size_t n = program.objective.size();
  const std::size_t m = program.rows.size();
  if (program.senses.size() != m || program.rhs.size() != m) {
    throw LPNumericalFailure("simplex: inconsistent constraint arrays");
  }

  // Normalize rows to nonnegative right-hand sides.
  std::vector<std::vector<double>> rows = program.rows;
  std::vector<Sense> senses = program.senses;
  std::vector<double> rhs = program.rhs;
  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != n) throw LPNumericalFailure("simplex: row width mismatch");
    if (rhs[i] < 0.0) {
      for (double& a : rows[i]) a = -a;
      rhs[i] = -rhs[i];
      if (senses[i] == Sense::kLessEqual) {
        senses[i] = Sense::kGreaterEqual;
      } else if (senses[i] == Sense::kGreaterEqual) {
        senses[i] = Sense::kLessEqual;
      }
    }
    if (senses[i] != Sense::kEqual) ++slack_count;
    if (senses[i] != Sense::kLessEqual) ++artificial_count;
  }

  const std::size_t first_artificial = n + slack_count;
  const std::size_t cols = first_artificial + artificial_count;
  StandardForm f;
  f.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(cols));
  f.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  f.basis.assign(m, kNone);
  f.artificial.assign(cols, false);
  {
    std::size_t s = n;
    std::size_t a = first_artificial;
    for (std::size_t i = 0; i < m; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      for (std::size_t j = 0; j < n; ++j) f.a(r, static_cast<Eigen::Index>(j)) = rows[i][j];
      f.b[r] = rhs[i];
      switch (senses[i]) {
        case Sense::kLessEqual:
          f.a(r, static_cast<Eigen::Index>(s)) = 1.0;
          f.basis[i] = s++;
          break;
        case Sense::kGreaterEqual:
          f.a(r, static_cast<Eigen::Index>(s++)) = -1.0;
          [[fallthrough]];
        case Sense::kEqual:
          f.a(r, static_cast<Eigen::Index>(a)) = 1.0;
          f.artificial[a] = true;
          f.basis[i] = a++;
          break;
      }
    }
  }

  const std::size_t max_pivots =
      options.max_pivots > 0 ? options.max_pivots : 50 * (m + cols) + 1000;
  std::size_t pivots = 0;

  // Phase one: minimize the sum of artificial variables.
  if (artificial_count > 0) {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cols));
    for (std::size_t j = first_artificial; j < cols; ++j) cost[static_cast<Eigen::Index>(j)] = 1.0;
    std::vector<bool> allowed(cols, true);
    // The phase-one objective is bounded below by zero, so an unbounded ray
    // only comes from rounding; the feasibility check below decides.
    (void)iterate(f, cost, allowed, options, max_pivots, pivots);
    const BasisSolve s = factor(f);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < f.basis.size(); ++i) {
      if (f.artificial[f.basis[i]]) infeasibility += s.x[static_cast<Eigen::Index>(i)];
    }
    if (infeasibility > options.feasibility_tol) {
      throw LPNumericalFailure("simplex: program is infeasible (phase one objective " +
                               std::to_string(infeasibility) + ")");
    }
    // Drive artificial variables at level zero out of the basis; rows where
    // that is impossible are redundant and dropped.
    for (std::size_t i = 0; i < f.basis.size();) {
      if (!f.artificial[f.basis[i]]) {
        ++i;
        continue;
      }
      const BasisSolve bs = factor(f);
      Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.basis.size()));
      e[static_cast<Eigen::Index>(i)] = 1.0;
      const Eigen::VectorXd row = bs.lu.transpose().solve(e);  // row i of B^-1
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::find(f.basis.begin(), f.basis.end(), j) != f.basis.end()) continue;
        if (std::abs(row.dot(f.a.col(static_cast<Eigen::Index>(j)))) > options.pivot_tol) {
          enter = j;
          break;
        }
      }
      if (enter != kNone) {
        f.basis[i] = enter;
        ++i;
        continue;
      }
      // Redundant row: remove it together with its artificial basic column.
      const auto r = static_cast<Eigen::Index>(i);
      const Eigen::Index keep = f.a.rows() - 1;
      Eigen::MatrixXd a(keep, f.a.cols());
      Eigen::VectorXd b(keep);
      a << f.a.topRows(r), f.a.bottomRows(keep - r);
      b << f.b.head(r), f.b.tail(keep - r);
      f.a = std::move(a);
      f.b = std::move(b);
      f.basis.erase(f.basis.begin() + r);
    }
  }

  // Phase two on the original objective.
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cols));
  for (std::size_t j = 0; j < n; ++j) {
    cost[static_cast<Eigen::Index>(j)] = program.objective[j];
  }
  std::vector<bool> allowed(cols, true);
  for (std::size_t j = first_artificial; j < cols; ++j) allowed[j] = false;
  if (!iterate(f, cost, allowed, options, max_pivots, pivots)) {
    throw LPNumericalFailure("simplex: objective is unbounded below");
  }

  const BasisSolve s = factor(f);
  Solution sol;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < f.basis.size(); ++i) {
    if (f.basis[i] < n) sol.x[f.basis[i]] = s.x[static_cast<Eigen::Index>(i)];
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += program.objective[j] * sol.x[j];
  sol.pivots = pivots;
  return sol;
}

}  // namespace minimaxpi::lp
