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

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>

#include "minimaxpi/errors.hpp"
#include "minimaxpi/lp.hpp"
#include "minimaxpi/matrix_game.hpp"
#include "support/generators.hpp"

using namespace minimaxpi;
using minimaxpi::testing::Rng;

namespace {

// Support enumeration over equal-size supports. Returns the game value of
// the first certified equilibrium.
std::optional<double> support_enumeration_value(const PayoffMatrix& m) {
  const int n = static_cast<int>(m.rows());
  const int k_max = static_cast<int>(std::min(m.rows(), m.cols()));
  const int cols = static_cast<int>(m.cols());
  for (int k = 1; k <= k_max; ++k) {
    for (int rs = 0; rs < (1 << n); ++rs) {
      if (__builtin_popcount(rs) != k) continue;
      for (int cs = 0; cs < (1 << cols); ++cs) {
        if (__builtin_popcount(cs) != k) continue;
        std::vector<int> r, c;
        for (int i = 0; i < n; ++i) if (rs & (1 << i)) r.push_back(i);
        for (int j = 0; j < cols; ++j) if (cs & (1 << j)) c.push_back(j);
        // [M_S'  -1; 1' 0] [u; w] = [0; 1] and the mirror for v.
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k + 1);
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) {
            a(j, i) = m(r[i], c[j]);
            b(i, j) = m(r[i], c[j]);
          }
          a(i, k) = -1.0;
          a(k, i) = 1.0;
          b(i, k) = -1.0;
          b(k, i) = 1.0;
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
        rhs(k) = 1.0;
        if (std::abs(a.determinant()) < 1e-12 || std::abs(b.determinant()) < 1e-12) continue;
        const Eigen::VectorXd su = a.partialPivLu().solve(rhs);
        const Eigen::VectorXd sv = b.partialPivLu().solve(rhs);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n), v = Eigen::VectorXd::Zero(cols);
        bool ok = true;
        for (int i = 0; i < k; ++i) {
          ok = ok && su(i) >= -1e-12 && sv(i) >= -1e-12;
          u(r[i]) = su(i);
          v(c[i]) = sv(i);
        }
        if (!ok) continue;
        const double w = su(k);
        const Eigen::VectorXd col_vals = m.transpose() * u;
        const Eigen::VectorXd row_vals = m * v;
        if (col_vals.maxCoeff() <= w + 1e-9 && row_vals.minCoeff() >= w - 1e-9) return w;
      }
    }
  }
  return std::nullopt;
}

PayoffMatrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  PayoffMatrix m(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

// Exact min over the 3-simplex of max_k u'c_k: the optimum is at a point
// where two of {c_a = c_b, u_i = 0} are active together with sum u = 1.
double vertex_enumeration_min_max(const std::vector<std::vector<double>>& lines) {
  std::vector<Eigen::RowVector3d> constraints;
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      constraints.emplace_back(lines[a][0] - lines[b][0], lines[a][1] - lines[b][1],
                               lines[a][2] - lines[b][2]);
    }
  }
  for (int i = 0; i < 3; ++i) constraints.push_back(Eigen::RowVector3d::Unit(i));
  auto f = [&](const Eigen::Vector3d& u) {
    double out = -std::numeric_limits<double>::infinity();
    for (const auto& c : lines) out = std::max(out, u[0] * c[0] + u[1] * c[1] + u[2] * c[2]);
    return out;
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < constraints.size(); ++p) {
    for (std::size_t q = p + 1; q < constraints.size(); ++q) {
      Eigen::Matrix3d m;
      m.row(0) = constraints[p];
      m.row(1) = constraints[q];
      m.row(2) = Eigen::RowVector3d::Ones();
      const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
      if (!lu.isInvertible()) continue;
      const Eigen::Vector3d u = lu.solve(Eigen::Vector3d(0, 0, 1));
      if (u.minCoeff() < -1e-12) continue;
      best = std::min(best, f(u.cwiseMax(0.0) / u.cwiseMax(0.0).sum()));
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("lp") {
  TEST_CASE("two-variable program") {
    // min x + 2y  s.t. x + y >= 1, x <= 0.25
    lp::LinearProgram p;
    p.objective = {1.0, 2.0};
    p.add_row({1.0, 1.0}, lp::Sense::kGreaterEqual, 1.0);
    p.add_row({1.0, 0.0}, lp::Sense::kLessEqual, 0.25);
    const auto s = lp::solve(p);
    CHECK(s.objective == doctest::Approx(1.75));
    CHECK(s.x[0] == doctest::Approx(0.25));
    CHECK(s.x[1] == doctest::Approx(0.75));
  }

  TEST_CASE("equality rows and redundant constraints") {
    lp::LinearProgram p;
    p.objective = {-1.0, -1.0, 0.0};
    p.add_row({1.0, 1.0, 1.0}, lp::Sense::kEqual, 1.0);
    p.add_row({2.0, 2.0, 2.0}, lp::Sense::kEqual, 2.0);
    p.add_row({0.0, 0.0, 1.0}, lp::Sense::kGreaterEqual, 0.5);
    const auto s = lp::solve(p);
    CHECK(s.objective == doctest::Approx(-0.5));
  }

  TEST_CASE("infeasible and unbounded programs throw") {
    lp::LinearProgram infeasible;
    infeasible.objective = {1.0};
    infeasible.add_row({1.0}, lp::Sense::kLessEqual, -1.0);
    CHECK_THROWS_AS(lp::solve(infeasible), LPNumericalFailure);

    lp::LinearProgram unbounded;
    unbounded.objective = {-1.0, 0.0};
    unbounded.add_row({0.0, 1.0}, lp::Sense::kLessEqual, 1.0);
    CHECK_THROWS_AS(lp::solve(unbounded), LPNumericalFailure);
  }

  TEST_CASE("random boxes match the vertex optimum") {
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
      // min c'x over 0 <= x <= b: optimum is sum of min(0, c_i) b_i.
      const std::size_t n = 1 + testing::index(rng, 5);
      lp::LinearProgram p;
      double expected = 0.0;
      for (std::size_t i = 0; i < n; ++i) p.objective.push_back(testing::uniform(rng, -3, 3));
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(n, 0.0);
        row[i] = 1.0;
        const double b = testing::uniform(rng, 0.1, 4);
        p.add_row(row, lp::Sense::kLessEqual, b);
        expected += std::min(0.0, p.objective[i]) * b;
      }
      CHECK(lp::solve(p).objective == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_SUITE("matrix_game") {
  TEST_CASE("matching pennies") {
    const auto s = solve_matrix_game(mat({{1, -1}, {-1, 1}}));
    CHECK(std::abs(s.value) < 1e-12);
    CHECK(s.u_star[0] == doctest::Approx(0.5));
    CHECK(s.v_star[0] == doctest::Approx(0.5));
  }

  TEST_CASE("one by one game") {
    const auto s = solve_matrix_game(mat({{3.5}}));
    CHECK(s.value == 3.5);
    CHECK(s.u_star == MixedStrategy{1.0});
    CHECK(s.v_star == MixedStrategy{1.0});
  }

  TEST_CASE("pure saddle matches support enumeration") {
    const PayoffMatrix m = mat({{1, 2}, {3, 4}});
    const auto s = solve_matrix_game(m);
    CHECK(s.value == doctest::Approx(2.0));
    CHECK(s.u_star[0] == doctest::Approx(1.0));
    CHECK(s.v_star[1] == doctest::Approx(1.0));
    const auto oracle = support_enumeration_value(m);
    REQUIRE(oracle);
    CHECK(*oracle == doctest::Approx(2.0));
  }

  TEST_CASE("random games match support enumeration") {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
      const PayoffMatrix m =
          testing::random_matrix(rng, 1 + testing::index(rng, 3), 1 + testing::index(rng, 3));
      const auto oracle = support_enumeration_value(m);
      REQUIRE(oracle);
      CHECK(std::abs(solve_matrix_game(m).value - *oracle) < 1e-9);
    }
  }

  TEST_CASE("property: duality, saddle certificate and covariance") {
    Rng rng(17);
    for (int t = 0; t < 500; ++t) {
      const std::size_t n = 1 + testing::index(rng, 6);
      const std::size_t m = 1 + testing::index(rng, 6);
      const PayoffMatrix a = testing::random_matrix(rng, n, m, 5.0);
      const auto s = solve_matrix_game(a);
      CHECK(std::abs(s.value - s.dual_value) <= 1e-8);
      const Eigen::Map<const Eigen::VectorXd> u(s.u_star.data(), static_cast<Eigen::Index>(n));
      const Eigen::Map<const Eigen::VectorXd> v(s.v_star.data(), static_cast<Eigen::Index>(m));
      CHECK((a.transpose() * u).maxCoeff() <= s.value + 1e-8);
      CHECK((a * v).minCoeff() >= s.value - 1e-8);

      const double c = testing::uniform(rng, -3, 3);
      const auto shifted = solve_matrix_game((a.array() + c).matrix());
      CHECK(std::abs(shifted.value - (s.value + c)) <= 1e-8);
      const double k = testing::uniform(rng, 0.1, 4);
      const auto scaled = solve_matrix_game(k * a);
      CHECK(std::abs(scaled.value - k * s.value) <= 1e-8 * k);

      std::vector<std::vector<double>> columns(m, std::vector<double>(n));
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
          columns[j][i] = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
      }
      CHECK(std::abs(min_simplex_max_linear(std::span<const std::vector<double>>(columns)).value -
                     s.value) <= 1e-9);
    }
  }

  TEST_CASE("strategies of shifted games coincide") {
    const PayoffMatrix a = mat({{3, -1, 0}, {-2, 4, 1}});
    const auto s = solve_matrix_game(a);
    const auto t = solve_matrix_game((a.array() + 7.0).matrix());
    for (std::size_t i = 0; i < s.u_star.size(); ++i) {
      CHECK(s.u_star[i] == doctest::Approx(t.u_star[i]));
    }
    for (std::size_t j = 0; j < s.v_star.size(); ++j) {
      CHECK(s.v_star[j] == doctest::Approx(t.v_star[j]));
    }
  }

  TEST_CASE("invalid payoffs") {
    CHECK_THROWS_AS(solve_matrix_game(PayoffMatrix(0, 2)), std::invalid_argument);
    PayoffMatrix nan_m = mat({{1.0}});
    nan_m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(solve_matrix_game(nan_m), std::invalid_argument);
  }
}

TEST_SUITE("min_simplex_max_linear") {
  TEST_CASE("single line attains a vertex") {
    const std::vector<std::vector<double>> lines{{3.0, 1.0}};
    const auto s = min_simplex_max_linear(std::span<const std::vector<double>>(lines));
    CHECK(s.value == doctest::Approx(1.0));
    CHECK(s.u_star[1] == doctest::Approx(1.0));
  }

  TEST_CASE("matching pennies columns") {
    const std::vector<std::vector<double>> lines{{1.0, -1.0}, {-1.0, 1.0}};
    CHECK(std::abs(min_simplex_max_linear(std::span<const std::vector<double>>(lines)).value) <
          1e-12);
  }

  TEST_CASE("offsets shift the objective") {
    const std::vector<AffineLine> lines{{2.0, {1.0, 0.0}}, {-1.0, {0.0, 1.0}}};
    const auto s = min_simplex_max_linear(std::span<const AffineLine>(lines));
    CHECK(s.value == doctest::Approx(2.0));
  }

  TEST_CASE("random lines match a simplex grid search") {
    Rng rng(3);
    for (int t = 0; t < 3; ++t) {
      std::vector<AffineLine> lines(3);
      for (auto& l : lines) {
        l.offset = testing::uniform(rng, -1, 1);
        l.coeffs = testing::random_table(rng, 3, 1.0);
      }
      double grid = std::numeric_limits<double>::infinity();
      const int steps = 1000;
      for (int a = 0; a <= steps; ++a) {
        for (int b = 0; a + b <= steps; ++b) {
          const double u[3] = {a / 1000.0, b / 1000.0, (steps - a - b) / 1000.0};
          double f = -std::numeric_limits<double>::infinity();
          for (const auto& l : lines) {
            f = std::max(f, l.offset + u[0] * l.coeffs[0] + u[1] * l.coeffs[1] +
                                u[2] * l.coeffs[2]);
          }
          grid = std::min(grid, f);
        }
      }
      const auto s = min_simplex_max_linear(std::span<const AffineLine>(lines));
      CHECK(s.value <= grid + 1e-12);
      CHECK(std::abs(s.value - grid) <= 1e-3);
    }
  }

  TEST_CASE("ill-conditioned lines match vertex enumeration") {
    // Nearly collinear and nearly zero lines, as produced by sup distances
    // of converging value tables.
    const std::vector<std::vector<std::vector<double>>> cases = {
        {{-6.3118532622752355e-10, -7.7741102444406351e-10, -9.5838181835006253e-10},
         {-0.37956637623665901, -0.59611659859271948, 0.22518142371501115},
         {-0.7372595282150155, -0.5662371867160152, -0.48505034434601946},
         {-6.2441607440177904e-10, -5.8112537004717524e-10, -1.0026712793376191e-10}},
        {{0.64644777092274808, -0.6044142839068245, -0.7223930692684859},
         {1.6185483786595911, 0.31323110862426784, -0.35987583322803074},
         {-2.2819198733925461e-06, -2.3384357810130041e-06, -2.5194406716444462e-06},
         {1.6185488600108091, 0.31323296527406663, -0.35987522974486463}},
    };
    Rng rng(4);
    auto all = cases;
    for (int t = 0; t < 200; ++t) {
      // A random line, a copy perturbed by 1e-7 and two tiny lines.
      auto base = testing::random_table(rng, 3, 1.0);
      auto twin = base;
      for (double& v : twin) v += testing::uniform(rng, -1e-7, 1e-7);
      all.push_back({base, twin, testing::random_table(rng, 3, 1e-9),
                     testing::random_table(rng, 3, 1.0), testing::random_table(rng, 3, 1e-6)});
    }
    for (std::size_t c = 0; c < all.size(); ++c) {
      const auto& lines = all[c];
      const auto s = min_simplex_max_linear(std::span<const std::vector<double>>(lines));
      CHECK(s.u_star.size() == 3);
      CHECK(std::abs(s.u_star[0] + s.u_star[1] + s.u_star[2] - 1.0) <= 1e-12);
      const double oracle = vertex_enumeration_min_max(lines);
      CHECK(s.value >= oracle - 1e-12);
      // Twin lines 1e-7 apart put the optimal vertex at a 1e7-conditioned
      // intersection, so the random cases get a correspondingly looser bound.
      CHECK(s.value <= oracle + (c < cases.size() ? 1e-12 : 1e-7));
    }
  }

  TEST_CASE("ragged input is rejected") {
    const std::vector<std::vector<double>> lines{{1.0, 2.0}, {1.0}};
    CHECK_THROWS_AS(min_simplex_max_linear(std::span<const std::vector<double>>(lines)),
                    std::invalid_argument);
  }
}

TEST_SUITE("best_response_value") {
  TEST_CASE("row read-off") {
    const std::vector<double> u{1.0, 0.0};
    const auto [value, col] = best_response_value(mat({{1, 2}, {3, 4}}), u);
    CHECK(value == 2.0);
    CHECK(col == 1);
  }

  TEST_CASE("equal columns break ties at the first") {
    const std::vector<double> u{0.3, 0.7};
    const auto [value, col] = best_response_value(mat({{1, 1}, {2, 2}}), u);
    CHECK(value == doctest::Approx(1.7));
    CHECK(col == 0);
  }

  TEST_CASE("random strategies match a dot-product loop") {
    Rng rng(23);
    for (int t = 0; t < 300; ++t) {
      const std::size_t n = 1 + testing::index(rng, 5);
      const std::size_t m = 1 + testing::index(rng, 5);
      const PayoffMatrix a = testing::random_matrix(rng, n, m);
      const MixedStrategy u = testing::random_strategy(rng, n);
      double best = -std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          s += u[i] * a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        if (s > best) {
          best = s;
          arg = j;
        }
      }
      const auto [value, col] = best_response_value(a, u);
      CHECK(value == best);
      CHECK(col == arg);
    }
  }

  TEST_CASE("normalize_strategy clamps and rescales") {
    const auto p = normalize_strategy({2.0, -1e-12, 2.0});
    CHECK(p == MixedStrategy{0.5, 0.0, 0.5});
    CHECK_THROWS_AS(normalize_strategy({1.0, -0.5}), LPNumericalFailure);
  }
}
