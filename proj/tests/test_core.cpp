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

#include <cmath>

#include "minimaxpi/core.hpp"
#include "minimaxpi/errors.hpp"
#include "support/generators.hpp"

using namespace minimaxpi;
using minimaxpi::testing::Rng;

namespace {

// Direct evaluation of a separated minimax model from its move lists.
double direct_h1(const SeparatedMinimaxModel& m, std::size_t x, std::size_t u,
                 const std::vector<double>& j2) {
  return m.min_moves[x][u].cost + m.alpha * j2[m.min_moves[x][u].next];
}

double direct_h2(const SeparatedMinimaxModel& m, std::size_t x, std::size_t v,
                 const std::vector<double>& j1) {
  return m.max_moves[x][v].cost + m.alpha * j1[m.max_moves[x][v].next];
}

}  // namespace

TEST_SUITE("weighted_sup_norm") {
  TEST_CASE("examples") {
    const WeightedSpace s(std::vector<double>{1.0, 2.0});
    CHECK(weighted_sup_norm(s, std::vector<double>{0.0, 0.0}) == 0.0);
    CHECK(weighted_sup_norm(s, std::vector<double>{1.0, 2.0}) == 1.0);
    CHECK(weighted_sup_norm(s, std::vector<double>{2.0, -6.0}) == 3.0);
  }

  TEST_CASE("product norm is the max of the two") {
    const WeightedSpace a(2), b(std::vector<double>{4.0});
    CHECK(weighted_sup_norm(a, std::vector<double>{1.0, -2.0}, b, std::vector<double>{12.0}) ==
          3.0);
  }

  TEST_CASE("nonpositive weights are rejected") {
    CHECK_THROWS(WeightedSpace(std::vector<double>{1.0, 0.0}));
  }

  TEST_CASE("property: norm axioms") {
    Rng rng(1);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 1 + testing::index(rng, 8);
      const WeightedSpace s(testing::random_weights(rng, n));
      const auto a = testing::random_table(rng, n);
      const auto b = testing::random_table(rng, n);
      std::vector<double> sum(n);
      for (std::size_t i = 0; i < n; ++i) sum[i] = a[i] + b[i];
      CHECK(s.norm(sum) <= s.norm(a) + s.norm(b) + 1e-12);
      CHECK(s.norm(a) > 0.0);
      CHECK(s.distance(a, a) == 0.0);
    }
  }
}

TEST_SUITE("half-stage operators") {
  TEST_CASE("scaled single-state evaluation") {
    const double beta = 1.25;
    const auto p = testing::make_problem(
        1, 1, 1, 1, 0.8,
        [beta](std::size_t, std::size_t, std::span<const double> j2) { return j2[0] / beta; },
        [](std::size_t, std::size_t, std::span<const double>) { return 0.0; });
    const auto out = apply_T1_mu(p, std::vector<std::size_t>{0}, ValueTable{5.0});
    CHECK(out[0] == doctest::Approx(4.0));
  }

  TEST_CASE("constant evaluators give constant tables") {
    const auto p = testing::make_problem(
        3, 2, 2, 2, 0.0, [](std::size_t, std::size_t, std::span<const double>) { return 7.0; },
        [](std::size_t, std::size_t, std::span<const double>) { return -2.0; });
    CHECK(apply_T1_mu(p, std::vector<std::size_t>{0, 1, 0}, ValueTable{1.0, 9.0}) ==
          ValueTable{7.0, 7.0, 7.0});
    CHECK(apply_T2_nu(p, std::vector<std::size_t>{1, 1}, ValueTable{1.0, 2.0, 3.0}) ==
          ValueTable{-2.0, -2.0});
  }

  TEST_CASE("single-state mirror for the maximizer") {
    const auto p = testing::linear_pair_problem();
    CHECK(apply_T2_nu(p, std::vector<std::size_t>{0}, ValueTable{4.0})[0] == 3.0);
  }

  TEST_CASE("finite min and max pick the lowest index") {
    const auto p = testing::make_problem(
        1, 1, 2, 2, 0.0,
        [](std::size_t, std::size_t u, std::span<const double>) { return u == 0 ? 3.0 : 7.0; },
        [](std::size_t, std::size_t v, std::span<const double>) { return v == 0 ? 3.0 : 7.0; });
    const auto t1 = apply_T1(p, ValueTable{0.0});
    CHECK(t1.values[0] == 3.0);
    CHECK(t1.policy[0] == 0);
    const auto t2 = apply_T2(p, ValueTable{0.0});
    CHECK(t2.values[0] == 7.0);
    CHECK(t2.policy[0] == 1);

    const auto tie = testing::make_problem(
        1, 1, 3, 3, 0.0, [](std::size_t, std::size_t, std::span<const double>) { return 1.0; },
        [](std::size_t, std::size_t, std::span<const double>) { return 1.0; });
    CHECK(apply_T1(tie, ValueTable{0.0}).policy[0] == 0);
    CHECK(apply_T2(tie, ValueTable{0.0}).policy[0] == 0);
  }

  TEST_CASE("singleton actions reduce to the forced policy") {
    Rng rng(2);
    const auto model = testing::random_separated_model(rng, 4, 3, 1, 0.7);
    const auto p = to_separated_problem(model);
    const auto j2 = testing::random_table(rng, 3);
    CHECK(apply_T1(p, j2).values == apply_T1_mu(p, std::vector<std::size_t>(4, 0), j2));
  }

  TEST_CASE("random instances match per-state and exhaustive scans") {
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
      const auto model = testing::random_separated_model(rng, 3, 3, 4, 0.9);
      const auto p = to_separated_problem(model);
      const auto j1 = testing::random_table(rng, 3);
      const auto j2 = testing::random_table(rng, 3);
      std::vector<std::size_t> mu(3), nu(3);
      for (std::size_t x = 0; x < 3; ++x) {
        mu[x] = testing::index(rng, model.min_moves[x].size());
        nu[x] = testing::index(rng, model.max_moves[x].size());
      }
      const auto t1mu = apply_T1_mu(p, mu, j2);
      const auto t2nu = apply_T2_nu(p, nu, j1);
      const auto t1 = apply_T1(p, j2);
      const auto t2 = apply_T2(p, j1);
      for (std::size_t x = 0; x < 3; ++x) {
        CHECK(t1mu[x] == direct_h1(model, x, mu[x], j2));
        CHECK(t2nu[x] == direct_h2(model, x, nu[x], j1));
        double lo = INFINITY, hi = -INFINITY;
        std::size_t arg_lo = 0, arg_hi = 0;
        for (std::size_t u = 0; u < model.min_moves[x].size(); ++u) {
          const double h = direct_h1(model, x, u, j2);
          if (h < lo) lo = h, arg_lo = u;
        }
        for (std::size_t v = 0; v < model.max_moves[x].size(); ++v) {
          const double h = direct_h2(model, x, v, j1);
          if (h > hi) hi = h, arg_hi = v;
        }
        CHECK(t1.values[x] == lo);
        CHECK(t1.policy[x] == arg_lo);
        CHECK(t2.values[x] == hi);
        CHECK(t2.policy[x] == arg_hi);
        CHECK(t1.values[x] <= t1mu[x]);
        CHECK(t2.values[x] >= t2nu[x]);
      }
    }
  }
}

TEST_SUITE("value_iterate") {
  TEST_CASE("linear pair fixed point") {
    const auto p = testing::linear_pair_problem();
    const auto r = value_iterate(p, 1e-12);
    CHECK(r.j1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(r.j2[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  }

  TEST_CASE("start at the fixed point") {
    const auto p = testing::linear_pair_problem();
    const auto r = value_iterate(p, ValueTable{2.0 / 3.0}, ValueTable{4.0 / 3.0}, 1e-12);
    CHECK(r.iterations <= 1);
    CHECK(r.j1[0] == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("random problems match a long brute-force iteration") {
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
      const auto model = testing::random_separated_model(rng, 4, 4, 3, 0.9);
      const auto p = to_separated_problem(model);
      const double tol = 1e-9;
      const auto r = value_iterate(p, tol);
      std::vector<double> a(4, 0.0), b(4, 0.0);
      for (int k = 0; k < 10000; ++k) {
        std::vector<double> na(4), nb(4);
        for (std::size_t x = 0; x < 4; ++x) {
          na[x] = INFINITY;
          for (std::size_t u = 0; u < model.min_moves[x].size(); ++u) {
            na[x] = std::min(na[x], direct_h1(model, x, u, b));
          }
          nb[x] = -INFINITY;
          for (std::size_t v = 0; v < model.max_moves[x].size(); ++v) {
            nb[x] = std::max(nb[x], direct_h2(model, x, v, a));
          }
        }
        a = na;
        b = nb;
      }
      for (std::size_t x = 0; x < 4; ++x) {
        CHECK(std::abs(r.j1[x] - a[x]) <= 10 * tol);
        CHECK(std::abs(r.j2[x] - b[x]) <= 10 * tol);
      }
    }
  }

  TEST_CASE("property: geometric decay of residuals") {
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
      const auto model = testing::random_separated_model(rng, 5, 4, 3, 0.9, t % 2 == 1);
      const auto p = to_separated_problem(model);
      const auto r = value_iterate(p, 1e-10);
      for (std::size_t k = 0; k + 1 < r.residuals.size(); ++k) {
        CHECK(r.residuals[k + 1] <= p.alpha * r.residuals[k] + 1e-12);
      }
    }
  }

  TEST_CASE("budget exhaustion throws") {
    const auto p = testing::linear_pair_problem();
    CHECK_THROWS_AS(value_iterate(p, 1e-12, 3), MaxItersExceeded);
    CHECK_THROWS_AS(value_iterate(p, 0.0), std::invalid_argument);
  }
}

TEST_SUITE("bellman_residual") {
  TEST_CASE("zero at the fixed point") {
    const auto p = testing::linear_pair_problem();
    CHECK(bellman_residual(p, ValueTable{2.0 / 3.0}, ValueTable{4.0 / 3.0}) < 1e-15);
  }

  TEST_CASE("one application from zero") {
    const auto p = testing::linear_pair_problem();
    CHECK(bellman_residual(p, ValueTable{0.0}, ValueTable{0.0}) == 1.0);
  }

  TEST_CASE("random instance matches a recomputed norm") {
    Rng rng(6);
    for (int t = 0; t < 20; ++t) {
      const auto model = testing::random_separated_model(rng, 3, 5, 3, 0.8);
      const auto p = to_separated_problem(model);
      const auto j1 = testing::random_table(rng, 3);
      const auto j2 = testing::random_table(rng, 5);
      double worst = 0.0;
      for (std::size_t x = 0; x < 3; ++x) {
        double lo = INFINITY;
        for (std::size_t u = 0; u < model.min_moves[x].size(); ++u) {
          lo = std::min(lo, direct_h1(model, x, u, j2));
        }
        worst = std::max(worst, std::abs(j1[x] - lo));
      }
      for (std::size_t x = 0; x < 5; ++x) {
        double hi = -INFINITY;
        for (std::size_t v = 0; v < model.max_moves[x].size(); ++v) {
          hi = std::max(hi, direct_h2(model, x, v, j1));
        }
        worst = std::max(worst, std::abs(j2[x] - hi));
      }
      CHECK(bellman_residual(p, j1, j2) == doctest::Approx(worst).epsilon(1e-14));
    }
  }
}

TEST_SUITE("estimate_modulus") {
  TEST_CASE("affine single-state map") {
    CHECK(estimate_modulus(testing::linear_pair_problem(), 200, 1) <= 0.5 + 1e-12);
  }

  TEST_CASE("constant operator") {
    const auto p = testing::make_problem(
        2, 2, 2, 2, 0.0, [](std::size_t, std::size_t, std::span<const double>) { return 1.0; },
        [](std::size_t, std::size_t, std::span<const double>) { return 2.0; });
    CHECK(estimate_modulus(p, 100, 2) == 0.0);
  }

  TEST_CASE("property: separated models stay below alpha") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
      const auto p =
          to_separated_problem(testing::random_separated_model(rng, 4, 4, 3, 0.9, t % 2 == 0));
      CHECK(estimate_modulus(p, 200, static_cast<std::uint64_t>(t)) <= p.alpha + 1e-10);
    }
  }
}

TEST_SUITE("check_monotone") {
  TEST_CASE("monotone linear pair") {
    CHECK(check_monotone(testing::linear_pair_problem(), 500, 1).ok);
  }

  TEST_CASE("sign flip is detected with a witness") {
    const auto p = testing::make_problem(
        1, 1, 1, 1, 0.5, [](std::size_t, std::size_t, std::span<const double> j2) { return -j2[0]; },
        [](std::size_t, std::size_t, std::span<const double> j1) { return 0.5 * j1[0]; });
    const auto r = check_monotone(p, 100, 1);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.witness.empty());
  }

  TEST_CASE("separated models are monotone") {
    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
      CHECK(check_monotone(to_separated_problem(testing::random_separated_model(rng, 4, 3, 3, 0.9)),
                           200, static_cast<std::uint64_t>(t))
                .ok);
    }
  }
}

TEST_SUITE("SeparatedProblem") {
  TEST_CASE("validate rejects empty action sets") {
    auto p = testing::linear_pair_problem();
    p.actions1[0] = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    auto empty = testing::linear_pair_problem();
    empty.space1 = WeightedSpace(std::size_t{0});
    empty.actions1.clear();
    CHECK_THROWS_AS(empty.validate(), ValidationError);
  }

  TEST_CASE("signatures round mixed strategies") {
    Signature a, b;
    append_signature(std::vector<double>{0.5, 0.5}, a);
    append_signature(std::vector<double>{0.5 + 1e-13, 0.5 - 1e-13}, b);
    CHECK(a == b);
  }
}
