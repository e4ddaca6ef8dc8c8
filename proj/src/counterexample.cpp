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

#include "minimaxpi/counterexample.hpp"

#include <sstream>

#include "minimaxpi/errors.hpp"

namespace minimaxpi {
namespace {

// Strict pure saddle point in a 2 x 2 matrix: the entry is the unique row
// minimum of its column and the unique column maximum of its row.
bool strict_pure_saddle(const PayoffMatrix& m) {
  constexpr double kGap = 1e-9;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      if (m(i, j) < m(1 - i, j) - kGap && m(i, j) > m(i, 1 - j) + kGap) return true;
    }
  }
  return false;
}

DiscountedMarkovGame make_game(const std::array<double, 4>& g, const std::array<double, 4>& p) {
  DiscountedMarkovGame game;
  game.alpha = 1.0;
  game.terminating = true;
  PayoffMatrix a(2, 2);
  PayoffMatrix q(2, 2);
  a << g[0], g[1], g[2], g[3];
  q << p[0], p[1], p[2], p[3];
  game.payoff = {a};
  game.transition = {{q}};
  return game;
}

}  // namespace

OscillationInstance find_oscillation_instance() {
  constexpr std::array<double, 5> kCosts = {-2, -1, 0, 1, 2};
  constexpr std::array<double, 9> kProbs = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  PIOptions options;
  options.tol = 1e-10;
  options.max_iters = 60;
  std::size_t examined = 0;
  for (std::size_t a = 0; a < 625; ++a) {
    for (std::size_t b = 0; b < 6561; ++b) {
      std::array<double, 4> g{};
      std::array<double, 4> p{};
      std::size_t ga = a;
      std::size_t pb = b;
      for (int k = 3; k >= 0; --k) {
        g[static_cast<std::size_t>(k)] = kCosts[ga % 5];
        p[static_cast<std::size_t>(k)] = kProbs[pb % 9];
        ga /= 5;
        pb /= 9;
      }
      ++examined;
      DiscountedMarkovGame game = make_game(g, p);
      GamePIResult poa = pollatschek_avi_itzhak(game, options);
      if (poa.status != PIStatus::kCycled || poa.cycle_length != 2) continue;
      // The last two evaluations are the two values of the cycle.
      PIOptions one_more = options;
      one_more.max_iters = poa.iterations + 1;
      one_more.stop_on_cycle = false;
      const GamePIResult next = pollatschek_avi_itzhak(game, one_more);
      const std::array<double, 2> values = {poa.J[0], next.J[0]};
      if (!strict_pure_saddle(game.stage_matrix(0, std::vector<double>{values[0]}, 1.0)) ||
          !strict_pure_saddle(game.stage_matrix(0, std::vector<double>{values[1]}, 1.0))) {
        continue;
      }
      PIOptions naive_options = options;
      naive_options.max_iters = 500;
      const auto naive = naive_separated_pi(separate_markov_game(game), naive_options);
      if (naive.status != PIStatus::kCycled) continue;
      OscillationInstance out;
      out.game = std::move(game);
      out.g = g;
      out.p = p;
      out.cycle_values = values;
      out.poa = std::move(poa);
      out.candidates_examined = examined;
      return out;
    }
  }
  throw SearchFailed("no oscillating instance in the parameter grid");
}

std::string describe(const OscillationInstance& instance) {
  std::ostringstream os;
  os.precision(17);
  const auto& g = instance.g;
  const auto& p = instance.p;
  os << "One nonterminal state, 2x2 actions, terminating (alpha = 1).\n"
     << "stage costs      A = [[" << g[0] << ", " << g[1] << "], [" << g[2] << ", " << g[3]
     << "]]\n"
     << "continue probs   P = [[" << p[0] << ", " << p[1] << "], [" << p[2] << ", " << p[3]
     << "]]\n"
     << "grid candidates examined: " << instance.candidates_examined << "\n"
     << "Pollatschek-Avi-Itzhak (exact evaluation) cycles with period "
     << instance.poa.cycle_length.value_or(0) << " between J = " << instance.cycle_values[0]
     << " and J = " << instance.cycle_values[1]
     << ";\nboth values give stage games with strict pure saddle points.\n";
  return os.str();
}

}  // namespace minimaxpi
