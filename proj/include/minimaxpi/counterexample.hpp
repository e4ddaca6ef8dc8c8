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

#include <array>
#include <cstddef>
#include <string>

#include "minimaxpi/classic_pi.hpp"
#include "minimaxpi/models.hpp"

namespace minimaxpi {

/// A one-state terminating game with 2 x 2 actions on which exact
/// Pollatschek-Avi-Itzhak policy iteration cycles.
///   A = [[g0, g1], [g2, g3]],  self-loop probabilities [[p0, p1], [p2, p3]]
/// and the remaining mass terminates at zero cost.
struct OscillationInstance {
  DiscountedMarkovGame game;
  std::array<double, 4> g{};
  std::array<double, 4> p{};
  /// Values visited by the cycle, in order.
  std::array<double, 2> cycle_values{};
  GamePIResult poa;
  std::size_t candidates_examined = 0;
};

/// Scans g in {-2, ..., 2}^4 and p in {0.1, ..., 0.9}^4 in lexicographic
/// order and returns the first instance where exact PoA cycles with period 2
/// through strict pure saddle points (so the cycle does not hinge on LP tie
/// breaking) and naive separated PI also cycles. Throws SearchFailed.
OscillationInstance find_oscillation_instance();

/// Human-readable description of the instance and the cycle.
std::string describe(const OscillationInstance& instance);

}  // namespace minimaxpi
