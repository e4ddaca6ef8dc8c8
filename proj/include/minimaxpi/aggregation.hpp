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
#include <span>
#include <vector>

#include "minimaxpi/core.hpp"

namespace minimaxpi {

/// Representative states of X1 and X2.
struct RepresentativeSets {
  std::vector<std::size_t> reps1;
  std::vector<std::size_t> reps2;
};

/// phi1[x1][k] is the weight of reps1[k] at x1; phi2 likewise over X2. An
/// empty row means the row is not defined.
struct AggregationProbabilities {
  std::vector<std::vector<double>> phi1;
  std::vector<std::vector<double>> phi2;
};

/// Point mass on the nearest representative by state index (ties go to the
/// smaller index).
AggregationProbabilities nearest_representative_phi(std::size_t size1, std::size_t size2,
                                                    const RepresentativeSets& reps);

/// Identity aggregation over the full spaces.
RepresentativeSets full_representatives(std::size_t size1, std::size_t size2);

/// J(x) = sum_k phi[x][k] J_tilde(k). Undefined rows yield 0.
ValueTable interpolate(std::span<const double> j_tilde,
                       const std::vector<std::vector<double>>& phi_rows);

/// Aggregate problem over (reps1, reps2):
///   H~1(k, u, J~2) = H1(reps1[k], u, interpolate(J~2, phi2))
///   H~2(k, v, J~1) = H2(reps2[k], v, interpolate(J~1, phi1))
/// Throws MissingAggregationRow when a state read by H at a representative
/// has no phi row, and ValidationError for rows that are not distributions.
SeparatedProblem build_aggregate(const SeparatedProblem& problem, const RepresentativeSets& reps,
                                 const AggregationProbabilities& phi);

/// One-step lookahead: mu(x1) = argmin_u H1(x1, u, J2), nu(x2) = argmax_v
/// H2(x2, v, J1), lowest index on ties.
PolicyPair lookahead_policies(const SeparatedProblem& problem, std::span<const double> j1,
                              std::span<const double> j2);

}  // namespace minimaxpi
