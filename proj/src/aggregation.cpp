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

#include "minimaxpi/aggregation.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "minimaxpi/errors.hpp"

namespace minimaxpi {
namespace {

std::vector<double> point_mass_row(std::size_t x, const std::vector<std::size_t>& reps) {
  std::vector<double> row(reps.size(), 0.0);
  std::size_t best = 0;
  for (std::size_t k = 1; k < reps.size(); ++k) {
    const auto dist = [x](std::size_t r) { return r > x ? r - x : x - r; };
    if (dist(reps[k]) < dist(reps[best]) ||
        (dist(reps[k]) == dist(reps[best]) && reps[k] < reps[best])) {
      best = k;
    }
  }
  row[best] = 1.0;
  return row;
}

void check_reps(const std::vector<std::size_t>& reps, std::size_t size, const char* name) {
  if (reps.empty()) throw ValidationError(name, "at least one representative is required");
  for (std::size_t k = 0; k < reps.size(); ++k) {
    if (reps[k] >= size) {
      throw ValidationError(std::string(name) + "[" + std::to_string(k) + "]",
                            "state out of range");
    }
  }
}

void check_rows(const std::vector<std::vector<double>>& phi, std::size_t size, std::size_t cols,
                const char* name) {
  if (phi.size() != size) {
    throw ValidationError(name, "expected one (possibly empty) row per state");
  }
  for (std::size_t x = 0; x < size; ++x) {
    const auto& row = phi[x];
    if (row.empty()) continue;
    const std::string path = std::string(name) + "[" + std::to_string(x) + "]";
    if (row.size() != cols) throw ValidationError(path, "expected one entry per representative");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw ValidationError(path, "negative aggregation probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10) throw ValidationError(path, "row does not sum to one");
  }
}

// States of the other space read by H at the given states.
std::vector<bool> reached(const std::vector<std::size_t>& states,
                          const std::vector<std::size_t>& actions, const ReachFn& reach,
                          std::size_t other_size) {
  std::vector<bool> out(other_size, reach ? false : true);
  if (!reach) return out;
  for (std::size_t x : states) {
    for (std::size_t a = 0; a < actions[x]; ++a) {
      for (std::size_t y : reach(x, a)) out.at(y) = true;
    }
  }
  return out;
}

}  // namespace

AggregationProbabilities nearest_representative_phi(std::size_t size1, std::size_t size2,
                                                    const RepresentativeSets& reps) {
  check_reps(reps.reps1, size1, "reps1");
  check_reps(reps.reps2, size2, "reps2");
  AggregationProbabilities phi;
  for (std::size_t x = 0; x < size1; ++x) phi.phi1.push_back(point_mass_row(x, reps.reps1));
  for (std::size_t x = 0; x < size2; ++x) phi.phi2.push_back(point_mass_row(x, reps.reps2));
  return phi;
}

RepresentativeSets full_representatives(std::size_t size1, std::size_t size2) {
  RepresentativeSets reps;
  reps.reps1.resize(size1);
  reps.reps2.resize(size2);
  std::iota(reps.reps1.begin(), reps.reps1.end(), std::size_t{0});
  std::iota(reps.reps2.begin(), reps.reps2.end(), std::size_t{0});
  return reps;
}

ValueTable interpolate(std::span<const double> j_tilde,
                       const std::vector<std::vector<double>>& phi_rows) {
  ValueTable out(phi_rows.size(), 0.0);
  for (std::size_t x = 0; x < phi_rows.size(); ++x) {
    const auto& row = phi_rows[x];
    if (row.empty()) continue;
    if (row.size() != j_tilde.size()) throw std::invalid_argument("interpolate: size mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) s += row[k] * j_tilde[k];
    out[x] = s;
  }
  return out;
}

SeparatedProblem build_aggregate(const SeparatedProblem& problem, const RepresentativeSets& reps,
                                 const AggregationProbabilities& phi) {
  problem.validate();
  check_reps(reps.reps1, problem.size1(), "reps1");
  check_reps(reps.reps2, problem.size2(), "reps2");
  check_rows(phi.phi1, problem.size1(), reps.reps1.size(), "phi1");
  check_rows(phi.phi2, problem.size2(), reps.reps2.size(), "phi2");

  const auto need2 = reached(reps.reps1, problem.actions1, problem.reach1, problem.size2());
  const auto need1 = reached(reps.reps2, problem.actions2, problem.reach2, problem.size1());
  for (std::size_t x = 0; x < problem.size2(); ++x) {
    if (need2[x] && phi.phi2[x].empty()) {
      throw MissingAggregationRow("phi2 has no row for reachable state " + std::to_string(x));
    }
  }
  for (std::size_t x = 0; x < problem.size1(); ++x) {
    if (need1[x] && phi.phi1[x].empty()) {
      throw MissingAggregationRow("phi1 has no row for reachable state " + std::to_string(x));
    }
  }

  SeparatedProblem agg;
  std::vector<double> w1;
  std::vector<double> w2;
  for (std::size_t r : reps.reps1) {
    w1.push_back(problem.space1.weight(r));
    agg.actions1.push_back(problem.actions1[r]);
  }
  for (std::size_t r : reps.reps2) {
    w2.push_back(problem.space2.weight(r));
    agg.actions2.push_back(problem.actions2[r]);
  }
  agg.space1 = WeightedSpace(std::move(w1));
  agg.space2 = WeightedSpace(std::move(w2));
  agg.alpha = problem.alpha;
  const auto eval1 = problem.eval1;
  const auto eval2 = problem.eval2;
  const auto reps1 = reps.reps1;
  const auto reps2 = reps.reps2;
  const auto phi1 = phi.phi1;
  const auto phi2 = phi.phi2;
  agg.eval1 = [eval1, reps1, phi2](std::size_t k, std::size_t u, std::span<const double> j2) {
    const ValueTable full = interpolate(j2, phi2);
    return eval1(reps1[k], u, full);
  };
  agg.eval2 = [eval2, reps2, phi1](std::size_t k, std::size_t v, std::span<const double> j1) {
    const ValueTable full = interpolate(j1, phi1);
    return eval2(reps2[k], v, full);
  };
  return agg;
}

PolicyPair lookahead_policies(const SeparatedProblem& problem, std::span<const double> j1,
                              std::span<const double> j2) {
  const ValueTable t1(j1.begin(), j1.end());
  const ValueTable t2(j2.begin(), j2.end());
  PolicyPair out;
  for (std::size_t x = 0; x < problem.size1(); ++x) {
    out.mu.push_back(problem.minimize1(x, t2).action);
  }
  for (std::size_t x = 0; x < problem.size2(); ++x) {
    out.nu.push_back(problem.maximize2(x, t1, nullptr).action);
  }
  return out;
}

}  // namespace minimaxpi
