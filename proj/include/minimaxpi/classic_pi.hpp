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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minimaxpi/core.hpp"
#include "minimaxpi/matrix_game.hpp"
#include "minimaxpi/models.hpp"

namespace minimaxpi {

enum class PIStatus { kConverged, kCycled, kMaxIters };

std::string to_string(PIStatus status);

struct PIOptions {
  /// Converged once consecutive evaluations differ by at most tol.
  double tol = 1e-8;
  std::size_t max_iters = 1000;
  /// 0 evaluates exactly; k > 0 applies k fixed-policy sweeps instead.
  std::size_t optimistic_k = 0;
  /// Stop with kCycled as soon as a policy cycle is detected. When false the
  /// method keeps iterating and reports kCycled at the end if the last
  /// policies are periodic.
  bool stop_on_cycle = true;
};

struct GamePIResult {
  ValueTable J;
  std::vector<MixedStrategy> mu;
  std::vector<MixedStrategy> nu;
  PIStatus status = PIStatus::kMaxIters;
  /// Number of improvement steps performed.
  std::size_t iterations = 0;
  std::optional<std::size_t> cycle_length;
  /// trace[t] = ||J^{t+1} - J^t||.
  std::vector<double> trace;
  /// Policy-pair signature before each improvement, plus the final one.
  std::vector<Signature> history;
};

/// Smallest p >= 2 such that the last 2p signatures are p-periodic. Returns
/// nothing when the values converged, when the policies are stationary, or
/// when no period is found.
std::optional<std::size_t> detect_cycle(std::span<const Signature> history,
                                        bool values_converged = false);

/// Hoffman-Karp: the minimizer's stationary mixed policy is improved by
/// solving the stage matrix games at the current values; each minimizer
/// policy is evaluated against the maximizer's optimal response, by value
/// iteration on the maximizer's MDP to tol / 10.
GamePIResult hoffman_karp(const DiscountedMarkovGame& game, const PIOptions& options = {});

/// Pollatschek-Avi-Itzhak: both players improve simultaneously to the saddle
/// point of the stage games at the current values, and the pair is evaluated
/// by a linear solve (or optimistic_k sweeps).
GamePIResult pollatschek_avi_itzhak(const DiscountedMarkovGame& game,
                                    const PIOptions& options = {});

/// Value of the pair (mu, nu): solves (I - alpha P) J = g.
ValueTable evaluate_mixed_pair(const DiscountedMarkovGame& game,
                               const std::vector<MixedStrategy>& mu,
                               const std::vector<MixedStrategy>& nu);

/// Value of mu against a best-responding maximizer, by value iteration.
ValueTable evaluate_against_best_response(const DiscountedMarkovGame& game,
                                          const std::vector<MixedStrategy>& mu, ValueTable j0,
                                          double tol, std::size_t max_iters = 1'000'000);

template <SeparatedModel M>
struct NaivePIResult {
  typename M::Table1 j1;
  typename M::Table2 j2;
  std::vector<typename M::Action1> mu;
  std::vector<typename M::Action2> nu;
  PIStatus status = PIStatus::kMaxIters;
  std::size_t iterations = 0;
  std::optional<std::size_t> cycle_length;
  std::vector<double> trace;
  std::vector<Signature> history;
};

template <SeparatedModel M>
Signature policy_signature(const std::vector<typename M::Action1>& mu,
                           const std::vector<typename M::Action2>& nu) {
  Signature sig;
  for (const auto& a : mu) append_signature(a, sig);
  for (const auto& a : nu) append_signature(a, sig);
  return sig;
}

/// Policy iteration on the separated form with simultaneous improvement:
/// evaluate (J1, J2) = T_{mu,nu}(J1, J2), then set mu to the argmin of
/// H1(., ., J2) and nu to the argmax of H2(., ., J1). This is the separated
/// analogue of Pollatschek-Avi-Itzhak and can oscillate.
template <SeparatedModel M>
NaivePIResult<M> naive_separated_pi(const M& m, const PIOptions& options = {}) {
  NaivePIResult<M> out;
  out.mu.reserve(m.size1());
  out.nu.reserve(m.size2());
  for (std::size_t x = 0; x < m.size1(); ++x) out.mu.push_back(m.initial_action1(x));
  for (std::size_t x = 0; x < m.size2(); ++x) out.nu.push_back(m.initial_action2(x));

  auto evaluate = [&](typename M::Table1 j1, typename M::Table2 j2) {
    if (options.optimistic_k == 0) {
      return evaluate_policy_pair(m, out.mu, out.nu, std::move(j1), std::move(j2),
                                  options.tol * 1e-2);
    }
    for (std::size_t k = 0; k < options.optimistic_k; ++k) {
      auto n1 = apply_T1_mu(m, out.mu, j2);
      auto n2 = apply_T2_nu(m, out.nu, j1);
      j1 = std::move(n1);
      j2 = std::move(n2);
    }
    return std::make_pair(std::move(j1), std::move(j2));
  };

  std::tie(out.j1, out.j2) = evaluate(zero_table1(m), zero_table2(m));
  out.history.push_back(policy_signature<M>(out.mu, out.nu));
  for (std::size_t t = 0; t < options.max_iters; ++t) {
    auto t1 = apply_T1(m, out.j2);
    auto t2 = apply_T2(m, out.j1, &t1.policy);
    out.mu = std::move(t1.policy);
    out.nu = std::move(t2.policy);
    out.iterations = t + 1;
    out.history.push_back(policy_signature<M>(out.mu, out.nu));
    auto [j1, j2] = evaluate(out.j1, out.j2);
    const double change = std::max(m.distance1(j1, out.j1), m.distance2(j2, out.j2));
    out.trace.push_back(change);
    out.j1 = std::move(j1);
    out.j2 = std::move(j2);
    if (change <= options.tol) {
      out.status = PIStatus::kConverged;
      return out;
    }
    if (options.stop_on_cycle) {
      if (auto p = detect_cycle(out.history)) {
        out.status = PIStatus::kCycled;
        out.cycle_length = p;
        return out;
      }
    }
  }
  if (auto p = detect_cycle(out.history)) {
    out.status = PIStatus::kCycled;
    out.cycle_length = p;
  }
  return out;
}

}  // namespace minimaxpi
