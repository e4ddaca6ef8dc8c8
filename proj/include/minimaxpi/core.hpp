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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "minimaxpi/errors.hpp"

namespace minimaxpi {

/// Values indexed by state. The owning WeightedSpace is passed alongside
/// wherever a norm is needed.
using ValueTable = std::vector<double>;

/// Finite state space {0, ..., size-1} with positive weights xi(x) defining
/// the norm ||J|| = max_x |J(x)| / xi(x).
class WeightedSpace {
 public:
  WeightedSpace() = default;
  /// Unit weights.
  explicit WeightedSpace(std::size_t size);
  explicit WeightedSpace(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t x) const { return weights_[x]; }
  const std::vector<double>& weights() const { return weights_; }
  bool unit_weights() const;

  double norm(std::span<const double> j) const;
  double distance(std::span<const double> a, std::span<const double> b) const;

 private:
  std::vector<double> weights_;
};

double weighted_sup_norm(const WeightedSpace& space, std::span<const double> j);

/// Product norm max{||J1||_1, ||J2||_2}.
double weighted_sup_norm(const WeightedSpace& space1, std::span<const double> j1,
                         const WeightedSpace& space2, std::span<const double> j2);

/// Minimizer policy `mu` over X1 and maximizer policy `nu` over X2, as action
/// indices.
struct PolicyPair {
  std::vector<std::size_t> mu;
  std::vector<std::size_t> nu;
};

template <class Action, class Value>
struct Choice {
  Value value;
  Action action;
};

/// Policy-pair signature used for cycle detection.
using Signature = std::vector<std::int64_t>;

inline void append_signature(std::size_t action, Signature& out) {
  out.push_back(static_cast<std::int64_t>(action));
}

inline void append_signature(std::span<const double> mixed, Signature& out) {
  for (double p : mixed) out.push_back(std::llround(p * 1e9));
}

/// H(state, action, other_table) for one half-stage.
using Evaluator = std::function<double(std::size_t, std::size_t, std::span<const double>)>;

/// States of the other space that H(state, action, .) reads.
using ReachFn = std::function<std::vector<std::size_t>(std::size_t, std::size_t)>;

/// Pair of half-stage evaluators H1(x1, u, J2) and H2(x2, v, J1) over finite
/// spaces with finite action sets. `alpha` is the asserted contraction modulus
/// of T_{mu,nu}(J1, J2) = (T_{1,mu} J2, T_{2,nu} J1) in the product norm.
struct SeparatedProblem {
  using Action1 = std::size_t;
  using Action2 = std::size_t;
  using Value2 = double;
  using Table1 = ValueTable;
  using Table2 = ValueTable;

  WeightedSpace space1;
  WeightedSpace space2;
  std::vector<std::size_t> actions1;  // |U(x1)|
  std::vector<std::size_t> actions2;  // |V(x2)|
  Evaluator eval1;
  Evaluator eval2;
  double alpha = 0.0;
  ReachFn reach1;  // optional
  ReachFn reach2;  // optional

  /// Throws ValidationError on empty action sets or mismatched sizes.
  void validate() const;

  std::size_t size1() const { return space1.size(); }
  std::size_t size2() const { return space2.size(); }
  double modulus() const { return alpha; }

  Action1 initial_action1(std::size_t) const { return 0; }
  Action2 initial_action2(std::size_t) const { return 0; }
  Value2 zero2(std::size_t) const { return 0.0; }

  double h1(std::size_t x1, Action1 u, const Table2& j2) const { return eval1(x1, u, j2); }
  Value2 h2(std::size_t x2, Action2 v, const Table1& j1) const { return eval2(x2, v, j1); }
  Choice<Action1, double> minimize1(std::size_t x1, const Table2& j2) const;
  Choice<Action2, Value2> maximize2(std::size_t x2, const Table1& j1, const Action1* hint) const;
  const Action1* hint_for(std::size_t, const std::vector<Action1>&) const { return nullptr; }

  Value2 upper2(Value2 v, Value2 j) const { return std::max(v, j); }
  double distance1(const Table1& a, const Table1& b) const { return space1.distance(a, b); }
  double distance2(const Table2& a, const Table2& b) const { return space2.distance(a, b); }
};

/// What the generic algorithms (value iteration, naive PI, asynchronous PI)
/// need from a separated model. Tables over X1 are real vectors; tables over
/// X2 hold `Value2` entries, which are scalars for finite problems and
/// piecewise-linear functions for the implicit Markov-game reformulation.
template <class M>
concept SeparatedModel = requires(const M& m, std::size_t x, const typename M::Table1& j1,
                                  const typename M::Table2& j2,
                                  const typename M::Action1& a1,
                                  const typename M::Action2& a2,
                                  const typename M::Value2& v2,
                                  const std::vector<typename M::Action1>& mu) {
  { m.size1() } -> std::convertible_to<std::size_t>;
  { m.size2() } -> std::convertible_to<std::size_t>;
  { m.modulus() } -> std::convertible_to<double>;
  { m.initial_action1(x) } -> std::convertible_to<typename M::Action1>;
  { m.initial_action2(x) } -> std::convertible_to<typename M::Action2>;
  { m.zero2(x) } -> std::convertible_to<typename M::Value2>;
  { m.h1(x, a1, j2) } -> std::convertible_to<double>;
  { m.h2(x, a2, j1) } -> std::convertible_to<typename M::Value2>;
  { m.minimize1(x, j2) };
  { m.maximize2(x, j1, &a1) };
  { m.hint_for(x, mu) } -> std::convertible_to<const typename M::Action1*>;
  { m.upper2(v2, v2) } -> std::convertible_to<typename M::Value2>;
  { m.distance1(j1, j1) } -> std::convertible_to<double>;
  { m.distance2(j2, j2) } -> std::convertible_to<double>;
};

template <SeparatedModel M>
typename M::Table2 zero_table2(const M& m) {
  typename M::Table2 out;
  out.reserve(m.size2());
  for (std::size_t x = 0; x < m.size2(); ++x) out.push_back(m.zero2(x));
  return out;
}

template <SeparatedModel M>
typename M::Table1 zero_table1(const M& m) {
  return typename M::Table1(m.size1(), 0.0);
}

/// (T_{1,mu} J2)(x1) = H1(x1, mu(x1), J2).
template <SeparatedModel M>
typename M::Table1 apply_T1_mu(const M& m, const std::vector<typename M::Action1>& mu,
                               const typename M::Table2& j2) {
  typename M::Table1 out(m.size1());
  for (std::size_t x = 0; x < m.size1(); ++x) out[x] = m.h1(x, mu[x], j2);
  return out;
}

/// (T_{2,nu} J1)(x2) = H2(x2, nu(x2), J1).
template <SeparatedModel M>
typename M::Table2 apply_T2_nu(const M& m, const std::vector<typename M::Action2>& nu,
                               const typename M::Table1& j1) {
  typename M::Table2 out;
  out.reserve(m.size2());
  for (std::size_t x = 0; x < m.size2(); ++x) out.push_back(m.h2(x, nu[x], j1));
  return out;
}

template <SeparatedModel M>
struct HalfStage1 {
  typename M::Table1 values;
  std::vector<typename M::Action1> policy;
};

template <SeparatedModel M>
struct HalfStage2 {
  typename M::Table2 values;
  std::vector<typename M::Action2> policy;
};

/// (T1 J2)(x1) = min_u H1(x1, u, J2), with the argmin policy.
template <SeparatedModel M>
HalfStage1<M> apply_T1(const M& m, const typename M::Table2& j2) {
  HalfStage1<M> out;
  out.values.resize(m.size1());
  out.policy.reserve(m.size1());
  for (std::size_t x = 0; x < m.size1(); ++x) {
    auto c = m.minimize1(x, j2);
    out.values[x] = c.value;
    out.policy.push_back(std::move(c.action));
  }
  return out;
}

/// (T2 J1)(x2) = max_v H2(x2, v, J1), with the argmax policy. `hint_policy`
/// is the minimizer policy used by models whose maximizer choice depends on it.
template <SeparatedModel M>
HalfStage2<M> apply_T2(const M& m, const typename M::Table1& j1,
                       const std::vector<typename M::Action1>* hint_policy = nullptr) {
  HalfStage2<M> out;
  out.values.reserve(m.size2());
  out.policy.reserve(m.size2());
  for (std::size_t x = 0; x < m.size2(); ++x) {
    const typename M::Action1* hint = hint_policy ? m.hint_for(x, *hint_policy) : nullptr;
    auto c = m.maximize2(x, j1, hint);
    out.values.push_back(std::move(c.value));
    out.policy.push_back(std::move(c.action));
  }
  return out;
}

/// ||(J1, J2) - (T1 J2, T2 J1)|| in the product norm.
template <SeparatedModel M>
double bellman_residual(const M& m, const typename M::Table1& j1, const typename M::Table2& j2) {
  const auto t1 = apply_T1(m, j2);
  const auto t2 = apply_T2(m, j1, &t1.policy);
  return std::max(m.distance1(j1, t1.values), m.distance2(j2, t2.values));
}

template <SeparatedModel M>
struct ValueIterationResult {
  typename M::Table1 j1;
  typename M::Table2 j2;
  std::vector<typename M::Action1> mu;
  std::vector<typename M::Action2> nu;
  std::size_t iterations = 0;
  /// residuals[k] = ||x_k - T x_k|| for each sweep k.
  std::vector<double> residuals;
};

/// Jacobi sweeps (J1, J2) <- (T1 J2, T2 J1) until the product-norm change is
/// at most `tol`. Throws MaxItersExceeded otherwise.
template <SeparatedModel M>
ValueIterationResult<M> value_iterate(const M& m, typename M::Table1 j1, typename M::Table2 j2,
                                      double tol = 1e-8, std::size_t max_iters = 1'000'000) {
  if (!(tol > 0.0)) throw std::invalid_argument("value_iterate: tol must be positive");
  ValueIterationResult<M> out;
  for (std::size_t k = 0; k < max_iters; ++k) {
    auto t1 = apply_T1(m, j2);
    auto t2 = apply_T2(m, j1, &t1.policy);
    const double change = std::max(m.distance1(j1, t1.values), m.distance2(j2, t2.values));
    out.residuals.push_back(change);
    j1 = std::move(t1.values);
    j2 = std::move(t2.values);
    out.mu = std::move(t1.policy);
    out.nu = std::move(t2.policy);
    if (change <= tol) {
      out.iterations = k + 1;
      out.j1 = std::move(j1);
      out.j2 = std::move(j2);
      return out;
    }
  }
  throw MaxItersExceeded("value_iterate: residual " + std::to_string(out.residuals.back()) +
                         " > tol after " + std::to_string(max_iters) + " sweeps");
}

template <SeparatedModel M>
ValueIterationResult<M> value_iterate(const M& m, double tol = 1e-8,
                                      std::size_t max_iters = 1'000'000) {
  return value_iterate(m, zero_table1(m), zero_table2(m), tol, max_iters);
}

/// Fixed point of T_{mu,nu} by iteration to `tol`.
template <SeparatedModel M>
std::pair<typename M::Table1, typename M::Table2> evaluate_policy_pair(
    const M& m, const std::vector<typename M::Action1>& mu,
    const std::vector<typename M::Action2>& nu, typename M::Table1 j1, typename M::Table2 j2,
    double tol = 1e-12, std::size_t max_iters = 1'000'000) {
  for (std::size_t k = 0; k < max_iters; ++k) {
    auto n1 = apply_T1_mu(m, mu, j2);
    auto n2 = apply_T2_nu(m, nu, j1);
    const double change = std::max(m.distance1(j1, n1), m.distance2(j2, n2));
    j1 = std::move(n1);
    j2 = std::move(n2);
    if (change <= tol) return {std::move(j1), std::move(j2)};
  }
  throw MaxItersExceeded("evaluate_policy_pair: no convergence");
}

/// Largest observed ratio ||T_{mu,nu} a - T_{mu,nu} b|| / ||a - b|| over
/// `samples` random table pairs and random policy pairs. Valid models give at
/// most alpha.
double estimate_modulus(const SeparatedProblem& problem, std::size_t samples, std::uint64_t seed);

struct MonotoneCheck {
  bool ok = true;
  std::string witness;
};

/// Samples J <= J' and policies, and checks T_{1,mu} J2 <= T_{1,mu} J2' and
/// T_{2,nu} J1 <= T_{2,nu} J1' pointwise.
MonotoneCheck check_monotone(const SeparatedProblem& problem, std::size_t samples,
                             std::uint64_t seed);

}  // namespace minimaxpi
