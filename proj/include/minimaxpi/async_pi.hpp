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
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "minimaxpi/core.hpp"
#include "minimaxpi/errors.hpp"

namespace minimaxpi {

enum class OpKind { kMinEval, kMinImprove, kMaxEval, kMaxImprove };

std::string to_string(OpKind kind);

/// One asynchronous operation applied to `subset` of X1 (minimizer kinds) or
/// X2 (maximizer kinds). `subset_id` labels the block for traces.
struct Operation {
  OpKind kind = OpKind::kMinEval;
  std::vector<std::size_t> subset;
  std::size_t subset_id = 0;
};

/// Tables and policies of the asynchronous algorithm. J are the current
/// cost estimates, V the values recorded at the last improvement.
template <SeparatedModel M>
struct AlgoState {
  typename M::Table1 j1;
  typename M::Table1 v1;
  typename M::Table2 j2;
  typename M::Table2 v2;
  std::vector<typename M::Action1> mu;
  std::vector<typename M::Action2> nu;
};

/// Zero tables and the first action everywhere.
template <SeparatedModel M>
AlgoState<M> initial_state(const M& m) {
  AlgoState<M> s;
  s.j1 = zero_table1(m);
  s.v1 = s.j1;
  s.j2 = zero_table2(m);
  s.v2 = s.j2;
  for (std::size_t x = 0; x < m.size1(); ++x) s.mu.push_back(m.initial_action1(x));
  for (std::size_t x = 0; x < m.size2(); ++x) s.nu.push_back(m.initial_action2(x));
  return s;
}

/// max[V2, J2], the table the minimizer sees.
template <SeparatedModel M>
typename M::Table2 upper_table(const M& m, const AlgoState<M>& s) {
  typename M::Table2 out;
  out.reserve(m.size2());
  for (std::size_t x = 0; x < m.size2(); ++x) out.push_back(m.upper2(s.v2[x], s.j2[x]));
  return out;
}

/// min[V1, J1], the table the maximizer sees.
template <SeparatedModel M>
typename M::Table1 lower_table(const M& m, const AlgoState<M>& s) {
  typename M::Table1 out(m.size1());
  for (std::size_t x = 0; x < m.size1(); ++x) out[x] = std::min(s.v1[x], s.j1[x]);
  return out;
}

namespace detail {

// Runs body(i) for i in [0, n), splitting the range across `threads`.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  threads = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Applies `op` to `state`. Tables of the other player are read from `read`
/// (which may be an older snapshot, or `state` itself); the player's own
/// policy is read from `state`. Work on the subset can be split across
/// `threads`; results are committed in subset order, so the outcome does not
/// depend on the thread count.
template <SeparatedModel M>
void apply_operation(const M& m, AlgoState<M>& state, const AlgoState<M>& read,
                     const Operation& op, std::size_t threads = 1) {
  const auto& subset = op.subset;
  switch (op.kind) {
    case OpKind::kMinEval: {
      const auto upper = upper_table(m, read);
      std::vector<double> vals(subset.size());
      detail::parallel_for(subset.size(), threads, [&](std::size_t i) {
        vals[i] = m.h1(subset[i], state.mu[subset[i]], upper);
      });
      for (std::size_t i = 0; i < subset.size(); ++i) state.j1[subset[i]] = vals[i];
      break;
    }
    case OpKind::kMinImprove: {
      const auto upper = upper_table(m, read);
      std::vector<std::optional<Choice<typename M::Action1, double>>> res(subset.size());
      detail::parallel_for(subset.size(), threads, [&](std::size_t i) {
        res[i].emplace(m.minimize1(subset[i], upper));
      });
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const std::size_t x = subset[i];
        state.j1[x] = res[i]->value;
        state.v1[x] = res[i]->value;
        state.mu[x] = std::move(res[i]->action);
      }
      break;
    }
    case OpKind::kMaxEval: {
      const auto lower = lower_table(m, read);
      std::vector<std::optional<typename M::Value2>> vals(subset.size());
      detail::parallel_for(subset.size(), threads, [&](std::size_t i) {
        vals[i].emplace(m.h2(subset[i], state.nu[subset[i]], lower));
      });
      for (std::size_t i = 0; i < subset.size(); ++i) state.j2[subset[i]] = std::move(*vals[i]);
      break;
    }
    case OpKind::kMaxImprove: {
      const auto lower = lower_table(m, read);
      std::vector<std::optional<Choice<typename M::Action2, typename M::Value2>>> res(
          subset.size());
      detail::parallel_for(subset.size(), threads, [&](std::size_t i) {
        res[i].emplace(m.maximize2(subset[i], lower, m.hint_for(subset[i], read.mu)));
      });
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const std::size_t x = subset[i];
        state.j2[x] = res[i]->value;
        state.v2[x] = std::move(res[i]->value);
        state.nu[x] = std::move(res[i]->action);
      }
      break;
    }
  }
}

/// J1(x) = H1(x, mu(x), max[V2, J2]) on `subset`.
template <SeparatedModel M>
AlgoState<M> min_eval_step(const M& m, AlgoState<M> s, std::span<const std::size_t> subset) {
  apply_operation(m, s, s, {OpKind::kMinEval, {subset.begin(), subset.end()}, 0});
  return s;
}

/// J1(x) = V1(x) = min_u H1(x, u, max[V2, J2]) and mu(x) = argmin on `subset`.
template <SeparatedModel M>
AlgoState<M> min_improve_step(const M& m, AlgoState<M> s, std::span<const std::size_t> subset) {
  apply_operation(m, s, s, {OpKind::kMinImprove, {subset.begin(), subset.end()}, 0});
  return s;
}

/// J2(x) = H2(x, nu(x), min[V1, J1]) on `subset`.
template <SeparatedModel M>
AlgoState<M> max_eval_step(const M& m, AlgoState<M> s, std::span<const std::size_t> subset) {
  apply_operation(m, s, s, {OpKind::kMaxEval, {subset.begin(), subset.end()}, 0});
  return s;
}

/// J2(x) = V2(x) = max_v H2(x, v, min[V1, J1]) and nu(x) = argmax on `subset`.
template <SeparatedModel M>
AlgoState<M> max_improve_step(const M& m, AlgoState<M> s, std::span<const std::size_t> subset) {
  apply_operation(m, s, s, {OpKind::kMaxImprove, {subset.begin(), subset.end()}, 0});
  return s;
}

/// Infinite operation sequence.
class Schedule {
 public:
  virtual ~Schedule() = default;
  virtual Operation next() = 0;
  /// Every state of each space receives every operation kind at least once in
  /// any window of this many consecutive operations.
  virtual std::size_t fairness_horizon() const = 0;
  virtual std::string describe() const = 0;
};

/// Repeats: MinImprove(X1), MaxImprove(X2), then k times MinEval(X1),
/// MaxEval(X2).
class RoundRobinSchedule : public Schedule {
 public:
  RoundRobinSchedule(std::size_t size1, std::size_t size2, std::size_t k);
  Operation next() override;
  std::size_t fairness_horizon() const override { return 2 * k_ + 2; }
  std::string describe() const override;

 private:
  std::vector<std::size_t> all1_;
  std::vector<std::size_t> all2_;
  std::size_t k_;
  std::size_t pos_ = 0;
};

/// Cycles over p contiguous blocks of each space. For block b: MinImprove,
/// MaxImprove, then k rounds of MinEval, MaxEval, all restricted to block b.
class PartitionedSchedule : public Schedule {
 public:
  PartitionedSchedule(std::size_t size1, std::size_t size2, std::size_t p, std::size_t k);
  Operation next() override;
  std::size_t fairness_horizon() const override { return 2 * per_block_ * blocks1_.size(); }
  std::string describe() const override;

 private:
  std::vector<std::vector<std::size_t>> blocks1_;
  std::vector<std::vector<std::size_t>> blocks2_;
  std::size_t k_;
  std::size_t per_block_;
  std::size_t pos_ = 0;
};

/// Seeded random schedule in epochs. Each epoch covers every state with every
/// kind through random partitions (plus up to k extra evaluation passes) in
/// shuffled order, so fairness holds with horizon two epochs.
class RandomFairSchedule : public Schedule {
 public:
  RandomFairSchedule(std::size_t size1, std::size_t size2, std::uint64_t seed, std::size_t k);
  Operation next() override;
  std::size_t fairness_horizon() const override;
  std::string describe() const override;

 private:
  void refill();

  std::size_t size1_;
  std::size_t size2_;
  std::uint64_t seed_;
  std::size_t k_;
  std::mt19937_64 rng_;
  std::deque<Operation> epoch_;
};

struct ScheduleSpec {
  std::unique_ptr<Schedule> schedule;
  /// Maximum age, in steps, of the tables an operation reads.
  std::size_t staleness_bound = 0;
};

/// Parses "round_robin[:k=K]", "partitioned[:p=P[,k=K]]", "random[:seed=S[,k=K]]"
/// and "delayed:B=N[,inner=<spec>]". Throws std::invalid_argument.
ScheduleSpec make_schedule(const std::string& spec, std::size_t size1, std::size_t size2);

struct RunOptions {
  double tol = 1e-8;
  std::size_t max_steps = 1'000'000;
  /// Tables of the other player are read from a snapshot up to this many
  /// steps old, with the age drawn uniformly per step.
  std::size_t staleness_bound = 0;
  std::uint64_t delay_seed = 0;
  /// Residuals are computed before the first step and after every
  /// check_every steps.
  std::size_t check_every = 1;
  std::size_t threads = 1;
  bool record_trace = true;
};

struct TraceRow {
  std::size_t step = 0;
  OpKind kind = OpKind::kMinEval;
  std::size_t subset_id = 0;
  /// ||J1 - T1 J2||, NaN when not computed at this step.
  double residual1 = std::numeric_limits<double>::quiet_NaN();
  /// ||J2 - T2 J1||, NaN when not computed at this step.
  double residual2 = std::numeric_limits<double>::quiet_NaN();
};

struct Residuals {
  double bellman1 = 0.0;
  double bellman2 = 0.0;
  double gap1 = 0.0;  // ||J1 - V1||
  double gap2 = 0.0;  // ||J2 - V2||

  double max() const { return std::max({bellman1, bellman2, gap1, gap2}); }
};

/// Models whose maximizer policy cannot be greedy at every X2 state (one
/// column per x over a continuum of strategies) set
/// `static constexpr bool kColumnPolicy2 = true`. Their J2 then tracks the
/// policy's Q-factor below V2 off the minimizer's path, so the X2 terms of
/// the stopping rule use max[V2, J2], the table the minimizer reads.
template <class M>
concept ColumnPolicy2 = M::kColumnPolicy2;

template <SeparatedModel M>
Residuals compute_residuals(const M& m, const AlgoState<M>& s) {
  Residuals r;
  const typename M::Table2* j2 = &s.j2;
  typename M::Table2 upper;
  if constexpr (ColumnPolicy2<M>) {
    upper = upper_table(m, s);
    j2 = &upper;
  }
  const auto t1 = apply_T1(m, *j2);
  const auto t2 = apply_T2(m, s.j1, &t1.policy);
  r.bellman1 = m.distance1(s.j1, t1.values);
  r.bellman2 = m.distance2(*j2, t2.values);
  r.gap1 = m.distance1(s.j1, s.v1);
  r.gap2 = m.distance2(*j2, s.v2);
  return r;
}

template <SeparatedModel M>
struct RunResult {
  AlgoState<M> state;
  std::vector<TraceRow> trace;
  std::size_t steps = 0;
  Residuals residuals;
};

/// Applies operations from `schedule` until the Bellman residual and both
/// J - V gaps are at most tol. Throws MaxItersExceeded after max_steps.
template <SeparatedModel M>
RunResult<M> run(const M& m, Schedule& schedule, const RunOptions& options,
                 AlgoState<M> state) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("run: tol must be positive");
  const std::size_t every = std::max<std::size_t>(1, options.check_every);
  RunResult<M> out;
  out.residuals = compute_residuals(m, state);
  if (out.residuals.max() <= options.tol) {
    out.state = std::move(state);
    return out;
  }
  std::mt19937_64 delay_rng(options.delay_seed);
  std::uniform_int_distribution<std::size_t> delay(0, options.staleness_bound);
  std::deque<AlgoState<M>> history;  // history.back() is the current state
  if (options.staleness_bound > 0) history.push_back(state);

  for (std::size_t step = 1; step <= options.max_steps; ++step) {
    const Operation op = schedule.next();
    if (options.staleness_bound > 0) {
      const std::size_t age = std::min(delay(delay_rng), history.size() - 1);
      const AlgoState<M>& read = history[history.size() - 1 - age];
      apply_operation(m, state, read, op, options.threads);
      history.push_back(state);
      while (history.size() > options.staleness_bound + 1) history.pop_front();
    } else {
      apply_operation(m, state, state, op, options.threads);
    }
    TraceRow row{step, op.kind, op.subset_id};
    bool done = false;
    if (step % every == 0) {
      out.residuals = compute_residuals(m, state);
      row.residual1 = out.residuals.bellman1;
      row.residual2 = out.residuals.bellman2;
      done = out.residuals.max() <= options.tol;
    }
    if (options.record_trace) out.trace.push_back(row);
    if (done) {
      out.steps = step;
      out.state = std::move(state);
      return out;
    }
  }
  throw MaxItersExceeded("run: residual " + std::to_string(out.residuals.max()) +
                         " above tol after " + std::to_string(options.max_steps) + " steps");
}

template <SeparatedModel M>
RunResult<M> run(const M& m, Schedule& schedule, const RunOptions& options = {}) {
  return run(m, schedule, options, initial_state(m));
}

/// V and Q tables of the extended operator G. q1[x1][u], q2[x2][v].
struct QState {
  ValueTable v1;
  ValueTable v2;
  std::vector<std::vector<double>> q1;
  std::vector<std::vector<double>> q2;
};

QState zero_qstate(const SeparatedProblem& problem);

/// G_{mu,nu}(V1, V2, Q1, Q2) = (M1, M2, F1, F2) with
///   F1(x1, u) = H1(x1, u, max[V2, Q2(., nu)]),  M1 = min_u F1
///   F2(x2, v) = H2(x2, v, min[V1, Q1(., mu)]),  M2 = max_v F2.
QState apply_G(const SeparatedProblem& problem, const PolicyPair& policies, const QState& s);

/// Weighted sup distance over all four components (Q entries use the weight
/// of their state).
double q_distance(const SeparatedProblem& problem, const QState& a, const QState& b);

/// Iterates G_{mu,nu} to change at most tol.
QState G_fixed_point(const SeparatedProblem& problem, const PolicyPair& policies,
                     double tol = 1e-13, std::size_t max_iters = 1'000'000);

/// Builds G_{mu,nu} as a callable.
class GOperator {
 public:
  GOperator(const SeparatedProblem& problem, PolicyPair policies)
      : problem_(&problem), policies_(std::move(policies)) {}
  QState operator()(const QState& s) const { return apply_G(*problem_, policies_, s); }
  const PolicyPair& policies() const { return policies_; }

 private:
  const SeparatedProblem* problem_;
  PolicyPair policies_;
};

GOperator build_G(const SeparatedProblem& problem, PolicyPair policies);

struct UniformContractionReport {
  double max_ratio = 0.0;
  /// Largest distance between fixed points of G for different policy pairs.
  double fixed_point_spread = 0.0;
};

/// Samples state pairs and policy pairs and checks ||G a - G b|| <= alpha
/// ||a - b||, then checks that the fixed point does not depend on the
/// policies (5 random pairs, 1e-8). Throws ContractionViolation with the
/// witness on failure.
UniformContractionReport verify_uniform_contraction(const SeparatedProblem& problem,
                                                    std::size_t samples, std::uint64_t seed);

/// Q-factor form of the asynchronous algorithm. Evaluations refresh Q on the
/// subset; improvements also record V = min/max Q and the policy.
struct ExtendedState {
  QState q;
  PolicyPair policies;
};

ExtendedState initial_extended_state(const SeparatedProblem& problem);

void extended_step(const SeparatedProblem& problem, ExtendedState& state, OpKind kind,
                   std::span<const std::size_t> subset);

/// Checks ||min[a,b] - min[c,d]|| <= max(||a-c||, ||b-d||) and the same for
/// max on random weighted tables.
MonotoneCheck check_minmax_nonexpansive(std::size_t samples, std::uint64_t seed);

}  // namespace minimaxpi
