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

#include "minimaxpi/async_pi.hpp"

#include <charconv>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace minimaxpi {
namespace {

std::vector<std::size_t> iota_vector(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

std::vector<std::vector<std::size_t>> contiguous_blocks(std::size_t n, std::size_t p) {
  p = std::max<std::size_t>(1, std::min(p, n));
  std::vector<std::vector<std::size_t>> out(p);
  for (std::size_t b = 0; b < p; ++b) {
    const std::size_t lo = b * n / p;
    const std::size_t hi = (b + 1) * n / p;
    for (std::size_t x = lo; x < hi; ++x) out[b].push_back(x);
  }
  return out;
}

// Splits "key=value,key=value" into a map. Everything after "inner=" is kept
// verbatim so nested specs may contain commas.
std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eq = text.find('=', pos);
    if (eq == std::string::npos) throw std::invalid_argument("schedule: expected key=value");
    const std::string key = text.substr(pos, eq - pos);
    if (key == "inner") {
      out[key] = text.substr(eq + 1);
      break;
    }
    std::size_t end = text.find(',', eq);
    if (end == std::string::npos) end = text.size();
    out[key] = text.substr(eq + 1, end - eq - 1);
    pos = end + 1;
  }
  return out;
}

std::uint64_t parse_uint(const std::map<std::string, std::string>& params, const std::string& key,
                         std::uint64_t fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::uint64_t v = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("schedule: bad value for " + key + ": " + s);
  }
  return v;
}

void check_keys(const std::map<std::string, std::string>& params,
                std::initializer_list<const char*> allowed, const std::string& name) {
  for (const auto& [k, v] : params) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw std::invalid_argument("schedule " + name + ": unknown parameter " + k);
    }
  }
}

}  // namespace

std::string to_string(OpKind kind) {
  switch (kind) {
    case OpKind::kMinEval:
      return "min_eval";
    case OpKind::kMinImprove:
      return "min_improve";
    case OpKind::kMaxEval:
      return "max_eval";
    case OpKind::kMaxImprove:
      return "max_improve";
  }
  return "unknown";
}

RoundRobinSchedule::RoundRobinSchedule(std::size_t size1, std::size_t size2, std::size_t k)
    : all1_(iota_vector(size1)), all2_(iota_vector(size2)), k_(k) {}

Operation RoundRobinSchedule::next() {
  const std::size_t period = 2 * k_ + 2;
  const std::size_t i = pos_++ % period;
  if (i == 0) return {OpKind::kMinImprove, all1_, 0};
  if (i == 1) return {OpKind::kMaxImprove, all2_, 0};
  return (i % 2 == 0) ? Operation{OpKind::kMinEval, all1_, 0}
                      : Operation{OpKind::kMaxEval, all2_, 0};
}

std::string RoundRobinSchedule::describe() const {
  return "round_robin:k=" + std::to_string(k_);
}

PartitionedSchedule::PartitionedSchedule(std::size_t size1, std::size_t size2, std::size_t p,
                                         std::size_t k)
    : k_(k), per_block_(2 * k + 2) {
  if (p == 0) throw std::invalid_argument("partitioned schedule: p must be positive");
  const std::size_t blocks = std::min({p, size1, size2});
  blocks1_ = contiguous_blocks(size1, blocks);
  blocks2_ = contiguous_blocks(size2, blocks);
}

Operation PartitionedSchedule::next() {
  const std::size_t period = per_block_ * blocks1_.size();
  const std::size_t i = pos_++ % period;
  const std::size_t b = i / per_block_;
  const std::size_t j = i % per_block_;
  if (j == 0) return {OpKind::kMinImprove, blocks1_[b], b};
  if (j == 1) return {OpKind::kMaxImprove, blocks2_[b], b};
  return (j % 2 == 0) ? Operation{OpKind::kMinEval, blocks1_[b], b}
                      : Operation{OpKind::kMaxEval, blocks2_[b], b};
}

std::string PartitionedSchedule::describe() const {
  return "partitioned:p=" + std::to_string(blocks1_.size()) + ",k=" + std::to_string(k_);
}

RandomFairSchedule::RandomFairSchedule(std::size_t size1, std::size_t size2, std::uint64_t seed,
                                       std::size_t k)
    : size1_(size1), size2_(size2), seed_(seed), k_(k), rng_(seed) {}

std::size_t RandomFairSchedule::fairness_horizon() const {
  // An epoch holds at most size1 + size2 operations per pass and 2 + k
  // passes; a window of two epochs contains a full epoch.
  return 2 * (size1_ + size2_) * (k_ + 2);
}

void RandomFairSchedule::refill() {
  auto add_partition = [&](OpKind kind, std::size_t n) {
    std::vector<std::size_t> states = iota_vector(n);
    std::shuffle(states.begin(), states.end(), rng_);
    const std::size_t max_blocks = std::min<std::size_t>(n, 4);
    const std::size_t blocks = std::uniform_int_distribution<std::size_t>(1, max_blocks)(rng_);
    auto parts = contiguous_blocks(n, blocks);
    for (std::size_t b = 0; b < parts.size(); ++b) {
      Operation op{kind, {}, b};
      for (std::size_t i : parts[b]) op.subset.push_back(states[i]);
      std::sort(op.subset.begin(), op.subset.end());
      epoch_.push_back(std::move(op));
    }
  };
  add_partition(OpKind::kMinImprove, size1_);
  add_partition(OpKind::kMaxImprove, size2_);
  const std::size_t extra = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, k_))(rng_);
  for (std::size_t r = 0; r < extra; ++r) {
    add_partition(OpKind::kMinEval, size1_);
    add_partition(OpKind::kMaxEval, size2_);
  }
  std::vector<Operation> ops(std::make_move_iterator(epoch_.begin()),
                             std::make_move_iterator(epoch_.end()));
  std::shuffle(ops.begin(), ops.end(), rng_);
  epoch_.assign(std::make_move_iterator(ops.begin()), std::make_move_iterator(ops.end()));
}

Operation RandomFairSchedule::next() {
  if (epoch_.empty()) refill();
  Operation op = std::move(epoch_.front());
  epoch_.pop_front();
  return op;
}

std::string RandomFairSchedule::describe() const {
  return "random:seed=" + std::to_string(seed_) + ",k=" + std::to_string(k_);
}

ScheduleSpec make_schedule(const std::string& spec, std::size_t size1, std::size_t size2) {
  const std::size_t colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const auto params =
      colon == std::string::npos ? std::map<std::string, std::string>{} : parse_params(spec.substr(colon + 1));
  ScheduleSpec out;
  if (name == "round_robin") {
    check_keys(params, {"k"}, name);
    out.schedule = std::make_unique<RoundRobinSchedule>(size1, size2, parse_uint(params, "k", 10));
  } else if (name == "partitioned") {
    check_keys(params, {"p", "k"}, name);
    out.schedule = std::make_unique<PartitionedSchedule>(size1, size2, parse_uint(params, "p", 4),
                                                         parse_uint(params, "k", 3));
  } else if (name == "random") {
    check_keys(params, {"seed", "k"}, name);
    out.schedule = std::make_unique<RandomFairSchedule>(size1, size2, parse_uint(params, "seed", 0),
                                                        parse_uint(params, "k", 3));
  } else if (name == "delayed") {
    check_keys(params, {"B", "inner"}, name);
    const auto it = params.find("inner");
    out = make_schedule(it == params.end() ? "round_robin" : it->second, size1, size2);
    if (out.staleness_bound != 0) throw std::invalid_argument("schedule: nested delayed");
    out.staleness_bound = parse_uint(params, "B", 3);
  } else {
    throw std::invalid_argument("unknown schedule: " + spec);
  }
  return out;
}

QState zero_qstate(const SeparatedProblem& problem) {
  QState s;
  s.v1.assign(problem.size1(), 0.0);
  s.v2.assign(problem.size2(), 0.0);
  for (std::size_t x = 0; x < problem.size1(); ++x) s.q1.emplace_back(problem.actions1[x], 0.0);
  for (std::size_t x = 0; x < problem.size2(); ++x) s.q2.emplace_back(problem.actions2[x], 0.0);
  return s;
}

namespace {

ValueTable upper_q(const SeparatedProblem& p, const std::vector<std::size_t>& nu,
                   const QState& s) {
  ValueTable out(p.size2());
  for (std::size_t x = 0; x < p.size2(); ++x) out[x] = std::max(s.v2[x], s.q2[x][nu[x]]);
  return out;
}

ValueTable lower_q(const SeparatedProblem& p, const std::vector<std::size_t>& mu,
                   const QState& s) {
  ValueTable out(p.size1());
  for (std::size_t x = 0; x < p.size1(); ++x) out[x] = std::min(s.v1[x], s.q1[x][mu[x]]);
  return out;
}

}  // namespace

QState apply_G(const SeparatedProblem& problem, const PolicyPair& policies, const QState& s) {
  const ValueTable upper = upper_q(problem, policies.nu, s);
  const ValueTable lower = lower_q(problem, policies.mu, s);
  QState out = zero_qstate(problem);
  for (std::size_t x = 0; x < problem.size1(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < problem.actions1[x]; ++u) {
      out.q1[x][u] = problem.eval1(x, u, upper);
      best = std::min(best, out.q1[x][u]);
    }
    out.v1[x] = best;
  }
  for (std::size_t x = 0; x < problem.size2(); ++x) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < problem.actions2[x]; ++v) {
      out.q2[x][v] = problem.eval2(x, v, lower);
      best = std::max(best, out.q2[x][v]);
    }
    out.v2[x] = best;
  }
  return out;
}

double q_distance(const SeparatedProblem& problem, const QState& a, const QState& b) {
  double out = std::max(problem.space1.distance(a.v1, b.v1), problem.space2.distance(a.v2, b.v2));
  for (std::size_t x = 0; x < problem.size1(); ++x) {
    for (std::size_t u = 0; u < a.q1[x].size(); ++u) {
      out = std::max(out, std::abs(a.q1[x][u] - b.q1[x][u]) / problem.space1.weight(x));
    }
  }
  for (std::size_t x = 0; x < problem.size2(); ++x) {
    for (std::size_t v = 0; v < a.q2[x].size(); ++v) {
      out = std::max(out, std::abs(a.q2[x][v] - b.q2[x][v]) / problem.space2.weight(x));
    }
  }
  return out;
}

QState G_fixed_point(const SeparatedProblem& problem, const PolicyPair& policies, double tol,
                     std::size_t max_iters) {
  QState s = zero_qstate(problem);
  for (std::size_t k = 0; k < max_iters; ++k) {
    QState n = apply_G(problem, policies, s);
    const double change = q_distance(problem, s, n);
    s = std::move(n);
    if (change <= tol) return s;
  }
  throw MaxItersExceeded("G_fixed_point: no convergence");
}

GOperator build_G(const SeparatedProblem& problem, PolicyPair policies) {
  return GOperator(problem, std::move(policies));
}

namespace {

PolicyPair random_pair(const SeparatedProblem& p, std::mt19937_64& rng) {
  PolicyPair out;
  for (std::size_t x = 0; x < p.size1(); ++x) {
    out.mu.push_back(std::uniform_int_distribution<std::size_t>(0, p.actions1[x] - 1)(rng));
  }
  for (std::size_t x = 0; x < p.size2(); ++x) {
    out.nu.push_back(std::uniform_int_distribution<std::size_t>(0, p.actions2[x] - 1)(rng));
  }
  return out;
}

QState random_qstate(const SeparatedProblem& p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  QState s = zero_qstate(p);
  for (std::size_t x = 0; x < p.size1(); ++x) {
    s.v1[x] = d(rng) * p.space1.weight(x);
    for (double& q : s.q1[x]) q = d(rng) * p.space1.weight(x);
  }
  for (std::size_t x = 0; x < p.size2(); ++x) {
    s.v2[x] = d(rng) * p.space2.weight(x);
    for (double& q : s.q2[x]) q = d(rng) * p.space2.weight(x);
  }
  return s;
}

}  // namespace

UniformContractionReport verify_uniform_contraction(const SeparatedProblem& problem,
                                                    std::size_t samples, std::uint64_t seed) {
  problem.validate();
  std::mt19937_64 rng(seed);
  UniformContractionReport report;
  for (std::size_t s = 0; s < samples; ++s) {
    const PolicyPair pol = random_pair(problem, rng);
    const QState a = random_qstate(problem, rng);
    const QState b = random_qstate(problem, rng);
    const double before = q_distance(problem, a, b);
    if (!(before > 0.0)) continue;
    const double after = q_distance(problem, apply_G(problem, pol, a), apply_G(problem, pol, b));
    const double ratio = after / before;
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (ratio > problem.alpha + 1e-10) {
      std::ostringstream msg;
      msg << "sample " << s << ": ||G a - G b|| / ||a - b|| = " << ratio << " exceeds alpha "
          << problem.alpha;
      throw ContractionViolation(msg.str());
    }
  }
  std::vector<QState> fixed;
  for (int i = 0; i < 5; ++i) fixed.push_back(G_fixed_point(problem, random_pair(problem, rng)));
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    for (std::size_t j = i + 1; j < fixed.size(); ++j) {
      report.fixed_point_spread =
          std::max(report.fixed_point_spread, q_distance(problem, fixed[i], fixed[j]));
    }
  }
  if (report.fixed_point_spread > 1e-8) {
    throw ContractionViolation("fixed point of G depends on the policies (spread " +
                               std::to_string(report.fixed_point_spread) + ")");
  }
  return report;
}

ExtendedState initial_extended_state(const SeparatedProblem& problem) {
  ExtendedState s;
  s.q = zero_qstate(problem);
  s.policies.mu.assign(problem.size1(), 0);
  s.policies.nu.assign(problem.size2(), 0);
  return s;
}

void extended_step(const SeparatedProblem& problem, ExtendedState& state, OpKind kind,
                   std::span<const std::size_t> subset) {
  QState& q = state.q;
  switch (kind) {
    case OpKind::kMinEval:
    case OpKind::kMinImprove: {
      const ValueTable upper = upper_q(problem, state.policies.nu, q);
      for (std::size_t x : subset) {
        std::size_t arg = 0;
        for (std::size_t u = 0; u < problem.actions1[x]; ++u) {
          q.q1[x][u] = problem.eval1(x, u, upper);
          if (q.q1[x][u] < q.q1[x][arg]) arg = u;
        }
        if (kind == OpKind::kMinImprove) {
          q.v1[x] = q.q1[x][arg];
          state.policies.mu[x] = arg;
        }
      }
      break;
    }
    case OpKind::kMaxEval:
    case OpKind::kMaxImprove: {
      const ValueTable lower = lower_q(problem, state.policies.mu, q);
      for (std::size_t x : subset) {
        std::size_t arg = 0;
        for (std::size_t v = 0; v < problem.actions2[x]; ++v) {
          q.q2[x][v] = problem.eval2(x, v, lower);
          if (q.q2[x][v] > q.q2[x][arg]) arg = v;
        }
        if (kind == OpKind::kMaxImprove) {
          q.v2[x] = q.q2[x][arg];
          state.policies.nu[x] = arg;
        }
      }
      break;
    }
  }
}

MonotoneCheck check_minmax_nonexpansive(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t n = size(rng);
    std::vector<double> weights(n);
    for (double& x : weights) x = w(rng);
    const WeightedSpace sp(weights);
    ValueTable a(n), b(n), c(n), e(n), lo1(n), lo2(n), hi1(n), hi2(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = d(rng);
      b[i] = d(rng);
      c[i] = d(rng);
      e[i] = d(rng);
      lo1[i] = std::min(a[i], b[i]);
      lo2[i] = std::min(c[i], e[i]);
      hi1[i] = std::max(a[i], b[i]);
      hi2[i] = std::max(c[i], e[i]);
    }
    const double bound = std::max(sp.distance(a, c), sp.distance(b, e));
    const double dmin = sp.distance(lo1, lo2);
    const double dmax = sp.distance(hi1, hi2);
    if (dmin > bound + 1e-12 || dmax > bound + 1e-12) {
      std::ostringstream msg;
      msg << "sample " << s << ": min distance " << dmin << ", max distance " << dmax
          << ", bound " << bound;
      return {false, msg.str()};
    }
  }
  return {};
}

}  // namespace minimaxpi
