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

#include "minimaxpi/core.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace minimaxpi {

WeightedSpace::WeightedSpace(std::size_t size) : weights_(size, 1.0) {}

WeightedSpace::WeightedSpace(std::vector<double> weights) : weights_(std::move(weights)) {
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw ValidationError("weights[" + std::to_string(i) + "]",
                            "weight must be positive and finite");
    }
  }
}

bool WeightedSpace::unit_weights() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; });
}

double WeightedSpace::norm(std::span<const double> j) const {
  if (j.size() != weights_.size()) throw std::invalid_argument("norm: table size mismatch");
  double out = 0.0;
  for (std::size_t x = 0; x < j.size(); ++x) out = std::max(out, std::abs(j[x]) / weights_[x]);
  return out;
}

double WeightedSpace::distance(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != weights_.size() || b.size() != weights_.size()) {
    throw std::invalid_argument("distance: table size mismatch");
  }
  double out = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    out = std::max(out, std::abs(a[x] - b[x]) / weights_[x]);
  }
  return out;
}

double weighted_sup_norm(const WeightedSpace& space, std::span<const double> j) {
  return space.norm(j);
}

double weighted_sup_norm(const WeightedSpace& space1, std::span<const double> j1,
                         const WeightedSpace& space2, std::span<const double> j2) {
  return std::max(space1.norm(j1), space2.norm(j2));
}

void SeparatedProblem::validate() const {
  if (space1.size() == 0 || space2.size() == 0) {
    throw ValidationError("space", "state spaces must be nonempty");
  }
  if (actions1.size() != space1.size()) {
    throw ValidationError("actions1", "expected one entry per state of X1");
  }
  if (actions2.size() != space2.size()) {
    throw ValidationError("actions2", "expected one entry per state of X2");
  }
  for (std::size_t x = 0; x < actions1.size(); ++x) {
    if (actions1[x] == 0) {
      throw ValidationError("actions1[" + std::to_string(x) + "]", "empty action set");
    }
  }
  for (std::size_t x = 0; x < actions2.size(); ++x) {
    if (actions2[x] == 0) {
      throw ValidationError("actions2[" + std::to_string(x) + "]", "empty action set");
    }
  }
  if (!eval1 || !eval2) throw ValidationError("eval", "missing evaluator");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("alpha", "must lie in [0, 1)");
}

Choice<std::size_t, double> SeparatedProblem::minimize1(std::size_t x1,
                                                        const ValueTable& j2) const {
  Choice<std::size_t, double> best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t u = 0; u < actions1[x1]; ++u) {
    const double v = eval1(x1, u, j2);
    if (v < best.value) best = {v, u};
  }
  return best;
}

Choice<std::size_t, double> SeparatedProblem::maximize2(std::size_t x2, const ValueTable& j1,
                                                        const std::size_t*) const {
  Choice<std::size_t, double> best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t v = 0; v < actions2[x2]; ++v) {
    const double h = eval2(x2, v, j1);
    if (h > best.value) best = {h, v};
  }
  return best;
}

namespace {

ValueTable random_table(const WeightedSpace& space, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  ValueTable out(space.size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = dist(rng) * space.weight(x);
  return out;
}

// b = a + c * s * xi with a random sign pattern s; attains the sup-norm
// modulus of linear maps.
ValueTable sign_perturbation(const WeightedSpace& space, const ValueTable& a, std::mt19937_64& rng,
                             double c) {
  std::bernoulli_distribution coin(0.5);
  ValueTable out = a;
  for (std::size_t x = 0; x < out.size(); ++x) {
    out[x] += (coin(rng) ? c : -c) * space.weight(x);
  }
  return out;
}

PolicyPair random_policies(const SeparatedProblem& p, std::mt19937_64& rng) {
  PolicyPair out;
  out.mu.resize(p.size1());
  out.nu.resize(p.size2());
  for (std::size_t x = 0; x < p.size1(); ++x) {
    out.mu[x] = std::uniform_int_distribution<std::size_t>(0, p.actions1[x] - 1)(rng);
  }
  for (std::size_t x = 0; x < p.size2(); ++x) {
    out.nu[x] = std::uniform_int_distribution<std::size_t>(0, p.actions2[x] - 1)(rng);
  }
  return out;
}

}  // namespace

double estimate_modulus(const SeparatedProblem& problem, std::size_t samples,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.01, 10.0);
  double worst = 0.0;
  std::size_t usable = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const PolicyPair pol = random_policies(problem, rng);
    ValueTable a1 = random_table(problem.space1, rng, 10.0);
    ValueTable a2 = random_table(problem.space2, rng, 10.0);
    ValueTable b1;
    ValueTable b2;
    if (s % 2 == 0) {
      b1 = random_table(problem.space1, rng, 10.0);
      b2 = random_table(problem.space2, rng, 10.0);
    } else {
      const double c = mag(rng);
      b1 = sign_perturbation(problem.space1, a1, rng, c);
      b2 = sign_perturbation(problem.space2, a2, rng, c);
    }
    const double before = std::max(problem.distance1(a1, b1), problem.distance2(a2, b2));
    if (!(before > 0.0)) continue;
    ++usable;
    const double after =
        std::max(problem.distance1(apply_T1_mu(problem, pol.mu, a2),
                                   apply_T1_mu(problem, pol.mu, b2)),
                 problem.distance2(apply_T2_nu(problem, pol.nu, a1),
                                   apply_T2_nu(problem, pol.nu, b1)));
    worst = std::max(worst, after / before);
  }
  if (usable == 0) throw DegeneratePair("estimate_modulus: every sampled pair had zero distance");
  return worst;
}

MonotoneCheck check_monotone(const SeparatedProblem& problem, std::size_t samples,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> bump(0.0, 5.0);
  MonotoneCheck out;
  for (std::size_t s = 0; s < samples; ++s) {
    const PolicyPair pol = random_policies(problem, rng);
    ValueTable lo1 = random_table(problem.space1, rng, 10.0);
    ValueTable lo2 = random_table(problem.space2, rng, 10.0);
    ValueTable hi1 = lo1;
    ValueTable hi2 = lo2;
    for (double& v : hi1) v += bump(rng);
    for (double& v : hi2) v += bump(rng);
    const ValueTable t1_lo = apply_T1_mu(problem, pol.mu, lo2);
    const ValueTable t1_hi = apply_T1_mu(problem, pol.mu, hi2);
    const ValueTable t2_lo = apply_T2_nu(problem, pol.nu, lo1);
    const ValueTable t2_hi = apply_T2_nu(problem, pol.nu, hi1);
    constexpr double kSlack = 1e-12;
    for (std::size_t x = 0; x < problem.size1(); ++x) {
      if (t1_lo[x] > t1_hi[x] + kSlack * (1.0 + std::abs(t1_hi[x]))) {
        std::ostringstream msg;
        msg << "sample " << s << ": H1 at x1=" << x << ", u=" << pol.mu[x] << " gave "
            << t1_lo[x] << " > " << t1_hi[x] << " for a larger J2";
        return {false, msg.str()};
      }
    }
    for (std::size_t x = 0; x < problem.size2(); ++x) {
      if (t2_lo[x] > t2_hi[x] + kSlack * (1.0 + std::abs(t2_hi[x]))) {
        std::ostringstream msg;
        msg << "sample " << s << ": H2 at x2=" << x << ", v=" << pol.nu[x] << " gave "
            << t2_lo[x] << " > " << t2_hi[x] << " for a larger J1";
        return {false, msg.str()};
      }
    }
  }
  return out;
}

}  // namespace minimaxpi
