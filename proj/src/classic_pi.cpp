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

#include "minimaxpi/classic_pi.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "minimaxpi/errors.hpp"

namespace minimaxpi {
namespace {

Signature mixed_signature(const std::vector<MixedStrategy>& mu,
                          const std::vector<MixedStrategy>& nu) {
  Signature sig;
  for (const auto& u : mu) append_signature(u, sig);
  for (const auto& v : nu) append_signature(v, sig);
  return sig;
}

Eigen::VectorXd as_vector(std::span<const double> p) {
  return Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
}

// Stage costs g and substochastic transition matrix P of a fixed pair.
void pair_dynamics(const DiscountedMarkovGame& game, const std::vector<MixedStrategy>& mu,
                   const std::vector<MixedStrategy>& nu, Eigen::VectorXd& g, Eigen::MatrixXd& p) {
  const auto nx = static_cast<Eigen::Index>(game.states());
  g.resize(nx);
  p.resize(nx, nx);
  for (Eigen::Index x = 0; x < nx; ++x) {
    const auto xs = static_cast<std::size_t>(x);
    const Eigen::VectorXd u = as_vector(mu[xs]);
    const Eigen::VectorXd v = as_vector(nu[xs]);
    g(x) = u.dot(game.payoff[xs] * v);
    for (Eigen::Index y = 0; y < nx; ++y) {
      p(x, y) = u.dot(game.transition[xs][static_cast<std::size_t>(y)] * v);
    }
  }
}

std::vector<MixedStrategy> initial_pure(std::size_t states, Eigen::Index n) {
  return std::vector<MixedStrategy>(states, pure_strategy(static_cast<std::size_t>(n), 0));
}

}  // namespace

std::string to_string(PIStatus status) {
  switch (status) {
    case PIStatus::kConverged:
      return "converged";
    case PIStatus::kCycled:
      return "cycled";
    case PIStatus::kMaxIters:
      return "max_iters";
  }
  return "unknown";
}

std::optional<std::size_t> detect_cycle(std::span<const Signature> history,
                                        bool values_converged) {
  if (values_converged || history.size() < 2) return std::nullopt;
  const std::size_t n = history.size();
  if (history[n - 1] == history[n - 2]) return std::nullopt;  // stationary
  for (std::size_t p = 2; 2 * p <= n; ++p) {
    bool periodic = true;
    for (std::size_t i = 0; i < p && periodic; ++i) {
      periodic = history[n - 1 - i] == history[n - 1 - i - p];
    }
    if (periodic) return p;
  }
  return std::nullopt;
}

ValueTable evaluate_mixed_pair(const DiscountedMarkovGame& game,
                               const std::vector<MixedStrategy>& mu,
                               const std::vector<MixedStrategy>& nu) {
  Eigen::VectorXd g;
  Eigen::MatrixXd p;
  pair_dynamics(game, mu, nu, g, p);
  const auto nx = static_cast<Eigen::Index>(game.states());
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(nx, nx) - game.alpha * p;
  const Eigen::VectorXd j = a.partialPivLu().solve(g);
  return ValueTable(j.data(), j.data() + nx);
}

ValueTable evaluate_against_best_response(const DiscountedMarkovGame& game,
                                          const std::vector<MixedStrategy>& mu, ValueTable j,
                                          double tol, std::size_t max_iters) {
  const WeightedSpace sp = game.space();
  if (j.empty()) j.assign(game.states(), 0.0);
  for (std::size_t k = 0; k < max_iters; ++k) {
    ValueTable next(game.states());
    for (std::size_t x = 0; x < game.states(); ++x) {
      next[x] = best_response_value(game.stage_matrix(x, j, game.alpha), mu[x]).first;
    }
    const double change = sp.distance(j, next);
    j = std::move(next);
    if (change <= tol) return j;
  }
  throw MaxItersExceeded("evaluate_against_best_response: no convergence");
}

GamePIResult hoffman_karp(const DiscountedMarkovGame& game, const PIOptions& options) {
  game.validate();
  const WeightedSpace sp = game.space();
  const double inner_tol = options.tol / 10.0;
  GamePIResult out;
  out.mu = initial_pure(game.states(), game.rows());
  out.nu = initial_pure(game.states(), game.cols());
  out.J = evaluate_against_best_response(game, out.mu, {}, inner_tol);
  out.history.push_back(mixed_signature(out.mu, {}));
  for (std::size_t t = 0; t < options.max_iters; ++t) {
    for (std::size_t x = 0; x < game.states(); ++x) {
      SaddleSolution s = solve_matrix_game(game.stage_matrix(x, out.J, game.alpha));
      out.mu[x] = std::move(s.u_star);
    }
    out.iterations = t + 1;
    out.history.push_back(mixed_signature(out.mu, {}));
    ValueTable next = evaluate_against_best_response(game, out.mu, out.J, inner_tol);
    const double change = sp.distance(next, out.J);
    out.trace.push_back(change);
    out.J = std::move(next);
    if (change <= options.tol) {
      out.status = PIStatus::kConverged;
      break;
    }
  }
  // Report the maximizer's optimal response to the final minimizer policy.
  for (std::size_t x = 0; x < game.states(); ++x) {
    const PayoffMatrix m = game.stage_matrix(x, out.J, game.alpha);
    out.nu[x] = pure_strategy(static_cast<std::size_t>(m.cols()),
                              best_response_value(m, out.mu[x]).second);
  }
  return out;
}

GamePIResult pollatschek_avi_itzhak(const DiscountedMarkovGame& game, const PIOptions& options) {
  game.validate();
  const WeightedSpace sp = game.space();
  GamePIResult out;
  out.mu = initial_pure(game.states(), game.rows());
  out.nu = initial_pure(game.states(), game.cols());

  auto evaluate = [&](ValueTable j) {
    if (options.optimistic_k == 0) return evaluate_mixed_pair(game, out.mu, out.nu);
    Eigen::VectorXd g;
    Eigen::MatrixXd p;
    pair_dynamics(game, out.mu, out.nu, g, p);
    Eigen::VectorXd v = as_vector(j);
    for (std::size_t k = 0; k < options.optimistic_k; ++k) v = g + game.alpha * (p * v);
    return ValueTable(v.data(), v.data() + v.size());
  };

  out.J = evaluate(ValueTable(game.states(), 0.0));
  out.history.push_back(mixed_signature(out.mu, out.nu));
  for (std::size_t t = 0; t < options.max_iters; ++t) {
    for (std::size_t x = 0; x < game.states(); ++x) {
      SaddleSolution s = solve_matrix_game(game.stage_matrix(x, out.J, game.alpha));
      out.mu[x] = std::move(s.u_star);
      out.nu[x] = std::move(s.v_star);
    }
    out.iterations = t + 1;
    out.history.push_back(mixed_signature(out.mu, out.nu));
    ValueTable next = evaluate(out.J);
    const double change = sp.distance(next, out.J);
    out.trace.push_back(change);
    out.J = std::move(next);
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
