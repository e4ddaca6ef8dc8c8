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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "minimaxpi/classic_pi.hpp"
#include "minimaxpi/problem_io.hpp"

namespace minimaxpi::cli {

inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCycled = 2;
inline constexpr int kExitMaxIters = 3;

int exit_code(PIStatus status);

struct SolveOptions {
  std::string problem;
  std::string algo = "async";
  double tol = 1e-8;
  /// Iteration or step budget; each algorithm has its own default.
  std::optional<std::size_t> max_steps;
  std::string schedule = "round_robin:k=10";
  /// Overrides the file's beta; otherwise 1 / sqrt(modulus).
  std::optional<double> beta;
  /// Seeds the delay model and a bare "random" schedule.
  std::uint64_t seed = 0;
  /// Value table path; empty writes to the output stream.
  std::string out;
  /// Trace path; empty disables the trace.
  std::string trace;
  std::size_t parallel = 1;
  /// Optimistic evaluation sweeps for poa and naive (0 = exact).
  std::size_t optimistic_k = 0;
  /// Fill the wall-clock trace column. Off by default so traces are
  /// byte-identical across runs.
  bool timing = false;
};

struct TraceLine {
  std::size_t step = 0;
  std::string kind;
  std::size_t subset = 0;
  std::optional<double> residual1;
  std::optional<double> residual2;
  std::optional<double> wall_clock;
};

struct SolveReport {
  std::string algorithm;
  PIStatus status = PIStatus::kMaxIters;
  std::size_t iterations = 0;
  std::optional<std::size_t> cycle_length;
  /// Bellman residual of the final tables against the problem's own
  /// operator (Shapley operator for games).
  double residual = 0.0;
  /// Value tables: the game value J for games and minimax control, (J1, J2)
  /// for separated models. Empty when the budget ran out.
  ValueTable values1;
  ValueTable values2;
  std::vector<TraceLine> trace;
  std::string message;
};

/// Runs one algorithm on a loaded problem. Throws on invalid combinations
/// (std::invalid_argument) and propagates model errors.
SolveReport solve(const ProblemFile& problem, const SolveOptions& options);

void write_values(std::ostream& os, const ProblemFile& problem, const SolveReport& report);
void write_trace(std::ostream& os, const std::string& algorithm,
                 const std::vector<TraceLine>& trace);

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err);

/// Runs each algorithm in `algos` with the shared options and prints one
/// row per algorithm. Returns kExitError when converged tables disagree by
/// more than 10 tol.
int cmd_compare(const SolveOptions& options, const std::vector<std::string>& algos,
                std::ostream& out, std::ostream& err);

/// Writes the oscillation instance to `out_path` and a note to
/// `out_path + ".note.txt"`.
int cmd_counterexample(const std::string& out_path, std::ostream& out, std::ostream& err);

/// Solves the aggregate problem from the file's aggregation block with the
/// asynchronous algorithm, interpolates, extracts lookahead policies, and
/// reports the exact value of that pair next to the exact optimum.
int cmd_aggregate_solve(const SolveOptions& options, std::ostream& out, std::ostream& err);

}  // namespace minimaxpi::cli
