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

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "minimaxpi/cli.hpp"

namespace {

void add_solver_flags(CLI::App* cmd, minimaxpi::cli::SolveOptions& o) {
  cmd->add_option("problem", o.problem, "Problem file")->required();
  cmd->add_option("--tol", o.tol, "Convergence tolerance")->capture_default_str();
  cmd->add_option("--max-steps", o.max_steps, "Iteration or step budget");
  cmd->add_option("--schedule", o.schedule, "Async schedule spec")->capture_default_str();
  cmd->add_option("--beta", o.beta, "Scaling for the separated game model");
  cmd->add_option("--seed", o.seed, "Seed for random schedules and delays");
  cmd->add_option("--out", o.out, "Value table output (default stdout)");
  cmd->add_option("--trace", o.trace, "Trace CSV output");
  cmd->add_option("--parallel", o.parallel, "Worker threads for async operations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--optimistic-k", o.optimistic_k, "Evaluation sweeps for poa and naive");
  cmd->add_flag("--timing", o.timing, "Record wall-clock time in the trace");
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = minimaxpi::cli;
  CLI::App app{"Policy iteration solvers for zero-sum games and minimax control"};
  app.require_subcommand(1);

  cli::SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Solve a problem file");
  add_solver_flags(solve, solve_opts);
  solve->add_option("--algo", solve_opts.algo, "vi, hk, poa, naive or async")
      ->check(CLI::IsMember({"vi", "hk", "poa", "naive", "async"}))
      ->capture_default_str();

  cli::SolveOptions compare_opts;
  std::vector<std::string> algos;
  auto* compare = app.add_subcommand("compare", "Run several algorithms and compare");
  add_solver_flags(compare, compare_opts);
  compare->add_option("--algo", algos, "Algorithms, comma separated")
      ->delimiter(',')
      ->check(CLI::IsMember({"vi", "hk", "poa", "naive", "async"}))
      ->required();

  std::string cx_out;
  auto* counterexample =
      app.add_subcommand("counterexample", "Emit a game on which exact PI oscillates");
  counterexample->add_option("--out", cx_out, "Problem file to write")->required();

  cli::SolveOptions agg_opts;
  auto* aggregate = app.add_subcommand("aggregate-solve", "Solve an aggregated problem");
  add_solver_flags(aggregate, agg_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitError;
  }

  if (solve->parsed()) return cli::cmd_solve(solve_opts, std::cout, std::cerr);
  if (compare->parsed()) return cli::cmd_compare(compare_opts, algos, std::cout, std::cerr);
  if (counterexample->parsed()) return cli::cmd_counterexample(cx_out, std::cout, std::cerr);
  return cli::cmd_aggregate_solve(agg_opts, std::cout, std::cerr);
}
