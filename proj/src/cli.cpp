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

#include "minimaxpi/cli.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "minimaxpi/aggregation.hpp"
#include "minimaxpi/async_pi.hpp"
#include "minimaxpi/counterexample.hpp"
#include "minimaxpi/errors.hpp"

namespace minimaxpi::cli {
namespace {

std::shared_ptr<spdlog::logger> logger() {
  static const std::shared_ptr<spdlog::logger> log = [] {
    auto l = spdlog::stderr_logger_mt("minimaxpi");
    l->set_pattern("[%l] %v");
    const char* env = std::getenv("MINIMAXPI_LOG");
    l->set_level(env != nullptr ? spdlog::level::from_str(env) : spdlog::level::warn);
    return l;
  }();
  return log;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Separated problem for the explicit kinds, with the scaling that maps J1
// back to the game value (1 for separated models).
struct ExplicitProblem {
  SeparatedProblem problem;
  double scale = 1.0;
};

ExplicitProblem explicit_problem(const ProblemFile& file, std::optional<double> beta) {
  if (file.kind == ProblemKind::kSeparatedModel) {
    return {to_separated_problem(std::get<SeparatedMinimaxModel>(file.model)), 1.0};
  }
  if (file.kind == ProblemKind::kMinimaxControl) {
    ControlSeparation sep =
        to_separated_problem(std::get<MinimaxControlModel>(file.model), beta.value_or(0.0));
    return {std::move(sep.problem), sep.beta};
  }
  throw std::invalid_argument("expected a separated model or minimax control problem");
}

std::optional<double> effective_beta(const ProblemFile& file, const SolveOptions& options) {
  if (options.beta) return options.beta;
  return file.beta;
}

ValueTable scaled(ValueTable v, double s) {
  for (double& x : v) x *= s;
  return v;
}

template <class Result>
void fill_pi_trace(SolveReport& report, const Result& r, Clock::time_point start, bool timing) {
  for (std::size_t t = 0; t < r.trace.size(); ++t) {
    TraceLine line{t + 1, "iteration", 0, r.trace[t], std::nullopt, std::nullopt};
    report.trace.push_back(line);
  }
  if (timing && !report.trace.empty()) report.trace.back().wall_clock = seconds_since(start);
}

void fill_vi_trace(SolveReport& report, const std::vector<double>& residuals) {
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    report.trace.push_back({k + 1, "sweep", 0, residuals[k], std::nullopt, std::nullopt});
  }
}

// --tol bounds the error of the reported values. A residual r of a
// modulus-rho iteration leaves an error of at most r / (1 - rho), and the
// reported values are `scale` times the iterate.
double stopping_tol(double tol, double modulus, double scale) {
  return tol * (1.0 - modulus) / std::max(1.0, std::abs(scale));
}

std::string resolve_schedule(const SolveOptions& options) {
  if (options.schedule == "random") return "random:seed=" + std::to_string(options.seed);
  return options.schedule;
}

template <SeparatedModel M>
RunResult<M> run_async(const M& model, const SolveOptions& options, SolveReport& report,
                       Clock::time_point start, double scale = 1.0) {
  ScheduleSpec spec = make_schedule(resolve_schedule(options), model.size1(), model.size2());
  RunOptions ro;
  ro.tol = stopping_tol(options.tol, model.modulus(), scale);
  ro.max_steps = options.max_steps.value_or(1'000'000);
  ro.staleness_bound = spec.staleness_bound;
  ro.delay_seed = options.seed;
  ro.threads = std::max<std::size_t>(1, options.parallel);
  logger()->info("async: schedule {}, staleness {}, threads {}", spec.schedule->describe(),
                 spec.staleness_bound, ro.threads);
  RunResult<M> r = run(model, *spec.schedule, ro);
  for (const auto& row : r.trace) {
    TraceLine line{row.step, to_string(row.kind), row.subset_id, std::nullopt, std::nullopt,
                   std::nullopt};
    if (!std::isnan(row.residual1)) line.residual1 = row.residual1;
    if (!std::isnan(row.residual2)) line.residual2 = row.residual2;
    report.trace.push_back(line);
  }
  if (options.timing && !report.trace.empty()) {
    report.trace.back().wall_clock = seconds_since(start);
  }
  report.iterations = r.steps;
  return r;
}

SolveReport solve_markov(const ProblemFile& file, const SolveOptions& options) {
  const auto& game = std::get<DiscountedMarkovGame>(file.model);
  const auto start = Clock::now();
  SolveReport report;
  report.algorithm = options.algo;
  PIOptions pio;
  pio.tol = options.tol;
  pio.max_iters = options.max_steps.value_or(1000);
  pio.optimistic_k = options.optimistic_k;
  const std::string& algo = options.algo;
  if (algo == "vi") {
    const auto r = shapley_value_iteration(game, stopping_tol(options.tol, game.modulus(), 1.0),
                                           options.max_steps.value_or(1'000'000));
    report.status = PIStatus::kConverged;
    report.iterations = r.iterations;
    report.values1 = r.J;
    fill_vi_trace(report, r.residuals);
  } else if (algo == "hk" || algo == "poa") {
    const GamePIResult r = algo == "hk" ? hoffman_karp(game, pio) : pollatschek_avi_itzhak(game, pio);
    report.status = r.status;
    report.iterations = r.iterations;
    report.cycle_length = r.cycle_length;
    report.values1 = r.J;
    fill_pi_trace(report, r, start, options.timing);
  } else if (algo == "naive" || algo == "async") {
    const MarkovSeparated model =
        separate_markov_game(game, effective_beta(file, options).value_or(0.0));
    if (algo == "naive") {
      const auto r = naive_separated_pi(model, pio);
      report.status = r.status;
      report.iterations = r.iterations;
      report.cycle_length = r.cycle_length;
      report.values1 = model.game_values(r.j1);
      fill_pi_trace(report, r, start, options.timing);
    } else {
      const auto r = run_async(model, options, report, start, model.beta());
      report.status = PIStatus::kConverged;
      report.values1 = model.game_values(r.state.j1);
    }
  } else {
    throw std::invalid_argument("unknown algorithm '" + algo + "'");
  }
  report.residual = game_bellman_residual(game, report.values1);
  if (options.timing && algo == "vi") report.trace.back().wall_clock = seconds_since(start);
  return report;
}

SolveReport solve_explicit(const ProblemFile& file, const SolveOptions& options) {
  const auto start = Clock::now();
  const ExplicitProblem ep = explicit_problem(file, effective_beta(file, options));
  const SeparatedProblem& p = ep.problem;
  SolveReport report;
  report.algorithm = options.algo;
  const std::string& algo = options.algo;
  ValueTable j1;
  ValueTable j2;
  if (algo == "vi") {
    const auto r = value_iterate(p, stopping_tol(options.tol, p.alpha, ep.scale),
                                 options.max_steps.value_or(1'000'000));
    report.status = PIStatus::kConverged;
    report.iterations = r.iterations;
    j1 = r.j1;
    j2 = r.j2;
    fill_vi_trace(report, r.residuals);
    if (options.timing) report.trace.back().wall_clock = seconds_since(start);
  } else if (algo == "naive") {
    PIOptions pio;
    pio.tol = options.tol;
    pio.max_iters = options.max_steps.value_or(1000);
    pio.optimistic_k = options.optimistic_k;
    const auto r = naive_separated_pi(p, pio);
    report.status = r.status;
    report.iterations = r.iterations;
    report.cycle_length = r.cycle_length;
    j1 = r.j1;
    j2 = r.j2;
    fill_pi_trace(report, r, start, options.timing);
  } else if (algo == "async") {
    const auto r = run_async(p, options, report, start, ep.scale);
    report.status = PIStatus::kConverged;
    j1 = r.state.j1;
    j2 = r.state.j2;
  } else if (algo == "hk" || algo == "poa") {
    throw std::invalid_argument("algorithm '" + algo + "' requires a Markov game problem");
  } else {
    throw std::invalid_argument("unknown algorithm '" + algo + "'");
  }
  report.residual = bellman_residual(p, j1, j2);
  if (file.kind == ProblemKind::kSeparatedModel) {
    report.values1 = std::move(j1);
    report.values2 = std::move(j2);
  } else {
    report.values1 = scaled(std::move(j1), ep.scale);
  }
  return report;
}

int report_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << "\n";
  return kExitError;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const MaxItersExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kExitMaxIters;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << content;
  if (!f) throw Error("failed writing " + path);
}

// Runs solve() and converts budget exhaustion into a MaxIters report.
SolveReport solve_or_budget(const ProblemFile& problem, const SolveOptions& options) {
  try {
    return solve(problem, options);
  } catch (const MaxItersExceeded& e) {
    SolveReport r;
    r.algorithm = options.algo;
    r.status = PIStatus::kMaxIters;
    r.message = e.what();
    return r;
  }
}

}  // namespace

int exit_code(PIStatus status) {
  switch (status) {
    case PIStatus::kConverged:
      return kExitConverged;
    case PIStatus::kCycled:
      return kExitCycled;
    case PIStatus::kMaxIters:
      return kExitMaxIters;
  }
  return kExitError;
}

SolveReport solve(const ProblemFile& problem, const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  logger()->info("solve: kind {}, algorithm {}", to_string(problem.kind), options.algo);
  SolveReport r = problem.is_markov_game() ? solve_markov(problem, options)
                                           : solve_explicit(problem, options);
  logger()->info("solve: {} after {} iterations, residual {}", to_string(r.status), r.iterations,
                 r.residual);
  return r;
}

void write_values(std::ostream& os, const ProblemFile& problem, const SolveReport& report) {
  os << "space,state,value\n";
  for (std::size_t x = 0; x < report.values1.size(); ++x) {
    os << "1," << x << "," << format_double(report.values1[x]) << "\n";
  }
  if (problem.kind == ProblemKind::kSeparatedModel) {
    for (std::size_t x = 0; x < report.values2.size(); ++x) {
      os << "2," << x << "," << format_double(report.values2[x]) << "\n";
    }
  }
}

void write_trace(std::ostream& os, const std::string& algorithm,
                 const std::vector<TraceLine>& trace) {
  os << "step,algorithm,kind,subset,residual1,residual2,wall_clock_s\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& t : trace) {
    os << t.step << "," << algorithm << "," << t.kind << "," << t.subset << "," << opt(t.residual1)
       << "," << opt(t.residual2) << "," << opt(t.wall_clock) << "\n";
  }
}

int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemFile problem = load_problem(options.problem);
    const SolveReport report = solve(problem, options);
    if (!options.trace.empty()) {
      std::ostringstream t;
      write_trace(t, report.algorithm, report.trace);
      write_file(options.trace, t.str());
    }
    std::ostringstream v;
    write_values(v, problem, report);
    if (options.out.empty()) {
      out << v.str();
    } else {
      write_file(options.out, v.str());
    }
    if (report.status == PIStatus::kCycled) {
      err << "cycle detected: policy pairs repeat with period " << report.cycle_length.value_or(0)
          << " after " << report.iterations << " improvements\n";
    } else if (report.status == PIStatus::kMaxIters) {
      err << "budget exhausted after " << report.iterations << " iterations\n";
    }
    return exit_code(report.status);
  });
}

int cmd_compare(const SolveOptions& options, const std::vector<std::string>& algos,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (algos.empty()) throw std::invalid_argument("compare: no algorithms given");
    const ProblemFile problem = load_problem(options.problem);
    std::vector<SolveReport> reports;
    out << "algorithm,status,iterations,residual\n";
    for (const auto& a : algos) {
      SolveOptions o = options;
      o.algo = a;
      reports.push_back(solve_or_budget(problem, o));
      const SolveReport& r = reports.back();
      out << a << "," << to_string(r.status) << "," << r.iterations << ","
          << (r.values1.empty() ? std::string() : format_double(r.residual)) << "\n";
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      for (std::size_t j = i + 1; j < reports.size(); ++j) {
        const auto& a = reports[i];
        const auto& b = reports[j];
        if (a.status != PIStatus::kConverged || b.status != PIStatus::kConverged) continue;
        for (std::size_t x = 0; x < a.values1.size(); ++x) {
          worst = std::max(worst, std::abs(a.values1[x] - b.values1[x]));
        }
      }
    }
    out << "max_pairwise_difference," << format_double(worst) << "\n";
    if (worst > 10.0 * options.tol) {
      err << "converged algorithms disagree by " << worst << " > 10 tol\n";
      return kExitError;
    }
    return kExitConverged;
  });
}

int cmd_counterexample(const std::string& out_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (out_path.empty()) throw std::invalid_argument("counterexample: --out is required");
    const OscillationInstance inst = find_oscillation_instance();
    ProblemFile file;
    file.kind = ProblemKind::kTerminatingMarkovGame;
    file.model = inst.game;
    save_problem(out_path, file);
    const std::string note = describe(inst);
    write_file(out_path + ".note.txt", note);
    out << note;
    return kExitConverged;
  });
}

int cmd_aggregate_solve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemFile file = load_problem(options.problem);
    if (file.is_markov_game()) {
      throw std::invalid_argument(
          "aggregate-solve needs a separated_model or minimax_control problem");
    }
    if (!file.aggregation) throw ValidationError("aggregation", "missing aggregation block");
    const ExplicitProblem ep = explicit_problem(file, effective_beta(file, options));
    const SeparatedProblem& p = ep.problem;
    const AggregationSpec& spec = *file.aggregation;
    AggregationProbabilities phi = nearest_representative_phi(p.size1(), p.size2(), spec.reps);
    if (spec.phi) {
      // Explicit rows override the defaults.
      for (std::size_t x = 0; x < spec.phi->phi1.size() && x < phi.phi1.size(); ++x) {
        if (!spec.phi->phi1[x].empty()) phi.phi1[x] = spec.phi->phi1[x];
      }
      for (std::size_t x = 0; x < spec.phi->phi2.size() && x < phi.phi2.size(); ++x) {
        if (!spec.phi->phi2[x].empty()) phi.phi2[x] = spec.phi->phi2[x];
      }
    }
    const SeparatedProblem agg = build_aggregate(p, spec.reps, phi);
    SolveReport report;
    report.algorithm = "aggregate-async";
    const auto start = Clock::now();
    const auto r = run_async(agg, options, report, start);
    const ValueTable j1 = interpolate(r.state.j1, phi.phi1);
    const ValueTable j2 = interpolate(r.state.j2, phi.phi2);
    const PolicyPair pol = lookahead_policies(p, j1, j2);
    const auto [e1, e2] = evaluate_policy_pair(p, pol.mu, pol.nu, zero_table1(p), zero_table2(p));
    const auto exact = value_iterate(p, std::min(options.tol, 1e-10));
    const double gap = std::max(p.space1.distance(e1, exact.j1), p.space2.distance(e2, exact.j2));

    report.status = PIStatus::kConverged;
    report.residual = bellman_residual(agg, r.state.j1, r.state.j2);
    if (file.kind == ProblemKind::kSeparatedModel) {
      report.values1 = j1;
      report.values2 = j2;
    } else {
      report.values1 = scaled(j1, ep.scale);
    }
    if (!options.trace.empty()) {
      std::ostringstream t;
      write_trace(t, report.algorithm, report.trace);
      write_file(options.trace, t.str());
    }
    std::ostringstream v;
    write_values(v, file, report);
    if (options.out.empty()) {
      out << v.str();
    } else {
      write_file(options.out, v.str());
    }
    err << "aggregate: " << agg.size1() << " + " << agg.size2() << " representatives, "
        << r.steps << " steps\n"
        << "lookahead policy pair: exact value gap to optimum " << format_double(gap * ep.scale)
        << "\n";
    return kExitConverged;
  });
}

}  // namespace minimaxpi::cli
