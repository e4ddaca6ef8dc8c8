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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "minimaxpi/cli.hpp"
#include "minimaxpi/counterexample.hpp"
#include "minimaxpi/errors.hpp"
#include "minimaxpi/matrix_game.hpp"
#include "minimaxpi/problem_io.hpp"

namespace py = pybind11;
namespace mp = minimaxpi;

namespace {

mp::cli::SolveReport solve(const mp::ProblemFile& problem, const std::string& algo, double tol,
                           std::optional<std::size_t> max_steps, const std::string& schedule,
                           std::optional<double> beta, std::uint64_t seed, std::size_t parallel,
                           std::size_t optimistic_k) {
  mp::cli::SolveOptions o;
  o.algo = algo;
  o.tol = tol;
  o.max_steps = max_steps;
  o.schedule = schedule;
  o.beta = beta;
  o.seed = seed;
  o.parallel = parallel;
  o.optimistic_k = optimistic_k;
  py::gil_scoped_release release;
  return mp::cli::solve(problem, o);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minimax policy iteration: asynchronous separated PI and classic baselines.";

  auto base = py::register_exception<mp::Error>(m, "Error");
  py::register_exception<mp::MaxItersExceeded>(m, "MaxItersExceeded", base.ptr());
  py::register_exception<mp::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<mp::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<mp::NonContractive>(m, "NonContractive", base.ptr());
  py::register_exception<mp::InvalidBeta>(m, "InvalidBeta", base.ptr());
  py::register_exception<mp::LPNumericalFailure>(m, "LPNumericalFailure", base.ptr());

  py::class_<mp::ProblemFile>(m, "Problem")
      .def_static("load", [](const std::string& path) { return mp::load_problem(path); },
                  py::arg("path"))
      .def_static("parse", &mp::parse_problem, py::arg("text"))
      .def_property_readonly("kind", [](const mp::ProblemFile& p) { return mp::to_string(p.kind); })
      .def_property_readonly("beta", [](const mp::ProblemFile& p) { return p.beta; })
      .def_property_readonly("has_aggregation",
                             [](const mp::ProblemFile& p) { return p.aggregation.has_value(); })
      .def("dumps", &mp::dump_problem)
      .def("save", [](const mp::ProblemFile& p, const std::string& path) { mp::save_problem(path, p); },
           py::arg("path"))
      .def("__repr__", [](const mp::ProblemFile& p) {
        return "<minimaxpi.Problem kind=" + mp::to_string(p.kind) + ">";
      });

  py::class_<mp::cli::TraceLine>(m, "TraceLine")
      .def_readonly("step", &mp::cli::TraceLine::step)
      .def_readonly("kind", &mp::cli::TraceLine::kind)
      .def_readonly("subset", &mp::cli::TraceLine::subset)
      .def_readonly("residual1", &mp::cli::TraceLine::residual1)
      .def_readonly("residual2", &mp::cli::TraceLine::residual2);

  py::class_<mp::cli::SolveReport>(m, "SolveReport")
      .def_readonly("algorithm", &mp::cli::SolveReport::algorithm)
      .def_property_readonly("status",
                             [](const mp::cli::SolveReport& r) { return mp::to_string(r.status); })
      .def_property_readonly("exit_code",
                             [](const mp::cli::SolveReport& r) { return mp::cli::exit_code(r.status); })
      .def_readonly("iterations", &mp::cli::SolveReport::iterations)
      .def_readonly("cycle_length", &mp::cli::SolveReport::cycle_length)
      .def_readonly("residual", &mp::cli::SolveReport::residual)
      .def_readonly("values1", &mp::cli::SolveReport::values1)
      .def_readonly("values2", &mp::cli::SolveReport::values2)
      .def_readonly("trace", &mp::cli::SolveReport::trace)
      .def_readonly("message", &mp::cli::SolveReport::message)
      .def("__repr__", [](const mp::cli::SolveReport& r) {
        return "<minimaxpi.SolveReport " + r.algorithm + " " + mp::to_string(r.status) + " after " +
               std::to_string(r.iterations) + ">";
      });

  m.def("solve", &solve, py::arg("problem"), py::arg("algo") = "async", py::arg("tol") = 1e-8,
        py::arg("max_steps") = py::none(), py::arg("schedule") = "round_robin:k=10",
        py::arg("beta") = py::none(), py::arg("seed") = 0, py::arg("parallel") = 1,
        py::arg("optimistic_k") = 0,
        "Run one algorithm (vi, hk, poa, naive, async) on a loaded problem.");

  py::class_<mp::SaddleSolution>(m, "SaddleSolution")
      .def_readonly("value", &mp::SaddleSolution::value)
      .def_readonly("u", &mp::SaddleSolution::u_star)
      .def_readonly("v", &mp::SaddleSolution::v_star)
      .def_readonly("dual_value", &mp::SaddleSolution::dual_value);

  m.def("solve_matrix_game",
        [](const mp::PayoffMatrix& payoff, double tol) { return mp::solve_matrix_game(payoff, tol); },
        py::arg("payoff"), py::arg("tol") = 1e-8,
        "Saddle point of u' M v with rows minimizing and columns maximizing.");

  m.def(
      "counterexample",
      [] {
        const mp::OscillationInstance inst = mp::find_oscillation_instance();
        mp::ProblemFile file;
        file.kind = mp::ProblemKind::kTerminatingMarkovGame;
        file.model = inst.game;
        return py::make_tuple(file, mp::describe(inst));
      },
      "The one-state game on which exact Pollatschek-Avi-Itzhak PI cycles, with a note.");
}
