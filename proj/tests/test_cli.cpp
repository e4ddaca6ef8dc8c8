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

#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "minimaxpi/cli.hpp"
#include "minimaxpi/errors.hpp"
#include "support/generators.hpp"

using namespace minimaxpi;
using namespace minimaxpi::cli;
using minimaxpi::testing::Rng;

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("minimaxpi_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
            std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Value column of a values CSV.
std::vector<double> values_of(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "space,state,value");
  std::vector<double> out;
  while (std::getline(in, line)) out.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  return out;
}

void write_game(const std::string& path, const DiscountedMarkovGame& g) {
  ProblemFile f;
  f.kind = ProblemKind::kDiscountedMarkovGame;
  f.model = g;
  save_problem(path, f);
}

const std::string& counterexample_file(const TempDir& dir) {
  static std::string path;
  path = dir.file("cx.json");
  std::ostringstream out, err;
  REQUIRE(cmd_counterexample(path, out, err) == kExitConverged);
  return path;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(MINIMAXPI_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli solve") {
  TEST_CASE("zero game with every algorithm") {
    TempDir dir;
    write_game(dir.file("zero.json"), testing::zero_game(3, 2, 2, 0.9));
    for (const char* algo : {"vi", "hk", "poa", "naive", "async"}) {
      SolveOptions o;
      o.problem = dir.file("zero.json");
      o.algo = algo;
      std::ostringstream out, err;
      CHECK(cmd_solve(o, out, err) == kExitConverged);
      for (double v : values_of(out.str())) CHECK(v == 0.0);
    }
  }

  TEST_CASE("counterexample: poa cycles, async converges to the VI value") {
    TempDir dir;
    const std::string cx = counterexample_file(dir);
    SolveOptions o;
    o.problem = cx;
    o.algo = "poa";
    std::ostringstream out, err;
    CHECK(cmd_solve(o, out, err) == kExitCycled);
    CHECK(err.str().find("period 2") != std::string::npos);

    o.algo = "vi";
    o.tol = 1e-12;
    std::ostringstream vi_out, vi_err;
    REQUIRE(cmd_solve(o, vi_out, vi_err) == kExitConverged);
    o.algo = "async";
    o.tol = 1e-8;
    std::ostringstream a_out, a_err;
    CHECK(cmd_solve(o, a_out, a_err) == kExitConverged);
    CHECK(std::abs(values_of(a_out.str())[0] - values_of(vi_out.str())[0]) <= 1e-6);
  }

  TEST_CASE("budget exhaustion exits 3") {
    Rng rng(1);
    TempDir dir;
    write_game(dir.file("g.json"), testing::random_game(rng, 3, 2, 2, 0.95));
    SolveOptions o;
    o.problem = dir.file("g.json");
    o.algo = "vi";
    o.max_steps = 3;
    std::ostringstream out, err;
    CHECK(cmd_solve(o, out, err) == kExitMaxIters);
    o.algo = "async";
    CHECK(cmd_solve(o, out, err) == kExitMaxIters);
  }

  TEST_CASE("input errors exit 1") {
    TempDir dir;
    std::ofstream(dir.file("bad.json")) << "{\"format_version\": 1}";
    SolveOptions o;
    o.problem = dir.file("bad.json");
    std::ostringstream out, err;
    CHECK(cmd_solve(o, out, err) == kExitError);
    CHECK(err.str().find("kind") != std::string::npos);
    o.problem = dir.file("missing.json");
    CHECK(cmd_solve(o, out, err) == kExitError);

    write_game(dir.file("g.json"), testing::zero_game(1, 1, 1, 0.9));
    o.problem = dir.file("g.json");
    o.beta = 0.5;
    CHECK(cmd_solve(o, out, err) == kExitError);
    o.beta.reset();
    o.schedule = "spiral";
    CHECK(cmd_solve(o, out, err) == kExitError);
  }

  TEST_CASE("separated model without games-only algorithms") {
    Rng rng(2);
    TempDir dir;
    ProblemFile f;
    f.kind = ProblemKind::kSeparatedModel;
    f.model = testing::random_separated_model(rng, 3, 3, 2, 0.8);
    save_problem(dir.file("s.json"), f);
    SolveOptions o;
    o.problem = dir.file("s.json");
    std::ostringstream out, err;
    CHECK(cmd_solve(o, out, err) == kExitConverged);
    CHECK(values_of(out.str()).size() == 6);
    o.algo = "hk";
    CHECK(cmd_solve(o, out, err) == kExitError);
  }

  TEST_CASE("traces are byte-identical across runs") {
    Rng rng(3);
    TempDir dir;
    write_game(dir.file("g.json"), testing::random_game(rng, 4, 2, 2, 0.9));
    for (const char* schedule : {"random", "delayed:B=3,inner=random:seed=5", "partitioned:p=2"}) {
      SolveOptions o;
      o.problem = dir.file("g.json");
      o.schedule = schedule;
      o.seed = 42;
      o.trace = dir.file("t1.csv");
      o.out = dir.file("v1.csv");
      std::ostringstream out, err;
      REQUIRE(cmd_solve(o, out, err) == kExitConverged);
      o.trace = dir.file("t2.csv");
      o.out = dir.file("v2.csv");
      o.parallel = 3;
      REQUIRE(cmd_solve(o, out, err) == kExitConverged);
      CHECK(read(dir.file("t1.csv")) == read(dir.file("t2.csv")));
      CHECK(read(dir.file("v1.csv")) == read(dir.file("v2.csv")));
      CHECK(read(dir.file("t1.csv")).rfind("step,algorithm,kind,subset,residual1,residual2,wall_clock_s\n", 0) == 0);
    }
  }
}

TEST_SUITE("cli compare") {
  TEST_CASE("vi, hk and async agree on a random game") {
    Rng rng(4);
    TempDir dir;
    write_game(dir.file("g.json"), testing::random_game(rng, 3, 2, 3, 0.9));
    SolveOptions o;
    o.problem = dir.file("g.json");
    o.tol = 1e-9;
    std::ostringstream out, err;
    CHECK(cmd_compare(o, {"vi", "hk", "async"}, out, err) == kExitConverged);
    CHECK(out.str().find("vi,converged") != std::string::npos);
    CHECK(out.str().find("hk,converged") != std::string::npos);
    CHECK(out.str().find("async,converged") != std::string::npos);
  }

  TEST_CASE("poa alone on the zero game") {
    TempDir dir;
    write_game(dir.file("z.json"), testing::zero_game(2, 2, 2, 0.9));
    SolveOptions o;
    o.problem = dir.file("z.json");
    std::ostringstream out, err;
    CHECK(cmd_compare(o, {"poa"}, out, err) == kExitConverged);
    CHECK(out.str().find("poa,converged,1,") != std::string::npos);
  }

  TEST_CASE("naive cycles and async converges on the counterexample") {
    TempDir dir;
    SolveOptions o;
    o.problem = counterexample_file(dir);
    std::ostringstream out, err;
    CHECK(cmd_compare(o, {"naive", "async"}, out, err) == kExitConverged);
    CHECK(out.str().find("naive,cycled") != std::string::npos);
    CHECK(out.str().find("async,converged") != std::string::npos);
  }
}

TEST_SUITE("cli counterexample") {
  TEST_CASE("emitted file reloads and passes the contraction screen") {
    TempDir dir;
    const std::string path = counterexample_file(dir);
    const auto f = load_problem(path);
    CHECK(f.kind == ProblemKind::kTerminatingMarkovGame);
    const auto& g = std::get<DiscountedMarkovGame>(f.model);
    double pmax = 0.0;
    for (const auto& q : g.transition[0]) pmax = std::max(pmax, q.maxCoeff());
    CHECK(g.alpha * pmax < 1.0);
    CHECK(fs::exists(path + ".note.txt"));
    CHECK(read(path + ".note.txt").find("period 2") != std::string::npos);
  }
}

TEST_SUITE("cli aggregate-solve") {
  TEST_CASE("identity aggregation reproduces the exact values") {
    Rng rng(5);
    TempDir dir;
    ProblemFile f;
    f.kind = ProblemKind::kSeparatedModel;
    f.model = testing::random_separated_model(rng, 4, 4, 3, 0.9);
    f.aggregation = AggregationSpec{full_representatives(4, 4), std::nullopt};
    save_problem(dir.file("a.json"), f);
    SolveOptions o;
    o.problem = dir.file("a.json");
    o.tol = 1e-10;
    std::ostringstream out, err;
    CHECK(cmd_aggregate_solve(o, out, err) == kExitConverged);
    CHECK(err.str().find("gap to optimum") != std::string::npos);
    o.algo = "vi";
    std::ostringstream vi_out, vi_err;
    REQUIRE(cmd_solve(o, vi_out, vi_err) == kExitConverged);
    const auto a = values_of(out.str());
    const auto b = values_of(vi_out.str());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-8);
  }

  TEST_CASE("requires an aggregation block") {
    Rng rng(6);
    TempDir dir;
    ProblemFile f;
    f.kind = ProblemKind::kSeparatedModel;
    f.model = testing::random_separated_model(rng, 2, 2, 2, 0.9);
    save_problem(dir.file("a.json"), f);
    SolveOptions o;
    o.problem = dir.file("a.json");
    std::ostringstream out, err;
    CHECK(cmd_aggregate_solve(o, out, err) == kExitError);
  }
}

TEST_SUITE("cli executable") {
  TEST_CASE("end-to-end exit codes") {
    TempDir dir;
    const std::string cx = dir.file("cx.json");
    CHECK(run_tool("counterexample --out " + cx) == 0);
    CHECK(run_tool("solve " + cx + " --algo poa") == 2);
    CHECK(run_tool("solve " + cx + " --algo async --out " + dir.file("v.csv")) == 0);
    CHECK(run_tool("solve " + cx + " --algo vi --max-steps 2") == 3);
    CHECK(run_tool("solve " + dir.file("missing.json")) == 1);
    CHECK(run_tool("solve " + cx + " --algo bogus") == 1);
    CHECK(run_tool("compare " + cx + " --algo vi,hk,async") == 0);
  }
}
