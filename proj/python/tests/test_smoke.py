# Copyright 2026 The minimaxpi Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import numpy as np
import pytest

import minimaxpi


@pytest.fixture(scope="module")
def oscillation():
    problem, note = minimaxpi.counterexample()
    return problem, note


def test_matrix_game_rock_paper_scissors():
    payoff = np.array([[0.0, 1.0, -1.0], [-1.0, 0.0, 1.0], [1.0, -1.0, 0.0]])
    sol = minimaxpi.solve_matrix_game(payoff)
    assert sol.value == pytest.approx(0.0, abs=1e-9)
    assert sol.u == pytest.approx([1 / 3] * 3, abs=1e-9)
    assert sol.v == pytest.approx([1 / 3] * 3, abs=1e-9)


def test_matrix_game_pure_saddle():
    sol = minimaxpi.solve_matrix_game(np.array([[1.0, 2.0], [0.0, 3.0]]))
    # min over rows of max over columns: row 0 gives 2, row 1 gives 3.
    assert sol.value == pytest.approx(2.0)
    assert sol.u == pytest.approx([1.0, 0.0])


def test_counterexample_round_trips(oscillation, tmp_path):
    problem, note = oscillation
    assert problem.kind == "terminating_markov_game"
    assert "period 2" in note
    path = tmp_path / "osc.json"
    problem.save(str(path))
    again = minimaxpi.Problem.load(str(path))
    assert again.dumps() == problem.dumps()
    assert json.loads(problem.dumps())["kind"] == "terminating_markov_game"


def test_poa_cycles_and_async_converges(oscillation):
    problem, _ = oscillation
    poa = minimaxpi.solve(problem, algo="poa")
    assert poa.status == "cycled"
    assert poa.cycle_length == 2
    assert poa.exit_code == 2

    vi = minimaxpi.solve(problem, algo="vi", tol=1e-12)
    asy = minimaxpi.solve(problem, algo="async", tol=1e-10)
    assert asy.status == "converged"
    assert asy.values1 == pytest.approx(vi.values1, abs=1e-8)
    assert asy.trace and asy.trace[-1].step >= 1


def test_budget_exhaustion(oscillation):
    problem, _ = oscillation
    for algo in ("vi", "async"):
        with pytest.raises(minimaxpi.MaxItersExceeded):
            minimaxpi.solve(problem, algo=algo, max_steps=2)


def test_errors_are_typed(oscillation):
    problem, _ = oscillation
    with pytest.raises(minimaxpi.ParseError):
        minimaxpi.Problem.parse("not json")
    with pytest.raises(minimaxpi.ValidationError):
        minimaxpi.Problem.parse('{"format_version": 1}')
    with pytest.raises(ValueError):
        minimaxpi.solve(problem, algo="async", schedule="spiral")
    assert issubclass(minimaxpi.ValidationError, minimaxpi.Error)
