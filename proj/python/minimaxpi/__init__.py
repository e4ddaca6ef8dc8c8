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

"""Minimax policy iteration for sequential games."""

from ._core import (
    Error,
    InvalidBeta,
    LPNumericalFailure,
    MaxItersExceeded,
    NonContractive,
    ParseError,
    Problem,
    SaddleSolution,
    SolveReport,
    TraceLine,
    ValidationError,
    counterexample,
    solve,
    solve_matrix_game,
)

__all__ = [
    "Error",
    "InvalidBeta",
    "LPNumericalFailure",
    "MaxItersExceeded",
    "NonContractive",
    "ParseError",
    "Problem",
    "SaddleSolution",
    "SolveReport",
    "TraceLine",
    "ValidationError",
    "counterexample",
    "solve",
    "solve_matrix_game",
]
