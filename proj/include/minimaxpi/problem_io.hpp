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

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "minimaxpi/aggregation.hpp"
#include "minimaxpi/models.hpp"

namespace minimaxpi {

enum class ProblemKind {
  kDiscountedMarkovGame,
  kTerminatingMarkovGame,
  kSeparatedModel,
  kMinimaxControl,
};

std::string to_string(ProblemKind kind);

struct AggregationSpec {
  RepresentativeSets reps;
  /// Absent rows (or an absent block) default to nearest-representative
  /// point masses.
  std::optional<AggregationProbabilities> phi;
};

/// In-memory form of a problem file.
struct ProblemFile {
  static constexpr int kFormatVersion = 1;

  ProblemKind kind = ProblemKind::kDiscountedMarkovGame;
  std::variant<DiscountedMarkovGame, SeparatedMinimaxModel, MinimaxControlModel> model;
  std::optional<double> beta;
  std::optional<AggregationSpec> aggregation;

  bool is_markov_game() const {
    return kind == ProblemKind::kDiscountedMarkovGame ||
           kind == ProblemKind::kTerminatingMarkovGame;
  }
};

/// Parses and validates a problem document. Throws ParseError when the text
/// is not a JSON object or has an unsupported format version,
/// ValidationError (with the field path) for missing or mistyped fields and
/// invariant breaches, and NonContractive for terminating games failing the
/// contraction screen.
ProblemFile parse_problem(const std::string& text);

ProblemFile load_problem(const std::filesystem::path& path);

/// Serializes to the same document format; doubles are written in shortest
/// round-trip form, so save -> load reproduces the data exactly.
std::string dump_problem(const ProblemFile& problem);

void save_problem(const std::filesystem::path& path, const ProblemFile& problem);

}  // namespace minimaxpi
