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

#include <stdexcept>
#include <string>

namespace minimaxpi {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method did not reach its tolerance within the iteration budget.
class MaxItersExceeded : public Error {
 public:
  using Error::Error;
};

/// Every sampled pair in a modulus estimate had zero distance.
class DegeneratePair : public Error {
 public:
  using Error::Error;
};

/// The simplex method cycled, lost feasibility, or hit its pivot limit.
class LPNumericalFailure : public Error {
 public:
  using Error::Error;
};

class InvalidBeta : public Error {
 public:
  using Error::Error;
};

/// A sampled pair violated the asserted contraction modulus. The message
/// carries the witness.
class ContractionViolation : public Error {
 public:
  using Error::Error;
};

class MissingAggregationRow : public Error {
 public:
  using Error::Error;
};

/// Malformed problem file (not parseable as the expected document).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Problem data breaks a model invariant. `path()` names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A terminating game failed the contraction screen.
class NonContractive : public Error {
 public:
  using Error::Error;
};

class SearchFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace minimaxpi
