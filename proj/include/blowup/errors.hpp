// Copyright 2026 The Blowup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLOWUP_ERRORS_HPP
#define BLOWUP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blowup {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on argument shapes was broken (universe mismatch, index out
/// of range, malformed input).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class UndefinedDensity : public Error {
 public:
  using Error::Error;
};

/// Exhaustive regularity check requested above the configured side limit.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class DegenerateInstance : public Error {
 public:
  using Error::Error;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

/// An Instance (or instance file) failed validation. `invariant()` names the
/// violated rule so callers can report it verbatim.
class InvariantError : public Error {
 public:
  InvariantError(std::string invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

class PreprocessingFailure : public Error {
 public:
  using Error::Error;
};

/// A file or document could not be parsed into the expected structure.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace blowup

#endif  // BLOWUP_ERRORS_HPP
