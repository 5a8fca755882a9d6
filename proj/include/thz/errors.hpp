// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thz {

/// A caller-supplied parameter violates a documented precondition.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Lookup outside the range a data source covers (no extrapolation).
class OutOfDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input file. Carries the 1-based line of the offending record.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Base for failures of a numerical routine on otherwise valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateMedium : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateDistribution : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// No likelihood-equality root between two adjacent symbols: one decision
/// region has collapsed.
class ThresholdDegeneracy : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : NumericalError(what), estimate_(estimate), error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// A power fraction landed outside [0, 1] by more than the integration error.
class FractionOutOfRange : public NumericalError {
 public:
  FractionOutOfRange(const std::string& what, double value)
      : NumericalError(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

}  // namespace thz
