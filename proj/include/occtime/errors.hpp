// Copyright 2026 The occtime Authors
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

#ifndef OCCTIME_ERRORS_HPP
#define OCCTIME_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace occtime {

using cplx = std::complex<double>;

enum class NumericErrorKind {
  SingularMatrix,
  DegenerateRoots,
  SingularSolve,
  IllConditioned,
  ZeroDenominator,
  ResidualTooLarge,
};

const char* to_string(NumericErrorKind kind);

/// Failure of a numerical evaluation (root finding, linear solve, ratio).
/// Callers inside the inversion loops may retry at a perturbed argument.
class NumericError : public std::runtime_error {
 public:
  NumericError(NumericErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  NumericErrorKind kind() const noexcept { return kind_; }

 private:
  NumericErrorKind kind_;
};

/// Model or distribution parameters outside their domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace occtime

#endif  // OCCTIME_ERRORS_HPP
