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

#include "occtime/errors.hpp"

namespace occtime {

const char* to_string(NumericErrorKind kind) {
  switch (kind) {
    case NumericErrorKind::SingularMatrix: return "singular matrix";
    case NumericErrorKind::DegenerateRoots: return "degenerate roots";
    case NumericErrorKind::SingularSolve: return "singular solve";
    case NumericErrorKind::IllConditioned: return "ill-conditioned system";
    case NumericErrorKind::ZeroDenominator: return "zero denominator";
    case NumericErrorKind::ResidualTooLarge: return "residual too large";
  }
  return "numeric error";
}

}  // namespace occtime
