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

#ifndef OCCTIME_CONFIG_HPP
#define OCCTIME_CONFIG_HPP

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "occtime/fluid_model.hpp"
#include "occtime/laplace_inversion.hpp"

namespace occtime {

/// Parse or validation failure, pointing at the offending key and line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& key, const std::string& msg);

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

struct SimulationParams {
  std::size_t reps = 100000;
  std::uint64_t seed = 1;
  /// 0 means "use the t grid".
  double horizon = 0.0;
  /// "occupation" (alpha(t) samples) or "cycles" ((D, U) samples).
  std::string kind = "occupation";
};

/// Everything a CLI command needs. The model block is mandatory; grids
/// default to empty and each command checks the ones it uses.
struct RunConfig {
  QueueModel model;
  std::vector<double> theta1;
  std::vector<double> theta2;
  std::vector<double> t;
  std::vector<double> s;
  std::vector<double> r;
  EulerParams outer = kDefaultOuter;
  EulerParams inner = kDefaultInner;
  SimulationParams sim;
};

/// Flat `section.key = value` text. Values are numbers, bare words, lists
/// `[a, b]`, nested lists `[[a, b], [c, d]]` or `linspace(a, b, n)`.
/// `#` starts a comment.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace occtime

#endif  // OCCTIME_CONFIG_HPP
