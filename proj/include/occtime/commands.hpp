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

#ifndef OCCTIME_COMMANDS_HPP
#define OCCTIME_COMMANDS_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "occtime/config.hpp"

namespace occtime {

/// A CSV table. Cells are preformatted; numbers use 17 significant digits.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double x);

/// Writes to `path` through a temporary file and a rename, so a failed run
/// never leaves a partial file behind. Empty path or "-" means `out`.
void write_csv(const Table& table, const std::string& path, std::ostream& out);

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<double> gamma;
  std::optional<int> euler_m;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Rows (theta1, theta2, L12, L1) over grid.theta1 x grid.theta2.
Table cmd_transform(const RunConfig& cfg, unsigned threads = 0);
/// Rows (t, s, F) over grid.t x grid.s.
Table cmd_cdf(const RunConfig& cfg, unsigned threads = 0);
/// Rows (t, s, f): centered differences of F on grid.s (one-sided at the ends).
Table cmd_density(const RunConfig& cfg, unsigned threads = 0);
/// simulate.kind = occupation: rows (rep, t, alpha); cycles: rows (cycle, d, u, phase).
Table cmd_simulate(const RunConfig& cfg, unsigned threads = 0);
/// Rows (quantity, theta1, theta2, t, s, analytic, empirical, std_error, z, pass).
/// Joint and L1 rows come from regenerative cycles, cdf rows (only when both
/// t and s grids are given) from simulated paths.
Table cmd_compare(const RunConfig& cfg, unsigned threads = 0);
/// Rows (r, t, s, F_fluid, F_mg1, abs_diff). Accepts an mg1 config, or a
/// fluid config whose ON rates are all equal.
Table cmd_limit_study(const RunConfig& cfg, unsigned threads = 0);

/// The M/G/1 limit model and the scaled fluid model at r for a limit study.
Mg1Model limit_target(const QueueModel& model);
FluidModel limit_fluid(const QueueModel& model, double r);

/// Exit codes: 0 success, 1 usage, 2 config error, 3 numeric failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace occtime

#endif  // OCCTIME_COMMANDS_HPP
