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

#include "occtime/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "occtime/crossing_transforms.hpp"
#include "occtime/occupation_transform.hpp"
#include "occtime/parallel.hpp"
#include "occtime/simulator.hpp"

namespace occtime {
namespace {

void require_grid(const std::vector<double>& g, const char* key) {
  if (g.empty()) throw ConfigError("<config>", 0, key, "this command needs a nonempty grid");
}

std::string fmt_int(long long x) { return std::to_string(x); }

// Re-raise a numeric failure with the grid point that caused it.
[[noreturn]] void rethrow_at(const NumericError& e, const std::string& where) {
  throw NumericError(e.kind(), std::string(e.what()) + " at " + where);
}

std::string point(const char* a, double x, const char* b, double y) {
  return std::string("(") + a + ", " + b + ") = (" + format_number(x) + ", " + format_number(y) + ")";
}

std::vector<double> cdf_row(const QueueModel& model, const RunConfig& cfg, double t, unsigned threads) {
  try {
    return occupation_cdf(model, t, cfg.s, cfg.outer, cfg.inner, threads);
  } catch (const NumericError& e) {
    rethrow_at(e, "t = " + format_number(t));
  }
}

std::vector<std::string> numeric_row(std::initializer_list<double> xs) {
  std::vector<std::string> row;
  row.reserve(xs.size());
  for (double x : xs) row.push_back(format_number(x));
  return row;
}

std::vector<double> horizons(const RunConfig& cfg) {
  if (cfg.sim.horizon > 0.0) return {cfg.sim.horizon};
  require_grid(cfg.t, "grid.t");
  return cfg.t;
}

void compare_row(Table& table, const std::string& quantity, std::initializer_list<double> coords, double analytic,
                 const Estimate& est) {
  const double diff = analytic - est.mean;
  double z = 0.0;
  if (est.std_error > 0.0) {
    z = diff / est.std_error;
  } else if (std::abs(diff) > 1e-12) {
    z = std::copysign(INFINITY, diff);
  }
  std::vector<std::string> row{quantity};
  for (double c : coords) row.push_back(std::isnan(c) ? "" : format_number(c));
  for (double x : {analytic, est.mean, est.std_error, z}) row.push_back(format_number(x));
  row.push_back(std::abs(z) <= 3.0 ? "pass" : "fail");
  table.rows.push_back(std::move(row));
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const Table& table, const std::string& path, std::ostream& out) {
  std::ostringstream body;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) body << (i ? "," : "") << cells[i];
    body << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);

  if (path.empty() || path == "-") {
    out << body.str();
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << body.str();
    f.close();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, target);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.sim.seed = *o.seed;
  if (o.reps) cfg.sim.reps = *o.reps;
  if (o.gamma) {
    cfg.outer.gamma = *o.gamma;
    cfg.inner.gamma = *o.gamma + 2.0;
  }
  if (o.euler_m) {
    cfg.outer.M = *o.euler_m;
    cfg.inner.M = *o.euler_m;
  }
  validate(cfg.outer);
  validate(cfg.inner);
}

Table cmd_transform(const RunConfig& cfg, unsigned threads) {
  require_grid(cfg.theta1, "grid.theta1");
  const auto& th2 = cfg.theta2.empty() ? cfg.theta1 : cfg.theta2;
  const std::size_t n1 = cfg.theta1.size();
  const std::size_t n2 = th2.size();

  // One upcrossing / return solve per grid value, then all pairs.
  std::vector<UpcrossingSolution> up(n1);
  std::vector<ReturnSolution> ret(n2);
  parallel_for(
      n1 + n2,
      [&](std::size_t i) {
        try {
          if (i < n1) {
            up[i] = upcrossing(cfg.model, cfg.theta1[i]);
          } else {
            ret[i - n1] = returns(cfg.model, th2[i - n1]);
          }
        } catch (const NumericError& e) {
          rethrow_at(e, i < n1 ? "theta1 = " + format_number(cfg.theta1[i])
                               : "theta2 = " + format_number(th2[i - n1]));
        }
      },
      threads);

  Table table{{"theta1", "theta2", "L12", "L1"}, {}};
  for (std::size_t i = 0; i < n1; ++i) {
    const double L1 = up[i].z.sum().real();
    for (std::size_t j = 0; j < n2; ++j) {
      const cplx L12 = joint_transform(up[i], ret[j]);
      if (!std::isfinite(L12.real())) {
        throw NumericError(NumericErrorKind::ResidualTooLarge,
                           "non-finite transform at " + point("theta1", cfg.theta1[i], "theta2", th2[j]));
      }
      table.rows.push_back(numeric_row({cfg.theta1[i], th2[j], L12.real(), L1}));
    }
  }
  return table;
}

Table cmd_cdf(const RunConfig& cfg, unsigned threads) {
  require_grid(cfg.t, "grid.t");
  require_grid(cfg.s, "grid.s");
  Table table{{"t", "s", "F"}, {}};
  for (double t : cfg.t) {
    const auto F = cdf_row(cfg.model, cfg, t, threads);
    for (std::size_t i = 0; i < cfg.s.size(); ++i) table.rows.push_back(numeric_row({t, cfg.s[i], F[i]}));
  }
  return table;
}

Table cmd_density(const RunConfig& cfg, unsigned threads) {
  require_grid(cfg.t, "grid.t");
  require_grid(cfg.s, "grid.s");
  if (cfg.s.size() < 2) throw ConfigError("<config>", 0, "grid.s", "density needs at least two s values");
  Table table{{"t", "s", "f"}, {}};
  const auto& s = cfg.s;
  const std::size_t n = s.size();
  for (double t : cfg.t) {
    const auto F = cdf_row(cfg.model, cfg, t, threads);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
      table.rows.push_back(numeric_row({t, s[i], (F[hi] - F[lo]) / (s[hi] - s[lo])}));
    }
  }
  return table;
}

Table cmd_simulate(const RunConfig& cfg, unsigned threads) {
  Table table;
  if (cfg.sim.kind == "cycles") {
    table.header = {"cycle", "d", "u", "phase"};
    const auto cycles = simulate_cycles(cfg.model, cfg.sim.reps, cfg.sim.seed, threads);
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      table.rows.push_back({fmt_int(static_cast<long long>(i)), format_number(cycles[i].d),
                            format_number(cycles[i].u), fmt_int(cycles[i].upcross_phase)});
    }
    return table;
  }
  table.header = {"rep", "t", "alpha"};
  for (double t : horizons(cfg)) {
    const auto alpha = simulate_occupation(cfg.model, t, threshold(cfg.model), cfg.sim.reps, cfg.sim.seed, threads);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      table.rows.push_back({fmt_int(static_cast<long long>(i)), format_number(t), format_number(alpha[i])});
    }
  }
  return table;
}

Table cmd_compare(const RunConfig& cfg, unsigned threads) {
  require_grid(cfg.theta1, "grid.theta1");
  const auto& th2 = cfg.theta2.empty() ? cfg.theta1 : cfg.theta2;
  Table table{{"quantity", "theta1", "theta2", "t", "s", "analytic", "empirical", "std_error", "z", "pass"}, {}};
  const double none = NAN;

  const auto cycles = simulate_cycles(cfg.model, cfg.sim.reps, cfg.sim.seed, threads);
  for (double a : cfg.theta1) {
    cplx L1;
    try {
      L1 = l1(cfg.model, a);
    } catch (const NumericError& e) {
      rethrow_at(e, "theta1 = " + format_number(a));
    }
    compare_row(table, "L1", {a, none, none, none}, L1.real(), empirical_joint_transform(cycles, a, 0.0));
    for (double b : th2) {
      cplx L12;
      try {
        L12 = joint_transform(cfg.model, a, b);
      } catch (const NumericError& e) {
        rethrow_at(e, point("theta1", a, "theta2", b));
      }
      compare_row(table, "L12", {a, b, none, none}, L12.real(), empirical_joint_transform(cycles, a, b));
    }
  }

  if (!cfg.t.empty() && !cfg.s.empty()) {
    for (double t : cfg.t) {
      // Independent stream from the cycle samples.
      const auto alpha =
          simulate_occupation(cfg.model, t, threshold(cfg.model), cfg.sim.reps, cfg.sim.seed + 1, threads);
      const auto F = cdf_row(cfg.model, cfg, t, threads);
      for (std::size_t i = 0; i < cfg.s.size(); ++i) {
        compare_row(table, "cdf", {none, none, t, cfg.s[i]}, F[i], empirical_cdf(alpha, cfg.s[i]));
      }
    }
  }
  return table;
}

Mg1Model limit_target(const QueueModel& model) {
  if (const auto* m = std::get_if<Mg1Model>(&model)) return *m;
  const auto& f = std::get<FluidModel>(model);
  const double c = f.r_pos()(0);
  if ((f.r_pos().array() != c).any()) {
    throw ConfigError("<config>", 0, "rates.pos", "limit study needs equal positive rates");
  }
  // Work brought by one ON period is c times its duration.
  return Mg1Model(f.lambda(), f.on().time_scaled(1.0 / c), f.r1(), f.buffer(), f.threshold());
}

FluidModel limit_fluid(const QueueModel& model, double r) {
  if (const auto* m = std::get_if<Mg1Model>(&model)) return scaled_fluid(*m, r);
  const auto& f = std::get<FluidModel>(model);
  limit_target(model);  // validates equal rates
  return FluidModel(f.lambda(), f.on().time_scaled(r), f.r1(), r * f.r_pos(), f.buffer(), f.threshold());
}

Table cmd_limit_study(const RunConfig& cfg, unsigned threads) {
  require_grid(cfg.r, "grid.r");
  require_grid(cfg.t, "grid.t");
  require_grid(cfg.s, "grid.s");
  const QueueModel target = limit_target(cfg.model);
  Table table{{"r", "t", "s", "F_fluid", "F_mg1", "abs_diff"}, {}};
  for (double t : cfg.t) {
    const auto G = cdf_row(target, cfg, t, threads);
    for (double r : cfg.r) {
      std::vector<double> F;
      try {
        F = cdf_row(limit_fluid(cfg.model, r), cfg, t, threads);
      } catch (const NumericError& e) {
        rethrow_at(e, "r = " + format_number(r));
      }
      for (std::size_t i = 0; i < cfg.s.size(); ++i) {
        table.rows.push_back(numeric_row({r, t, cfg.s[i], F[i], G[i], std::abs(F[i] - G[i])}));
      }
    }
  }
  return table;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Occupation-time distribution of a finite-buffer fluid queue"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  Overrides ov;
  unsigned threads = 0;

  using Command = std::function<Table(const RunConfig&, unsigned)>;
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"transform", "L12 and L1 over the theta grids", cmd_transform},
      {"cdf", "P(alpha(t) <= s) over the t and s grids", cmd_cdf},
      {"density", "density of alpha(t) by centered differences", cmd_density},
      {"simulate", "raw Monte Carlo samples", cmd_simulate},
      {"compare", "analytic vs Monte Carlo with 3 s.e. verdicts", cmd_compare},
      {"limit-study", "fluid CDF under rate scaling r vs the M/G/1 limit", cmd_limit_study},
  };
  const Command* chosen = nullptr;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "model config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output CSV (default stdout)");
    sub->add_option("--seed", ov.seed, "simulation seed");
    sub->add_option("--reps", ov.reps, "simulation replications")->check(CLI::PositiveNumber);
    sub->add_option("--gamma", ov.gamma, "Euler outer gamma (inner uses gamma + 2)")->check(CLI::Range(1.0, 15.0));
    sub->add_option("--euler-m", ov.euler_m, "Euler averaging terms M")->check(CLI::Range(0, 200));
    sub->add_option("--threads", threads, "worker threads (0 = hardware)");
    sub->callback([&chosen, f = &fn] { chosen = f; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = load_config(config_path);
    apply_overrides(cfg, ov);
    write_csv((*chosen)(cfg, threads), out_path, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace occtime
