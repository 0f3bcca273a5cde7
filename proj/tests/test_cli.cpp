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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "occtime/commands.hpp"
#include "occtime/config.hpp"
#include "occtime/occupation_transform.hpp"

using namespace occtime;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

const char* const kFluid = R"(# comment line
model.type = fluid
model.lambda = 1.05
on.kind = coxian
on.p = [0.5]
on.mu = [18, 2.25]   # trailing comment
rates.r1 = -1
rates.pos = [1.8, 3.6]
buffer.K = 2
level.tau = 0.8
)";

const char* const kMg1 = R"(model.type = mg1
model.lambda = 1.05
jump.kind = erlang
jump.m = 2
jump.mu = 2.222
rates.r1 = -1
buffer.K = 2
level.tau = 0.8
)";

double cell(const Table& t, std::size_t row, const std::string& col) {
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] == col) return std::stod(t.rows.at(row).at(c));
  }
  FAIL("no column " << col);
  return 0.0;
}

// Checks that parsing fails and the message names `key` and `line`.
void expect_error(const std::string& text, const std::string& key, int line) {
  try {
    parse(text);
    FAIL("expected a ConfigError for " << key);
  } catch (const ConfigError& e) {
    CHECK(e.key() == key);
    CHECK(e.line() == line);
    CHECK(std::string(e.what()).find(key) != std::string::npos);
  }
}

int run(std::vector<std::string> args, std::string& out, std::string& err) {
  args.insert(args.begin(), "occtime");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream o, e;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  err = e.str();
  return code;
}

}  // namespace

TEST_CASE("parse a fluid config") {
  const RunConfig cfg = parse(std::string(kFluid) + "grid.s = linspace(0, 10, 6)\ngrid.t = 100\n");
  const auto& f = std::get<FluidModel>(cfg.model);
  CHECK(f.phases() == 2);
  CHECK(f.on().generator()(0, 1) == doctest::Approx(9.0));
  CHECK(f.threshold() == 0.8);
  CHECK(load(cfg.model) == doctest::Approx(0.945).epsilon(1e-3));
  CHECK(cfg.s == std::vector<double>{0, 2, 4, 6, 8, 10});
  CHECK(cfg.t == std::vector<double>{100});
  CHECK(cfg.outer.gamma == 8.0);
  CHECK(cfg.inner.gamma == 10.0);
  CHECK(cfg.outer.M == 10);
  CHECK(cfg.outer.N == 15);
}

TEST_CASE("parse a general phase-type block") {
  const RunConfig cfg = parse(R"(model.type = mg1
model.lambda = 1
jump.kind = general
jump.alpha0 = [0.25, 0.75]
jump.T = [[-3, 1], [0.5, -2]]
rates.r1 = -2
buffer.K = 1
level.tau = 0.5
inversion.gamma = 9
inversion.N = 20
simulate.reps = 123
simulate.seed = 9
)");
  const auto& m = std::get<Mg1Model>(cfg.model);
  CHECK(m.jump().alpha0()(1) == 0.75);
  CHECK(m.jump().generator()(1, 0) == 0.5);
  CHECK(cfg.outer.gamma == 9.0);
  CHECK(cfg.inner.gamma == 11.0);
  CHECK(cfg.outer.N == 20);
  CHECK(cfg.sim.reps == 123);
  CHECK(cfg.sim.seed == 9);
}

TEST_CASE("line-precise validation errors") {
  std::string bad_tau(kFluid);
  bad_tau.replace(bad_tau.find("level.tau = 0.8"), 15, "level.tau = 2.5");
  expect_error(bad_tau, "level.tau", 10);

  expect_error(std::string(kFluid) + "buffer.size = 3\n", "buffer.size", 11);
  expect_error(std::string(kFluid) + "level.tau = 0.5\n", "level.tau", 11);
  expect_error(std::string(kFluid) + "grid.s = [1, 3, 2]\n", "grid.s", 11);
  expect_error(std::string(kFluid) + "grid.t = [0, 1]\n", "grid.t", 11);
  expect_error(std::string(kFluid) + "grid.s = [1, 2\n", "grid.s", 11);
  expect_error(std::string(kFluid) + "inversion.M = 2.5\n", "inversion.M", 11);

  std::string bad_rates(kFluid);
  bad_rates.replace(bad_rates.find("[1.8, 3.6]"), 10, "[1.8]");
  expect_error(bad_rates, "rates.pos", 8);

  std::string bad_drain(kMg1);
  bad_drain.replace(bad_drain.find("-1"), 2, "1");
  expect_error(bad_drain, "rates.r1", 6);

  std::string bad_kind(kMg1);
  bad_kind.replace(bad_kind.find("erlang"), 6, "weibull");
  expect_error(bad_kind, "jump.kind", 3);

  expect_error("model.type = mg1\n", "model.lambda", 0);
  CHECK_THROWS_AS(parse("just words\n"), ConfigError);
}

TEST_CASE("shipped configs load with the expected load") {
  const std::filesystem::path dir = OCCTIME_CONFIG_DIR;
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    const RunConfig cfg = load_config(entry.path().string());
    CHECK(std::abs(load(cfg.model) - 0.945) <= 1e-3);
    ++count;
  }
  CHECK(count >= 6);
}

TEST_CASE("transform command") {
  RunConfig cfg = parse(kFluid);
  cfg.theta1 = {0.0, 0.5, 1.0, 2.0};
  cfg.theta2 = {0.0, 1.0};
  const Table t = cmd_transform(cfg);
  REQUIRE(t.rows.size() == 8);
  CHECK(t.header == std::vector<std::string>{"theta1", "theta2", "L12", "L1"});
  CHECK(cell(t, 0, "L12") == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(cell(t, i, "L12") > 0.0);
    CHECK(cell(t, i, "L12") <= 1.0 + 1e-12);
  }
  cfg.theta1.clear();
  CHECK_THROWS_AS(cmd_transform(cfg), ConfigError);
}

TEST_CASE("cdf and density commands") {
  RunConfig cfg = parse(kMg1);
  cfg.t = {100.0};
  for (int i = 0; i <= 100; i += 2) cfg.s.push_back(i);
  const Table F = cmd_cdf(cfg);
  REQUIRE(F.rows.size() == cfg.s.size());
  CHECK(cell(F, F.rows.size() - 1, "F") == doctest::Approx(1.0).epsilon(1e-3));
  for (std::size_t i = 1; i < F.rows.size(); ++i) CHECK(cell(F, i, "F") >= cell(F, i - 1, "F") - 1e-4);

  // The density integrates to P(0 < alpha < t) <= 1; F(t-) is read off just below t.
  cfg.s.back() = 99.999;
  const Table f = cmd_density(cfg);
  double area = 0.0;
  for (std::size_t i = 1; i < f.rows.size(); ++i) {
    area += 0.5 * (cell(f, i, "f") + cell(f, i - 1, "f")) * (cfg.s[i] - cfg.s[i - 1]);
  }
  const double inner_mass = occupation_cdf(cfg.model, 100.0, 99.999) - occupation_cdf(cfg.model, 100.0, 1e-9);
  CHECK(area <= 1.0 + 1e-3);
  CHECK(area == doctest::Approx(inner_mass).epsilon(0.02));
}

TEST_CASE("simulate and compare commands") {
  RunConfig cfg = parse(kFluid);
  cfg.t = {20.0};
  cfg.sim.reps = 50;
  const Table a = cmd_simulate(cfg);
  const Table b = cmd_simulate(cfg);
  CHECK(a.rows == b.rows);
  CHECK(a.rows.size() == 50);
  cfg.sim.kind = "cycles";
  CHECK(cmd_simulate(cfg).header == std::vector<std::string>{"cycle", "d", "u", "phase"});

  cfg.sim.reps = 10;
  cfg.theta1 = {1.0};
  cfg.theta2 = {1.0};
  cfg.s = {10.0};
  const Table c = cmd_compare(cfg);
  REQUIRE(c.rows.size() == 3);
  for (const auto& row : c.rows) {
    CHECK((row.back() == "pass" || row.back() == "fail"));
    CHECK(std::stod(row[7]) >= 0.0);
  }
}

TEST_CASE("limit study command") {
  RunConfig cfg = parse(kMg1);
  cfg.r = {10.0, 100.0};
  cfg.t = {100.0};
  cfg.s = {60.0};
  const Table t = cmd_limit_study(cfg);
  REQUIRE(t.rows.size() == 2);
  CHECK(cell(t, 0, "F_mg1") == cell(t, 1, "F_mg1"));
  CHECK(cell(t, 1, "abs_diff") < cell(t, 0, "abs_diff"));

  // r = 1 on a fluid config with equal rates reproduces the plain fluid CDF.
  RunConfig eq = parse(R"(model.type = fluid
model.lambda = 1.05
on.kind = erlang
on.m = 2
on.mu = 6
rates.r1 = -1
rates.pos = [2.7, 2.7]
buffer.K = 2
level.tau = 0.8
grid.r = [1]
grid.t = [50]
grid.s = [25]
)");
  const Table u = cmd_limit_study(eq);
  CHECK(cell(u, 0, "F_fluid") == doctest::Approx(occupation_cdf(eq.model, 50.0, 25.0)).epsilon(1e-12));

  RunConfig unequal = parse(kFluid);
  unequal.r = {10.0};
  unequal.t = {10.0};
  unequal.s = {5.0};
  CHECK_THROWS_AS(cmd_limit_study(unequal), ConfigError);
}

TEST_CASE("csv formatting and atomic output") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");

  const auto dir = std::filesystem::temp_directory_path() / "occtime_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg_path = (dir / "m.cfg").string();
  {
    std::ofstream f(cfg_path);
    f << kFluid << "grid.theta1 = [0, 1]\n";
  }
  const auto out_path = (dir / "out.csv").string();
  std::filesystem::remove(out_path);

  std::string out, err;
  CHECK(run({"transform", "--config", cfg_path, "--out", out_path}, out, err) == 0);
  std::ifstream in(out_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "theta1,theta2,L12,L1");
  CHECK_FALSE(std::filesystem::exists(out_path + ".partial"));

  CHECK(run({"transform", "--config", cfg_path}, out, err) == 0);
  CHECK(out.rfind("theta1,theta2,L12,L1\n0,0,", 0) == 0);

  // A failing command leaves no output file behind.
  const auto missing = (dir / "none.csv").string();
  CHECK(run({"cdf", "--config", cfg_path, "--out", missing}, out, err) == 2);
  CHECK(err.find("grid.t") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(missing));

  CHECK(run({"cdf"}, out, err) == 1);
  CHECK(run({"bogus", "--config", cfg_path}, out, err) == 1);
  CHECK(run({"transform", "--config", cfg_path, "--gamma", "40"}, out, err) == 1);
  std::filesystem::remove_all(dir);
}
