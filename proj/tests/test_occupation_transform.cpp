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
#include <vector>

#include "fixtures.hpp"
#include "occtime/errors.hpp"
#include "occtime/occupation_transform.hpp"
#include "occtime/simulator.hpp"

using namespace occtime;

namespace {

// int_0^horizon exp(-q t - theta alpha(t)) dt along one exact path.
double path_double_transform(const PathRecord& rec, double tau, double q, double theta) {
  double alpha = 0.0;
  double acc = 0.0;
  auto below = [&](double t0, double t1) {
    acc += std::exp(-theta * alpha + theta * t0) * (std::exp(-(q + theta) * t0) - std::exp(-(q + theta) * t1)) /
           (q + theta);
    alpha += t1 - t0;
  };
  auto above = [&](double t0, double t1) {
    acc += std::exp(-theta * alpha) * (std::exp(-q * t0) - std::exp(-q * t1)) / q;
  };
  for (std::size_t i = 0; i + 1 < rec.states.size(); ++i) {
    const PathState& a = rec.states[i];
    const PathState& b = rec.states[i + 1];
    if (b.time <= a.time) continue;
    const bool a_in = a.workload <= tau;
    const bool b_in = b.workload <= tau;
    if (a_in == b_in) {
      a_in ? below(a.time, b.time) : above(a.time, b.time);
      continue;
    }
    const double tc = a.time + (b.time - a.time) * (tau - a.workload) / (b.workload - a.workload);
    if (a_in) {
      below(a.time, tc);
      above(tc, b.time);
    } else {
      above(a.time, tc);
      below(tc, b.time);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("theta = 0 collapses to 1/q") {
  for (const auto& [name, model] : fixtures::all_models()) {
    CAPTURE(name);
    const OccupationTransform ot(model);
    for (double q : {0.1, 0.5, 1.0, 5.0}) {
      const cplx v = ot.double_transform(q, 0.0);
      CHECK(std::abs(v - 1.0 / q) <= 1e-10 / q);
    }
  }
  const OccupationTransform ot(fixtures::fluid_coxian());
  CHECK(ot.double_transform(0.7, 0.0).real() == doctest::Approx(1.428571428571).epsilon(1e-10));
}

TEST_CASE("cdf transform divides by theta") {
  const OccupationTransform ot(fixtures::mg1_erlang2());
  for (cplx th : {cplx(0.5, 0.0), cplx(1.0, 3.0)}) {
    CHECK(std::abs(ot.cdf_transform(0.5, th) - ot.double_transform(0.5, th) / th) < 1e-14);
  }
  CHECK_THROWS_AS(ot.cdf_transform(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(ot.double_transform(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ot.double_transform(1.0, -2.0), DomainError);
}

TEST_CASE("slices agree with direct evaluation") {
  const OccupationTransform ot(fixtures::fluid_erlang2());
  const cplx q(0.4, 2.0);
  const auto slice = ot.at(q);
  for (cplx th : {cplx(0.3, 0.0), cplx(1.0, -4.0), cplx(2.0, 9.0)}) {
    CHECK(std::abs(slice.double_transform(th) - ot.double_transform(q, th)) < 1e-13);
  }
}

TEST_CASE("tau = K: alpha(t) = t") {
  const QueueModel full = fixtures::fluid_coxian().with_level(2.0, 2.0);
  const OccupationTransform ot(full);
  CHECK(std::abs(ot.double_transform(0.5, 0.5) - 1.0) < 1e-14);
  // The CDF is a unit step at s = t, which needs extra Euler averaging terms.
  const EulerParams outer{40, 15, 8.0};
  const EulerParams inner{40, 15, 10.0};
  CHECK(std::abs(invert_occupation_cdf(full, 10.0, 5.0, outer, inner)) < 1e-4);
  CHECK(std::abs(invert_occupation_cdf(full, 10.0, 20.0, outer, inner) - 1.0) < 1e-4);
  CHECK(mean_occupation(full, 100.0) == doctest::Approx(100.0).epsilon(1e-4));
}

TEST_CASE("double transform matches simulated paths") {
  const FluidModel f = fixtures::fluid_coxian();
  const double q = 0.5, theta = 0.5;
  const int n = 20000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = path_double_transform(simulate_path(f, 80.0, 1000 + i), 0.8, q, theta);
  const Estimate e = estimate(xs);
  const double analytic = OccupationTransform(f).double_transform(q, theta).real();
  CHECK(std::abs(analytic - e.mean) <= 3.0 * e.std_error);
}

TEST_CASE("inverted CDF: boundaries and monotonicity") {
  const QueueModel model = fixtures::fluid_coxian();
  CHECK(std::abs(invert_occupation_cdf(model, 100.0, 100.0) - 1.0) < 1e-3);
  CHECK(occupation_cdf(model, 100.0, -0.5) == 0.0);
  CHECK(occupation_cdf(model, 100.0, 100.0) == 1.0);

  std::vector<double> s;
  for (int i = 1; i <= 50; ++i) s.push_back(2.0 * i - 1.0);
  const auto F = occupation_cdf(model, 100.0, s);
  for (std::size_t i = 0; i < F.size(); ++i) {
    CHECK(F[i] >= -1e-4);
    CHECK(F[i] <= 1.0 + 1e-4);
    if (i > 0) CHECK(F[i] >= F[i - 1] - 1e-4);
  }
  // Grid and pointwise evaluation agree.
  CHECK(F[20] == doctest::Approx(occupation_cdf(model, 100.0, s[20])).epsilon(1e-12));
}

TEST_CASE("mean occupation") {
  const FluidModel f = fixtures::fluid_coxian();
  const double m08 = mean_occupation(f, 100.0);
  const double m04 = mean_occupation(f.with_level(2.0, 0.4), 100.0);
  CHECK(m08 >= m04);

  const auto alpha = simulate_occupation(f, 100.0, 0.8, 100000, 3);
  const Estimate e = estimate(alpha);
  CHECK(std::abs(m08 - e.mean) <= 3.0 * e.std_error);
}
