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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "occtime/errors.hpp"
#include "occtime/phase_type.hpp"

using namespace occtime;

namespace {

PhaseType coxian_18() {
  const double p[] = {0.5};
  const double mu[] = {18.0, 2.25};
  return make_coxian(p, mu);
}

PhaseType coxian_5555() {
  const double p[] = {0.5};
  const double mu[] = {5.555, 0.694};
  return make_coxian(p, mu);
}

}  // namespace

TEST_CASE("factories build the canonical representations") {
  const PhaseType e = make_exponential(2.0);
  CHECK(e.phases() == 1);
  CHECK(e.alpha0()(0) == 1.0);
  CHECK(e.generator()(0, 0) == -2.0);
  CHECK(e.exit_rates()(0) == doctest::Approx(2.0));

  const PhaseType er = make_erlang(2, 6.0);
  Eigen::MatrixXd T(2, 2);
  T << -6, 6, 0, -6;
  CHECK(er.generator().isApprox(T));
  CHECK(er.alpha0()(0) == 1.0);
  CHECK(er.alpha0()(1) == 0.0);

  const PhaseType c = coxian_18();
  T << -18, 9, 0, -2.25;
  CHECK(c.generator().isApprox(T));
  CHECK(c.exit_rates()(0) == doctest::Approx(9.0));
  CHECK(c.exit_rates()(1) == doctest::Approx(2.25));
}

TEST_CASE("invalid representations are rejected") {
  CHECK_THROWS_AS(make_exponential(0.0), DomainError);
  CHECK_THROWS_AS(make_exponential(-1.0), DomainError);
  CHECK_THROWS_AS(make_erlang(0, 1.0), DomainError);
  const double bad_p[] = {1.5};
  const double mu[] = {1.0, 2.0};
  CHECK_THROWS_AS(make_coxian(bad_p, mu), DomainError);
  const double short_p[] = {0.5, 0.5};
  CHECK_THROWS_AS(make_coxian(short_p, mu), DomainError);

  Eigen::VectorXd a(2);
  a << 0.7, 0.7;
  CHECK_THROWS_AS(PhaseType(a, Eigen::MatrixXd::Identity(2, 2) * -1.0), DomainError);

  // Positive row sum: exit rate would be negative.
  Eigen::MatrixXd T(2, 2);
  T << -1, 2, 0, -1;
  a << 1, 0;
  CHECK_THROWS_AS(PhaseType(a, T), DomainError);

  // Closed class {0, 1}: not transient.
  T << -1, 1, 1, -1;
  CHECK_THROWS_AS(PhaseType(a, T), DomainError);
}

TEST_CASE("survival matches closed forms") {
  CHECK(survival(make_exponential(2.0), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(survival(make_exponential(2.0), 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(survival(make_erlang(2, 6.0), 0.5) == doctest::Approx(4.0 * std::exp(-3.0)).epsilon(1e-12));

  // Erlang(m, mu): sum_{k<m} e^{-mu x} (mu x)^k / k!
  for (double x : {0.1, 0.7, 2.0, 5.0}) {
    const double mu = 4.444;
    double term = std::exp(-mu * x);
    double expected = 0.0;
    for (int k = 0; k < 4; ++k) {
      expected += term;
      term *= mu * x / (k + 1);
    }
    CHECK(survival(make_erlang(4, mu), x) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("survival is a nonincreasing probability") {
  for (const PhaseType& pt : {make_exponential(2.0), make_erlang(2, 6.0), coxian_18(), coxian_5555()}) {
    CHECK(survival(pt, 0.0) == doctest::Approx(1.0));
    double prev = 1.0;
    for (int i = 1; i <= 200; ++i) {
      const double s = survival(pt, 0.05 * i);
      CHECK(s >= 0.0);
      CHECK(s <= prev + 1e-12);
      prev = s;
    }
  }
  CHECK_THROWS_AS(survival(make_exponential(1.0), -0.1), DomainError);
}

TEST_CASE("Laplace-Stieltjes transform") {
  CHECK(std::abs(lst(make_exponential(2.0), 0.0) - 1.0) < 1e-14);
  CHECK(std::abs(lst(make_exponential(2.0), 2.0) - 0.5) < 1e-14);
  CHECK(std::abs(lst(make_erlang(2, 6.0), 6.0) - 0.25) < 1e-14);

  // Started in the second Erlang stage only one stage remains.
  CHECK(std::abs(lst(make_erlang(2, 6.0), 6.0, 1) - 0.5) < 1e-14);
  CHECK_THROWS_AS(lst(make_erlang(2, 6.0), 1.0, 2), DomainError);

  const cplx s(0.3, 1.7);
  CHECK(std::abs(lst(make_exponential(2.0), s) - 2.0 / (s + 2.0)) < 1e-14);

  for (const PhaseType& pt : {make_exponential(2.0), make_erlang(2, 6.0), coxian_18(), coxian_5555()}) {
    double prev = 1.0 + 1e-15;
    for (double s = 0.0; s <= 20.0; s += 0.25) {
      const cplx v = lst(pt, s);
      CHECK(std::abs(v.imag()) < 1e-15);
      CHECK(v.real() >= 0.0);
      CHECK(v.real() <= prev);
      prev = v.real();
    }
  }
}

TEST_CASE("lst signals a singular evaluation point") {
  // sI - T is singular at s = -mu.
  CHECK_THROWS_AS(lst(make_exponential(2.0), -2.0), NumericError);
}

TEST_CASE("means") {
  CHECK(mean(make_exponential(1.111)) == doctest::Approx(1.0 / 1.111).epsilon(1e-13));
  CHECK(1.05 * mean(make_exponential(1.111)) == doctest::Approx(0.945).epsilon(1e-3));
  CHECK(mean(make_erlang(2, 2.222)) == doctest::Approx(2.0 / 2.222).epsilon(1e-13));
  CHECK(mean(coxian_5555()) == doctest::Approx(1.0 / 5.555 + 0.5 / 0.694).epsilon(1e-13));

  for (const PhaseType& pt : {make_exponential(2.0), make_erlang(2, 6.0), coxian_18(), coxian_5555()}) {
    const double h = 1e-6;
    const double fd = -(lst(pt, h).real() - lst(pt, 0.0).real()) / h;
    CHECK(fd == doctest::Approx(mean(pt)).epsilon(1e-4));
    CHECK(-lst_derivative(pt, 0.0).real() == doctest::Approx(mean(pt)).epsilon(1e-12));
  }
}

TEST_CASE("time scaling divides the mean") {
  const PhaseType c = coxian_18();
  CHECK(mean(c.time_scaled(10.0)) == doctest::Approx(mean(c) / 10.0).epsilon(1e-13));
  CHECK_THROWS_AS(c.time_scaled(0.0), DomainError);
}

TEST_CASE("sampling: exponential mean") {
  std::mt19937_64 rng(7);
  const PhaseType e = make_exponential(2.0);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) sum += sample(e, rng).total;
  CHECK(std::abs(sum / n - 0.5) < 0.002);
}

TEST_CASE("sampling: paths follow the chain structure") {
  std::mt19937_64 rng(8);
  const PhaseTypeSampler erl(make_erlang(2, 6.0));
  for (int i = 0; i < 1000; ++i) {
    const auto s = erl.sample(rng);
    REQUIRE(s.path.size() == 2);
    CHECK(s.path[0].phase == 0);
    CHECK(s.path[1].phase == 1);
    CHECK(s.total == doctest::Approx(s.path[0].duration + s.path[1].duration));
  }

  const PhaseTypeSampler cox(coxian_18());
  int reached = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) reached += cox.sample(rng).path.size() == 2;
  CHECK(std::abs(static_cast<double>(reached) / n - 0.5) < 0.005);
}

TEST_CASE("sampling: Kolmogorov-Smirnov distance to the survival function") {
  std::mt19937_64 rng(9);
  for (const PhaseType& pt : {make_erlang(2, 6.0), coxian_18(), coxian_5555()}) {
    const PhaseTypeSampler sampler(pt);
    const int n = 100000;
    std::vector<double> xs(n);
    for (double& x : xs) x = sampler.sample(rng).total;
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < n; i += 37) {
      const double F = 1.0 - survival(pt, xs[i]);
      ks = std::max({ks, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
    }
    CHECK(ks < 0.01);
  }
}
