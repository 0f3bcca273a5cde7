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

#include "occtime/phase_type.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace occtime {
namespace {

constexpr double kTol = 1e-12;
constexpr double kMinRcond = 1e-12;

void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

}  // namespace

PhaseType::PhaseType(Eigen::VectorXd alpha0, Eigen::MatrixXd T)
    : alpha0_(std::move(alpha0)), T_(std::move(T)) {
  const Eigen::Index n = alpha0_.size();
  require(n >= 1, "phase-type: need at least one phase");
  require(T_.rows() == n && T_.cols() == n, "phase-type: T must be n x n with n = size(alpha0)");
  require(alpha0_.allFinite() && T_.allFinite(), "phase-type: non-finite entries");
  require((alpha0_.array() >= 0.0).all(), "phase-type: alpha0 entries must be >= 0");
  require(std::abs(alpha0_.sum() - 1.0) <= kTol, "phase-type: alpha0 must sum to 1");
  for (Eigen::Index i = 0; i < n; ++i) {
    require(T_(i, i) < 0.0, "phase-type: diagonal of T must be negative");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) require(T_(i, j) >= 0.0, "phase-type: off-diagonal of T must be >= 0");
    }
  }
  exit_ = -T_.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    // Row sums of a hand-written T can land a few ulps above zero.
    require(exit_(i) >= -kTol * std::abs(T_(i, i)), "phase-type: row sums of T must be <= 0");
    exit_(i) = std::max(exit_(i), 0.0);
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(T_);
  require(lu.rcond() > kMinRcond, "phase-type: T is singular (some phase is not transient)");
}

PhaseType PhaseType::time_scaled(double factor) const {
  require(factor > 0.0, "phase-type: scaling factor must be positive");
  return PhaseType(alpha0_, factor * T_);
}

PhaseType make_exponential(double mu) {
  require(mu > 0.0 && std::isfinite(mu), "exponential: rate must be positive");
  return PhaseType(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Constant(1, 1, -mu));
}

PhaseType make_erlang(int m, double mu) {
  require(m >= 1, "erlang: need m >= 1 stages");
  require(mu > 0.0 && std::isfinite(mu), "erlang: rate must be positive");
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    T(k, k) = -mu;
    if (k + 1 < m) T(k, k + 1) = mu;
  }
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  a(0) = 1.0;
  return PhaseType(a, T);
}

PhaseType make_coxian(std::span<const double> p, std::span<const double> mu) {
  const auto m = static_cast<Eigen::Index>(mu.size());
  require(m >= 1, "coxian: need at least one stage");
  require(p.size() + 1 == mu.size(), "coxian: need m-1 continuation probabilities for m stages");
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    require(mu[k] > 0.0 && std::isfinite(mu[k]), "coxian: rates must be positive");
    T(k, k) = -mu[k];
    if (k + 1 < m) {
      require(p[k] > 0.0 && p[k] <= 1.0, "coxian: continuation probabilities must lie in (0,1]");
      T(k, k + 1) = p[k] * mu[k];
    }
  }
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  a(0) = 1.0;
  return PhaseType(a, T);
}

double survival(const PhaseType& pt, double x) {
  if (!(x >= 0.0)) throw DomainError("survival: x must be >= 0");
  if (x == 0.0) return 1.0;
  const Eigen::MatrixXd E = (pt.generator() * x).exp();
  const double v = pt.alpha0().dot(E.rowwise().sum());
  return std::clamp(v, 0.0, 1.0);
}

namespace {

Eigen::PartialPivLU<Eigen::MatrixXcd> resolvent_lu(const PhaseType& pt, cplx s) {
  const int n = pt.phases();
  Eigen::MatrixXcd A = -pt.generator().cast<cplx>();
  A.diagonal().array() += s;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  if (!(lu.rcond() > kMinRcond)) {
    std::ostringstream os;
    os << "sI - T is numerically singular at s = " << s << " (n = " << n << ")";
    throw NumericError(NumericErrorKind::SingularMatrix, os.str());
  }
  return lu;
}

}  // namespace

cplx lst(const PhaseType& pt, cplx s, std::optional<int> init) {
  const auto lu = resolvent_lu(pt, s);
  const Eigen::VectorXcd x = lu.solve(pt.exit_rates().cast<cplx>());
  if (init) {
    if (*init < 0 || *init >= pt.phases()) throw DomainError("lst: initial phase out of range");
    return x(*init);
  }
  return (pt.alpha0().cast<cplx>().transpose() * x)(0);
}

cplx lst_derivative(const PhaseType& pt, cplx s) {
  // d/ds (sI - T)^{-1} t = -(sI - T)^{-2} t
  const auto lu = resolvent_lu(pt, s);
  const Eigen::VectorXcd x = lu.solve(pt.exit_rates().cast<cplx>());
  const Eigen::VectorXcd y = lu.solve(x);
  return -(pt.alpha0().cast<cplx>().transpose() * y)(0);
}

double mean(const PhaseType& pt) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(-pt.generator());
  if (!(lu.rcond() > kMinRcond)) throw NumericError(NumericErrorKind::SingularMatrix, "mean: T is singular");
  const Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(pt.phases()));
  return pt.alpha0().dot(x);
}

PhaseTypeSampler::PhaseTypeSampler(const PhaseType& pt) {
  const int n = pt.phases();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += pt.alpha0()(i);
    initial_cdf_.push_back(acc);
  }
  rate_.resize(n);
  jump_cdf_.resize(n);
  for (int i = 0; i < n; ++i) {
    rate_[i] = -pt.generator()(i, i);
    double c = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) c += pt.generator()(i, j) / rate_[i];
      jump_cdf_[i].push_back(c);
    }
  }
}

int PhaseTypeSampler::initial_phase(std::mt19937_64& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, initial_cdf_.back())(rng);
  const auto it = std::upper_bound(initial_cdf_.begin(), initial_cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - initial_cdf_.begin(), initial_cdf_.size() - 1));
}

double PhaseTypeSampler::holding_time(int phase, std::mt19937_64& rng) const {
  return std::exponential_distribution<double>(rate_[phase])(rng);
}

int PhaseTypeSampler::next_phase(int phase, std::mt19937_64& rng) const {
  const auto& cdf = jump_cdf_[phase];
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return -1;
  return static_cast<int>(it - cdf.begin());
}

PhaseTypeSample PhaseTypeSampler::sample(std::mt19937_64& rng) const {
  PhaseTypeSample out;
  for (int phase = initial_phase(rng); phase >= 0; phase = next_phase(phase, rng)) {
    const double d = holding_time(phase, rng);
    out.total += d;
    out.path.push_back({phase, d});
  }
  return out;
}

PhaseTypeSample sample(const PhaseType& pt, std::mt19937_64& rng) {
  return PhaseTypeSampler(pt).sample(rng);
}

}  // namespace occtime
