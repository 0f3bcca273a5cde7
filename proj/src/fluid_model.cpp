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

#include "occtime/fluid_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace occtime {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw DomainError(msg);
}

void check_levels(double K, double tau) {
  require(K > 0.0 && std::isfinite(K), "buffer K must be positive");
  require(tau >= 0.0 && tau <= K, "threshold tau must lie in [0, K]");
}

constexpr int kPolishSteps = 3;
constexpr double kDistinctRel = 1e-9;
constexpr double kMinRcond = 1e-13;

void check_distinct(const Eigen::VectorXcd& r, cplx q) {
  for (Eigen::Index a = 0; a < r.size(); ++a) {
    for (Eigen::Index b = a + 1; b < r.size(); ++b) {
      const double scale = std::max({1.0, std::abs(r(a)), std::abs(r(b))});
      if (std::abs(r(a) - r(b)) <= kDistinctRel * scale) {
        std::ostringstream os;
        os << "roots " << a << " and " << b << " coincide at q = " << q;
        throw NumericError(NumericErrorKind::DegenerateRoots, os.str());
      }
    }
  }
}

void check_q(cplx q) {
  if (!(q.real() >= 0.0) || !std::isfinite(q.imag())) {
    std::ostringstream os;
    os << "roots requested at q = " << q << " (need Re q >= 0)";
    throw DomainError(os.str());
  }
}

// ON-block solve for the fluid h-vector: hbar = -(T - rho Dbar - q I)^{-1} t.
struct OnBlock {
  Eigen::VectorXcd hbar;
  Eigen::VectorXcd dhbar;  // d hbar / d rho
};

OnBlock on_block(const FluidModel& m, cplx rho, cplx q) {
  const int n = m.phases();
  Eigen::MatrixXcd B = m.on().generator().cast<cplx>();
  for (int j = 0; j < n; ++j) B(j, j) -= rho * m.r_pos()(j) + q;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(B);
  if (!(lu.rcond() > kMinRcond)) {
    std::ostringstream os;
    os << "T - rho Dbar - qI singular at rho = " << rho << ", q = " << q;
    throw NumericError(NumericErrorKind::SingularSolve, os.str());
  }
  OnBlock out;
  out.hbar = -lu.solve(m.on().exit_rates().cast<cplx>());
  out.dhbar = lu.solve((m.r_pos().cast<cplx>().array() * out.hbar.array()).matrix());
  return out;
}

// First row of (Q - rho Delta - qI) h with the ON rows already satisfied.
cplx fluid_defect(const FluidModel& m, cplx rho, cplx q, const Eigen::VectorXcd& hbar) {
  const cplx a = (m.on().alpha0().cast<cplx>().transpose() * hbar)(0);
  return -m.lambda() - rho * m.r1() - q + m.lambda() * a;
}

}  // namespace

FluidModel::FluidModel(double lambda, PhaseType on, double r1, Eigen::VectorXd r_pos, double K, double tau)
    : lambda_(lambda), on_(std::move(on)), r1_(r1), r_pos_(std::move(r_pos)), K_(K), tau_(tau) {
  require(lambda_ > 0.0 && std::isfinite(lambda_), "lambda must be positive");
  require(r1_ < 0.0 && std::isfinite(r1_), "r1 must be negative");
  require(r_pos_.size() == on_.phases(), "need one positive rate per ON phase");
  require((r_pos_.array() > 0.0).all() && r_pos_.allFinite(), "positive rates must be > 0");
  check_levels(K_, tau_);
}

Eigen::VectorXd FluidModel::drift_rates() const {
  Eigen::VectorXd d(phases() + 1);
  d(0) = r1_;
  d.tail(phases()) = r_pos_;
  return d;
}

FluidModel FluidModel::with_level(double K, double tau) const {
  return FluidModel(lambda_, on_, r1_, r_pos_, K, tau);
}

Mg1Model::Mg1Model(double lambda, PhaseType jump, double r1, double K, double tau)
    : lambda_(lambda), jump_(std::move(jump)), r1_(r1), K_(K), tau_(tau) {
  require(lambda_ > 0.0 && std::isfinite(lambda_), "lambda must be positive");
  require(r1_ < 0.0 && std::isfinite(r1_), "r1 must be negative");
  check_levels(K_, tau_);
}

Mg1Model Mg1Model::with_level(double K, double tau) const {
  return Mg1Model(lambda_, jump_, r1_, K, tau);
}

double buffer(const QueueModel& m) {
  return std::visit([](const auto& x) { return x.buffer(); }, m);
}

double threshold(const QueueModel& m) {
  return std::visit([](const auto& x) { return x.threshold(); }, m);
}

int phases(const QueueModel& m) {
  return std::visit([](const auto& x) { return x.phases(); }, m);
}

Eigen::MatrixXd generator(const FluidModel& model) {
  const int n = model.phases();
  Eigen::MatrixXd Q(n + 1, n + 1);
  Q(0, 0) = -model.lambda();
  Q.block(0, 1, 1, n) = model.lambda() * model.on().alpha0().transpose();
  Q.block(1, 0, n, 1) = model.on().exit_rates();
  Q.block(1, 1, n, n) = model.on().generator();
  return Q;
}

Eigen::MatrixXcd matrix_exponent(const FluidModel& model, cplx z) {
  Eigen::MatrixXcd F = generator(model).cast<cplx>();
  F.diagonal() -= z * model.drift_rates().cast<cplx>();
  return F;
}

cplx laplace_exponent(const Mg1Model& model, cplx s) {
  return -s * model.r1() - model.lambda() + model.lambda() * lst(model.jump(), s);
}

double load(const FluidModel& model) {
  // Expected time spent in each ON phase during one ON period.
  const Eigen::MatrixXd T = model.on().generator();
  const Eigen::RowVectorXd occupancy = model.on().alpha0().transpose() * (-T).inverse();
  return model.lambda() * occupancy.dot(model.r_pos()) / -model.r1();
}

double load(const Mg1Model& model) {
  return model.lambda() * mean(model.jump()) / -model.r1();
}

double load(const QueueModel& model) {
  return std::visit([](const auto& x) { return load(x); }, model);
}

FluidModel scaled_fluid(const Mg1Model& model, double r) {
  if (!(r > 0.0)) throw DomainError("scaled_fluid: r must be positive");
  return FluidModel(model.lambda(), model.jump().time_scaled(r), model.r1(),
                    Eigen::VectorXd::Constant(model.phases(), r), model.buffer(), model.threshold());
}

RootSystem roots(const FluidModel& model, cplx q) {
  check_q(q);
  const int n = model.phases();
  const Eigen::MatrixXd Q = generator(model);
  const Eigen::VectorXd d = model.drift_rates();

  // det(Q - z Delta - qI) = 0  <=>  z is an eigenvalue of Delta^{-1}(Q - qI).
  Eigen::MatrixXcd A = Q.cast<cplx>();
  A.diagonal().array() -= q;
  for (int i = 0; i <= n; ++i) A.row(i) /= d(i);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  if (es.info() != Eigen::Success) throw NumericError(NumericErrorKind::DegenerateRoots, "eigen solver failed");

  RootSystem rs;
  rs.q = q;
  rs.roots = es.eigenvalues();
  rs.h.resize(n + 1, n + 1);
  rs.residuals.resize(n + 1);

  for (int k = 0; k <= n; ++k) {
    cplx rho = rs.roots(k);
    OnBlock ob = on_block(model, rho, q);
    cplx g = fluid_defect(model, rho, q, ob.hbar);
    for (int step = 0; step < kPolishSteps && g != 0.0; ++step) {
      const cplx dg = -model.r1() + model.lambda() * (model.on().alpha0().cast<cplx>().transpose() * ob.dhbar)(0);
      if (dg == 0.0) break;
      const cplx cand = rho - g / dg;
      OnBlock ob2 = on_block(model, cand, q);
      const cplx g2 = fluid_defect(model, cand, q, ob2.hbar);
      if (!(std::abs(g2) < std::abs(g))) break;
      rho = cand;
      ob = std::move(ob2);
      g = g2;
    }
    rs.roots(k) = rho;
    rs.h(k, 0) = 1.0;
    rs.h.block(k, 1, 1, n) = ob.hbar.transpose();
  }
  check_distinct(rs.roots, q);

  const QueueModel qm = model;
  for (int k = 0; k <= n; ++k) {
    const Eigen::VectorXcd hk = rs.h.row(k).transpose();
    const Eigen::VectorXcd res = matrix_exponent(model, rs.roots(k)) * hk - q * hk;
    rs.residuals(k) = res.cwiseAbs().maxCoeff();
    if (!(rs.residuals(k) <= root_tolerance(qm, q, rs.roots(k)))) {
      std::ostringstream os;
      os << "root " << k << " residual " << rs.residuals(k) << " at q = " << q;
      throw NumericError(NumericErrorKind::ResidualTooLarge, os.str());
    }
  }
  return rs;
}

RootSystem mg1_roots(const Mg1Model& model, cplx q) {
  check_q(q);
  const int n = model.phases();
  const double c = -model.r1();
  const PhaseType& B = model.jump();

  // Companion-style linearisation of phi(s) = q: with v = (sI - T)^{-1} t,
  //   s = (lambda + q - lambda alpha0'v) / c,   s v = t + T v.
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  M(0, 0) = (model.lambda() + q) / c;
  M.block(0, 1, 1, n) = (-model.lambda() / c) * B.alpha0().transpose().cast<cplx>();
  M.block(1, 0, n, 1) = B.exit_rates().cast<cplx>();
  M.block(1, 1, n, n) = B.generator().cast<cplx>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) throw NumericError(NumericErrorKind::DegenerateRoots, "eigen solver failed");

  RootSystem rs;
  rs.q = q;
  rs.roots = es.eigenvalues();
  rs.h.resize(n + 1, n + 1);
  rs.residuals.resize(n + 1);

  for (int k = 0; k <= n; ++k) {
    cplx p = rs.roots(k);
    cplx g = laplace_exponent(model, p) - q;
    for (int step = 0; step < kPolishSteps && g != 0.0; ++step) {
      const cplx dg = -model.r1() + model.lambda() * lst_derivative(B, p);
      if (dg == 0.0) break;
      const cplx cand = p - g / dg;
      const cplx g2 = laplace_exponent(model, cand) - q;
      if (!(std::abs(g2) < std::abs(g))) break;
      p = cand;
      g = g2;
    }
    rs.roots(k) = p;
    rs.residuals(k) = std::abs(g);
  }
  check_distinct(rs.roots, q);

  const QueueModel qm = model;
  for (int k = 0; k <= n; ++k) {
    rs.h(k, 0) = 1.0;
    for (int j = 0; j < n; ++j) rs.h(k, j + 1) = lst(B, rs.roots(k), j);
    if (!(rs.residuals(k) <= root_tolerance(qm, q, rs.roots(k)))) {
      std::ostringstream os;
      os << "root " << k << " residual " << rs.residuals(k) << " at q = " << q;
      throw NumericError(NumericErrorKind::ResidualTooLarge, os.str());
    }
  }
  return rs;
}

RootSystem root_system(const QueueModel& model, cplx q) {
  if (const auto* f = std::get_if<FluidModel>(&model)) return roots(*f, q);
  return mg1_roots(std::get<Mg1Model>(model), q);
}

double root_tolerance(const QueueModel& model, cplx q, cplx root) {
  if (const auto* f = std::get_if<FluidModel>(&model)) {
    const double qnorm = generator(*f).cwiseAbs().rowwise().sum().maxCoeff();
    const double dmax = f->drift_rates().cwiseAbs().maxCoeff();
    return 1e-8 * (qnorm + std::abs(q) + std::abs(root) * dmax);
  }
  const auto& m = std::get<Mg1Model>(model);
  return 1e-9 * (1.0 + std::abs(q) + std::abs(root) * std::abs(m.r1()));
}

}  // namespace occtime
