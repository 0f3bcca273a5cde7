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

#include "occtime/crossing_transforms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace occtime {
namespace {

constexpr double kMinRcond = 1e-12;
constexpr double kResidualRel = 1e-10;

// Row- and column-equilibrated LU solve of A X = B. Rows of A are expected
// to be pre-scaled so that no entry overflows.
Eigen::MatrixXcd solve_equilibrated(Eigen::MatrixXcd A, Eigen::MatrixXcd B, const char* what) {
  const Eigen::Index n = A.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = A.row(i).cwiseAbs().maxCoeff();
    if (m > 0.0 && std::isfinite(m)) {
      A.row(i) /= m;
      B.row(i) /= m;
    }
  }
  Eigen::VectorXd col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double m = A.col(j).cwiseAbs().maxCoeff();
    col(j) = (m > 0.0 && std::isfinite(m)) ? 1.0 / m : 1.0;
    A.col(j) *= col(j);
  }
  if (!A.allFinite() || !B.allFinite()) {
    throw NumericError(NumericErrorKind::IllConditioned, std::string(what) + ": non-finite system entries");
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const double rc = lu.rcond();
  if (!(rc > kMinRcond)) {
    std::ostringstream os;
    os << what << ": reciprocal condition " << rc;
    throw NumericError(NumericErrorKind::IllConditioned, os.str());
  }
  Eigen::MatrixXcd Y = lu.solve(B);
  const Eigen::MatrixXcd R = A * Y - B;
  for (Eigen::Index c = 0; c < B.cols(); ++c) {
    const double scale = Y.col(c).cwiseAbs().maxCoeff() + B.col(c).cwiseAbs().maxCoeff();
    if (!(R.col(c).cwiseAbs().maxCoeff() <= kResidualRel * std::max(scale, 1e-300))) {
      throw NumericError(NumericErrorKind::IllConditioned, std::string(what) + ": residual check failed");
    }
  }
  return col.asDiagonal() * Y;
}

// Row k of the return system, scaled so the exponential never exceeds one:
//   w + sum_j lbar_j (-rho_k e^{-rho_k (K - tau)} h_kj) = h_ki.
// Returns the row factor applied to the right-hand side.
cplx return_row(const RootSystem& rs, Eigen::Index k, double gap, Eigen::MatrixXcd& A) {
  const Eigen::Index n = rs.h.cols() - 1;
  const cplx rho = rs.roots(k);
  const cplx e = -rho * gap;
  cplx lead = 1.0;
  cplx coef;
  cplx factor = 1.0;
  if (e.real() > 0.0) {
    factor = std::exp(-e);
    lead = factor;
    coef = -rho;
  } else {
    coef = -rho * std::exp(e);
  }
  A(k, 0) = lead;
  for (Eigen::Index j = 0; j < n; ++j) A(k, j + 1) = coef * rs.h(k, j + 1);
  return factor;
}

void check_state(const RootSystem& rs, int state) {
  if (state < 1 || state >= rs.h.cols()) throw DomainError("return: starting state must be an ON phase 1..n");
}

void check_theta(cplx theta, const char* name) {
  if (!(theta.real() >= 0.0) || !std::isfinite(theta.imag())) {
    std::ostringstream os;
    os << name << " = " << theta << " must have Re >= 0";
    throw DomainError(os.str());
  }
}

template <class Fn>
auto with_retry(cplx q, Fn&& fn) -> decltype(fn(q)) {
  constexpr int kRetries = 3;
  for (int u = 0;; ++u) {
    const cplx qq = q + cplx(0.0, 1e-7 * u * std::max(std::abs(q), 1.0));
    try {
      return fn(qq);
    } catch (const NumericError& e) {
      const auto k = e.kind();
      const bool retryable = k == NumericErrorKind::DegenerateRoots || k == NumericErrorKind::IllConditioned ||
                             k == NumericErrorKind::SingularSolve;
      if (!retryable || u == kRetries) throw;
    }
  }
}

}  // namespace

UpcrossingSolution solve_upcrossing(const RootSystem& rs, double tau) {
  const Eigen::Index m = rs.roots.size();
  const Eigen::Index n = m - 1;
  Eigen::MatrixXcd A(m, m);
  Eigen::MatrixXcd b(m, 1);
  for (Eigen::Index k = 0; k < m; ++k) {
    const cplx rho = rs.roots(k);
    const cplx e = rho * tau;
    if (e.real() > 0.0) {
      // Divide the row by e^{rho tau}.
      const cplx f = std::exp(-e);
      A.block(k, 0, 1, n) = f * rs.h.block(k, 1, 1, n);
      A(k, n) = rho;
      b(k, 0) = f;
    } else {
      A.block(k, 0, 1, n) = rs.h.block(k, 1, 1, n);
      A(k, n) = rho * std::exp(e);
      b(k, 0) = 1.0;
    }
  }
  const Eigen::MatrixXcd x = solve_equilibrated(std::move(A), std::move(b), "upcrossing system");
  UpcrossingSolution out;
  out.theta1 = rs.q;
  out.z = x.col(0).head(n);
  out.ell = x(n, 0);
  return out;
}

ReturnSolve solve_return(const RootSystem& rs, double K, double tau, int state) {
  check_state(rs, state);
  const Eigen::Index m = rs.roots.size();
  Eigen::MatrixXcd A(m, m);
  Eigen::MatrixXcd b(m, 1);
  for (Eigen::Index k = 0; k < m; ++k) {
    const cplx f = return_row(rs, k, K - tau, A);
    b(k, 0) = f * rs.h(k, state);
  }
  const Eigen::MatrixXcd x = solve_equilibrated(std::move(A), std::move(b), "return system");
  return {x(0, 0), x.col(0).tail(m - 1)};
}

ReturnSolution solve_return_all(const RootSystem& rs, double K, double tau) {
  const Eigen::Index m = rs.roots.size();
  const Eigen::Index n = m - 1;
  Eigen::MatrixXcd A(m, m);
  Eigen::MatrixXcd B(m, n);
  for (Eigen::Index k = 0; k < m; ++k) {
    const cplx f = return_row(rs, k, K - tau, A);
    B.row(k) = f * rs.h.block(k, 1, 1, n);
  }
  const Eigen::MatrixXcd X = solve_equilibrated(std::move(A), std::move(B), "return system");
  ReturnSolution out;
  out.theta2 = rs.q;
  out.w = X.row(0).transpose();
  out.ell_bar = X.bottomRows(n).transpose();
  return out;
}

cplx w_via_determinants(const RootSystem& rs, double K, double tau, int state) {
  check_state(rs, state);
  const Eigen::Index m = rs.roots.size();
  const Eigen::Index n = m - 1;
  const double gap = K - tau;

  // Row k of the minor matrix is rho_k h_k e^{-rho_k gap}. Factor each row
  // as e^{-rho_k gap} * beta_k * (unit-max row) so that the cofactor
  // weights can be formed in log-magnitude without overflow.
  Eigen::MatrixXcd rows(m, n);
  Eigen::VectorXd log_beta(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    rows.row(k) = rs.roots(k) * rs.h.block(k, 1, 1, n);
    const double beta = rows.row(k).cwiseAbs().maxCoeff();
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw NumericError(NumericErrorKind::ZeroDenominator, "determinant row is zero or non-finite");
    }
    rows.row(k) /= beta;
    log_beta(k) = std::log(beta);
  }

  // c_k = prod_{l != k}(e^{-rho_l gap} beta_l) * det_k; dividing every c_k by
  // the full product leaves weight_k = det_k * e^{rho_k gap} / beta_k.
  Eigen::VectorXcd log_mag(m);
  Eigen::VectorXcd minor_det(m);
  double shift = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::MatrixXcd minor(n, n);
    for (Eigen::Index r = 0, out = 0; r < m; ++r) {
      if (r != k) minor.row(out++) = rows.row(r);
    }
    minor_det(k) = n > 0 ? minor.determinant() : cplx(1.0);
    log_mag(k) = rs.roots(k) * gap - log_beta(k);
    shift = std::max(shift, log_mag(k).real());
  }

  cplx num = 0.0;
  cplx den = 0.0;
  double den_scale = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const cplx weight = sign * minor_det(k) * std::exp(log_mag(k) - shift);
    num += weight * rs.h(k, state);
    den += weight;
    den_scale += std::abs(weight);
  }
  if (!(std::abs(den) > 1e-14 * den_scale)) {
    std::ostringstream os;
    os << "C(theta2) vanishes at theta2 = " << rs.q;
    throw NumericError(NumericErrorKind::ZeroDenominator, os.str());
  }
  return num / den;
}

UpcrossingSolution upcrossing(const QueueModel& model, cplx theta1) {
  check_theta(theta1, "theta1");
  const double tau = threshold(model);
  auto out = with_retry(theta1, [&](cplx q) { return solve_upcrossing(root_system(model, q), tau); });
  out.theta1 = theta1;
  return out;
}

ReturnSolution returns(const QueueModel& model, cplx theta2) {
  check_theta(theta2, "theta2");
  if (theta2 == 0.0) {
    ReturnSolution out;
    out.theta2 = 0.0;
    out.w = Eigen::VectorXcd::Ones(phases(model));
    return out;
  }
  const double K = buffer(model);
  const double tau = threshold(model);
  auto out = with_retry(theta2, [&](cplx q) { return solve_return_all(root_system(model, q), K, tau); });
  out.theta2 = theta2;
  return out;
}

cplx joint_transform(const UpcrossingSolution& up, const ReturnSolution& ret) {
  return (up.z.array() * ret.w.array()).sum();
}

cplx joint_transform(const QueueModel& model, cplx theta1, cplx theta2) {
  return joint_transform(upcrossing(model, theta1), returns(model, theta2));
}

cplx l1(const QueueModel& model, cplx theta1) {
  return upcrossing(model, theta1).z.sum();
}

}  // namespace occtime
