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

#ifndef OCCTIME_CROSSING_TRANSFORMS_HPP
#define OCCTIME_CROSSING_TRANSFORMS_HPP

#include <Eigen/Dense>

#include "occtime/errors.hpp"
#include "occtime/fluid_model.hpp"

namespace occtime {

/// Transforms of the upcrossing time sigma from (tau, OFF):
/// z(j) = E[exp(-theta1 sigma); J(sigma) = j+1] for ON phase j, and the
/// lower local-time transform ell.
struct UpcrossingSolution {
  cplx theta1;
  Eigen::VectorXcd z;
  cplx ell;
};

/// Transforms of the return time T to tau from above, one entry per
/// starting ON phase: w(j) = E[exp(-theta2 T) | J(0) = j+1]. Row j of
/// `ell_bar` holds the upper local-time transforms (per phase at which the
/// overflow happens) for that starting phase.
struct ReturnSolution {
  cplx theta2;
  Eigen::VectorXcd w;
  Eigen::MatrixXcd ell_bar;
};

struct ReturnSolve {
  cplx w;
  Eigen::VectorXcd ell_bar;
};

// Single-root-system solves. The transform argument is rs.q.

UpcrossingSolution solve_upcrossing(const RootSystem& rs, double tau);

/// `state` is the modulating state 1..n the return starts from.
ReturnSolve solve_return(const RootSystem& rs, double K, double tau, int state);

ReturnSolution solve_return_all(const RootSystem& rs, double K, double tau);

/// Cofactor expansion of the return system (Cramer's rule along the w column).
/// Independent of the LU path in solve_return; kept as a cross-check.
cplx w_via_determinants(const RootSystem& rs, double K, double tau, int state);

// Model-level evaluation. Degenerate or ill-conditioned points are retried at
// q + 1e-7 i u max(|q|, 1) for u = 1, 2, 3 before the error propagates.

UpcrossingSolution upcrossing(const QueueModel& model, cplx theta1);

/// theta2 == 0 short-circuits to w = 1 (finite return time); ell_bar is
/// left empty in that case.
ReturnSolution returns(const QueueModel& model, cplx theta2);

/// E exp(-theta1 D - theta2 U) = sum_j z_j(theta1) w_j(theta2).
cplx joint_transform(const QueueModel& model, cplx theta1, cplx theta2);
cplx joint_transform(const UpcrossingSolution& up, const ReturnSolution& ret);

/// E exp(-theta1 D) = sum_j z_j(theta1).
cplx l1(const QueueModel& model, cplx theta1);

}  // namespace occtime

#endif  // OCCTIME_CROSSING_TRANSFORMS_HPP
