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

#ifndef OCCTIME_FLUID_MODEL_HPP
#define OCCTIME_FLUID_MODEL_HPP

#include <variant>

#include <Eigen/Dense>

#include "occtime/errors.hpp"
#include "occtime/phase_type.hpp"

namespace occtime {

// Modulating states are 0-based throughout: state 0 is OFF (drift r1 < 0),
// state j = 1..n is ON phase j-1 of the phase-type law.

/// Finite-buffer fluid queue fed by an ON/OFF source with exponential OFF
/// times (rate lambda) and phase-type ON times; workload doubly reflected
/// on [0, K].
class FluidModel {
 public:
  FluidModel(double lambda, PhaseType on, double r1, Eigen::VectorXd r_pos, double K, double tau);

  double lambda() const { return lambda_; }
  const PhaseType& on() const { return on_; }
  double r1() const { return r1_; }
  const Eigen::VectorXd& r_pos() const { return r_pos_; }
  double buffer() const { return K_; }
  double threshold() const { return tau_; }
  int phases() const { return on_.phases(); }

  /// (r1, r_pos...), one per modulating state.
  Eigen::VectorXd drift_rates() const;

  FluidModel with_level(double K, double tau) const;

 private:
  double lambda_;
  PhaseType on_;
  double r1_;
  Eigen::VectorXd r_pos_;
  double K_;
  double tau_;
};

/// Finite-buffer M/G/1 workload: Poisson(lambda) arrivals with phase-type
/// work, drained at rate |r1|, overflow beyond K lost.
class Mg1Model {
 public:
  Mg1Model(double lambda, PhaseType jump, double r1, double K, double tau);

  double lambda() const { return lambda_; }
  const PhaseType& jump() const { return jump_; }
  double r1() const { return r1_; }
  double buffer() const { return K_; }
  double threshold() const { return tau_; }
  int phases() const { return jump_.phases(); }

  Mg1Model with_level(double K, double tau) const;

 private:
  double lambda_;
  PhaseType jump_;
  double r1_;
  double K_;
  double tau_;
};

using QueueModel = std::variant<FluidModel, Mg1Model>;

double buffer(const QueueModel& m);
double threshold(const QueueModel& m);
int phases(const QueueModel& m);

/// Q = [[-lambda, lambda alpha0'], [t, T]].
Eigen::MatrixXd generator(const FluidModel& model);

/// F(z) = Q - z diag(r1, r_pos).
Eigen::MatrixXcd matrix_exponent(const FluidModel& model, cplx z);

/// phi(s) = -s r1 - lambda + lambda B[s].
cplx laplace_exponent(const Mg1Model& model, cplx s);

/// Long-run input over drain capacity.
double load(const FluidModel& model);
double load(const Mg1Model& model);
double load(const QueueModel& model);

/// Fluid approximation of an M/G/1 model: ON law (n, alpha0, r T) and all
/// positive rates equal to r. Converges to the M/G/1 workload as r grows.
FluidModel scaled_fluid(const Mg1Model& model, double r);

/// The n+1 roots at transform argument q with their null vectors h_k
/// (row k of `h`, h(k, 0) = 1).
struct RootSystem {
  cplx q;
  Eigen::VectorXcd roots;
  Eigen::MatrixXcd h;
  Eigen::VectorXd residuals;
};

/// Roots of det(Q - z Delta_r - q I) = 0. Requires Re q >= 0.
RootSystem roots(const FluidModel& model, cplx q);

/// Roots of phi(s) = q with h(k, j) = B_j[p_k]. Requires Re q >= 0.
RootSystem mg1_roots(const Mg1Model& model, cplx q);

RootSystem root_system(const QueueModel& model, cplx q);

/// Residual bound used when roots are asserted downstream.
double root_tolerance(const QueueModel& model, cplx q, cplx root);

}  // namespace occtime

#endif  // OCCTIME_FLUID_MODEL_HPP
