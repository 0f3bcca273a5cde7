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

#ifndef OCCTIME_PHASE_TYPE_HPP
#define OCCTIME_PHASE_TYPE_HPP

#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "occtime/errors.hpp"

namespace occtime {

/// Phase-type law (n, alpha0, T): absorption time of a transient CTMC with
/// initial distribution alpha0 and sub-generator T. Phases are 0-based.
class PhaseType {
 public:
  /// Validates the representation and throws DomainError on violation.
  PhaseType(Eigen::VectorXd alpha0, Eigen::MatrixXd T);

  int phases() const { return static_cast<int>(alpha0_.size()); }
  const Eigen::VectorXd& alpha0() const { return alpha0_; }
  const Eigen::MatrixXd& generator() const { return T_; }
  /// t = -T 1
  const Eigen::VectorXd& exit_rates() const { return exit_; }

  /// The same chain run `factor` times faster, i.e. (n, alpha0, factor*T).
  PhaseType time_scaled(double factor) const;

 private:
  Eigen::VectorXd alpha0_;
  Eigen::MatrixXd T_;
  Eigen::VectorXd exit_;
};

PhaseType make_exponential(double mu);
PhaseType make_erlang(int m, double mu);
/// Coxian chain with rates `mu` (m stages) and continuation probabilities
/// `p` (m-1 entries): after stage k the chain moves on with probability p[k]
/// and is absorbed otherwise.
PhaseType make_coxian(std::span<const double> p, std::span<const double> mu);

/// P(B > x) = alpha0' exp(T x) 1.
double survival(const PhaseType& pt, double x);

/// Laplace-Stieltjes transform alpha0'(sI - T)^{-1} t, or e_init'(sI - T)^{-1} t
/// when `init` names a starting phase.
cplx lst(const PhaseType& pt, cplx s, std::optional<int> init = std::nullopt);

/// d/ds of lst at s.
cplx lst_derivative(const PhaseType& pt, cplx s);

double mean(const PhaseType& pt);

struct PhaseSojourn {
  int phase;
  double duration;
};

struct PhaseTypeSample {
  double total = 0.0;
  std::vector<PhaseSojourn> path;
};

/// Embedded-chain sampler. Precomputes the jump distribution of every phase
/// so repeated draws do not touch the generator.
class PhaseTypeSampler {
 public:
  explicit PhaseTypeSampler(const PhaseType& pt);

  int initial_phase(std::mt19937_64& rng) const;
  double holding_time(int phase, std::mt19937_64& rng) const;
  /// Next phase after leaving `phase`, or -1 on absorption.
  int next_phase(int phase, std::mt19937_64& rng) const;

  PhaseTypeSample sample(std::mt19937_64& rng) const;

 private:
  std::vector<double> initial_cdf_;
  std::vector<double> rate_;
  // Row k: cumulative probabilities of moving to phases 0..n-1; the
  // remaining mass is absorption.
  std::vector<std::vector<double>> jump_cdf_;
};

PhaseTypeSample sample(const PhaseType& pt, std::mt19937_64& rng);

}  // namespace occtime

#endif  // OCCTIME_PHASE_TYPE_HPP
