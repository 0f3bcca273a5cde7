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

#ifndef OCCTIME_SIMULATOR_HPP
#define OCCTIME_SIMULATOR_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "occtime/fluid_model.hpp"

namespace occtime {

/// Independent RNG stream for replication `rep` of a run seeded with `seed`.
/// Streams depend only on (seed, rep), never on scheduling.
std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t rep);

/// Breakpoint of an exact path. Between breakpoints the workload is linear
/// (fluid) or linear followed by a jump recorded as two breakpoints at the
/// same time (M/G/1). For M/G/1 paths `phase` is 0 while draining and j >= 1
/// while a jump in phase j-1 is being added.
struct PathState {
  double time = 0.0;
  double workload = 0.0;
  int phase = 0;
  double lower_local = 0.0;  // L: work added at 0
  double upper_local = 0.0;  // Lbar: work lost at K
  double free = 0.0;         // X: unreflected increment since time 0
};

struct PathRecord {
  std::vector<PathState> states;
  /// Time in [0, horizon] with workload <= tau.
  double occupation = 0.0;
};

/// Exact path from Q(0) = tau, J(0) = OFF up to `horizon`.
PathRecord simulate_path(const FluidModel& model, double horizon, std::uint64_t seed);
PathRecord simulate_mg1_path(const Mg1Model& model, double horizon, std::uint64_t seed);

/// One regenerative cycle: d is the time below tau until the upcrossing,
/// u the time above tau until the return; upcross_phase is the modulating
/// state 1..n at the upcrossing (for M/G/1: phase of the crossing jump + 1).
struct CycleSample {
  double d;
  double u;
  int upcross_phase;
};

std::vector<CycleSample> simulate_cycles(const QueueModel& model, std::size_t n_cycles, std::uint64_t seed,
                                         unsigned threads = 0);

/// Samples of alpha(t) for the occupation set [0, tau].
std::vector<double> simulate_occupation(const QueueModel& model, double t, double tau, std::size_t n_paths,
                                        std::uint64_t seed, unsigned threads = 0);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

Estimate estimate(std::span<const double> samples);

/// (1/n) sum exp(-theta1 d - theta2 u).
Estimate empirical_joint_transform(std::span<const CycleSample> cycles, double theta1, double theta2);

/// Fraction of samples <= s, with binomial standard error.
Estimate empirical_cdf(std::span<const double> samples, double s);

/// E[int_0^T e^{-theta s} 1{J(s) = j} dLbar(s) | J(0) = start_state] for
/// every ON state j (entry j-1), over the return period T to tau.
std::vector<Estimate> return_overflow_transform(const FluidModel& model, int start_state, double theta,
                                                std::size_t n, std::uint64_t seed);

/// E[int_0^sigma e^{-theta s} dL(s)] over the upcrossing period from (tau, OFF).
Estimate upcrossing_idle_transform(const FluidModel& model, double theta, std::size_t n, std::uint64_t seed);

}  // namespace occtime

#endif  // OCCTIME_SIMULATOR_HPP
