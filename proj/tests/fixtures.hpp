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

#ifndef OCCTIME_TESTS_FIXTURES_HPP
#define OCCTIME_TESTS_FIXTURES_HPP

#include <string>
#include <utility>
#include <vector>

#include "occtime/fluid_model.hpp"
#include "occtime/phase_type.hpp"

namespace fixtures {

using occtime::FluidModel;
using occtime::Mg1Model;
using occtime::QueueModel;

inline constexpr double kLambda = 1.05;
inline constexpr double kR1 = -1.0;
inline constexpr double kK = 2.0;
inline constexpr double kTau = 0.8;

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline FluidModel fluid_exponential() {
  return FluidModel(kLambda, occtime::make_exponential(2.0), kR1, vec({1.8}), kK, kTau);
}

inline FluidModel fluid_erlang2() {
  return FluidModel(kLambda, occtime::make_erlang(2, 6.0), kR1, vec({1.8, 3.6}), kK, kTau);
}

inline FluidModel fluid_coxian() {
  const double p[] = {0.5};
  const double mu[] = {18.0, 2.25};
  return FluidModel(kLambda, occtime::make_coxian(p, mu), kR1, vec({1.8, 3.6}), kK, kTau);
}

inline Mg1Model mg1_exponential() { return Mg1Model(kLambda, occtime::make_exponential(1.111), kR1, kK, kTau); }
inline Mg1Model mg1_erlang2() { return Mg1Model(kLambda, occtime::make_erlang(2, 2.222), kR1, kK, kTau); }
inline Mg1Model mg1_erlang4() { return Mg1Model(kLambda, occtime::make_erlang(4, 4.444), kR1, kK, kTau); }

inline Mg1Model mg1_coxian() {
  const double p[] = {0.5};
  const double mu[] = {5.555, 0.694};
  return Mg1Model(kLambda, occtime::make_coxian(p, mu), kR1, kK, kTau);
}

/// The shipped example configurations, in the order of configs/*.cfg.
inline std::vector<std::pair<std::string, QueueModel>> all_models() {
  return {
      {"fluid_exponential", fluid_exponential()}, {"fluid_erlang2", fluid_erlang2()},
      {"fluid_coxian", fluid_coxian()},           {"mg1_exponential", mg1_exponential()},
      {"mg1_erlang2", mg1_erlang2()},             {"mg1_erlang4", mg1_erlang4()},
      {"mg1_coxian", mg1_coxian()},
  };
}

}  // namespace fixtures

#endif  // OCCTIME_TESTS_FIXTURES_HPP
