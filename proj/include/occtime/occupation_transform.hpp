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

#ifndef OCCTIME_OCCUPATION_TRANSFORM_HPP
#define OCCTIME_OCCUPATION_TRANSFORM_HPP

#include <span>
#include <vector>

#include "occtime/crossing_transforms.hpp"
#include "occtime/fluid_model.hpp"
#include "occtime/laplace_inversion.hpp"

namespace occtime {

/// Transforms of the occupation time alpha(t) of [0, tau] built from the
/// alternating (D, U) renewal structure:
///
///   int e^{-qt} E e^{-theta alpha(t)} dt
///     = [ (1 - L1(q+theta)) / (q+theta) + (L1(q+theta) - L12(q+theta, q)) / q ]
///       / (1 - L12(q+theta, q)).
class OccupationTransform {
 public:
  explicit OccupationTransform(QueueModel model);

  const QueueModel& model() const { return model_; }

  /// Requires Re q > 0 and Re(q + theta) > 0.
  cplx double_transform(cplx q, cplx theta) const;

  /// double_transform / theta: the (t, s) transform of P(alpha(t) <= s).
  cplx cdf_transform(cplx q, cplx theta) const;

  /// Evaluator at a fixed q. The return-time transforms w(q) are computed once
  /// and reused for every theta, which is what the inner inversion needs.
  class Slice {
   public:
    cplx double_transform(cplx theta) const;
    cplx cdf_transform(cplx theta) const;
    cplx q() const { return q_; }

   private:
    friend class OccupationTransform;
    const OccupationTransform* parent_ = nullptr;
    cplx q_;
    ReturnSolution ret_;
  };

  Slice at(cplx q) const;

 private:
  QueueModel model_;
  // tau == K: the workload never leaves [0, tau] and alpha(t) = t.
  bool whole_buffer_;
};

/// P(alpha(t) <= s) by Euler-Euler inversion of the CDF transform. Returns 0
/// for s <= 0 and 1 for s >= t without inverting.
double occupation_cdf(const QueueModel& model, double t, double s, const EulerParams& outer = kDefaultOuter,
                      const EulerParams& inner = kDefaultInner);

/// Same over a grid of s values at one horizon; outer-node work is shared and
/// grid points are evaluated on a worker pool. Output is in grid order.
std::vector<double> occupation_cdf(const QueueModel& model, double t, std::span<const double> s,
                                   const EulerParams& outer = kDefaultOuter,
                                   const EulerParams& inner = kDefaultInner, unsigned threads = 0);

/// Raw 2-D inversion with no endpoint short-cuts (any s > 0).
double invert_occupation_cdf(const QueueModel& model, double t, double s, const EulerParams& outer = kDefaultOuter,
                             const EulerParams& inner = kDefaultInner);

/// E alpha(t): 1-D inversion of -d/dtheta double_transform at theta = 0,
/// with the derivative taken by a central difference of step 1e-5.
double mean_occupation(const QueueModel& model, double t, const EulerParams& p = kDefaultOuter);

}  // namespace occtime

#endif  // OCCTIME_OCCUPATION_TRANSFORM_HPP
