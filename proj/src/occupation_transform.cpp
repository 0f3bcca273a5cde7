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

#include "occtime/occupation_transform.hpp"

#include <cmath>
#include <sstream>

#include "occtime/parallel.hpp"

namespace occtime {
namespace {

constexpr double kMinDenominator = 1e-14;
constexpr double kMeanStep = 1e-5;

cplx combine(cplx q, cplx theta, cplx L1, cplx L12) {
  const cplx den = 1.0 - L12;
  if (!(std::abs(den) >= kMinDenominator)) {
    std::ostringstream os;
    os << "1 - L12 vanishes at q = " << q << ", theta = " << theta;
    throw NumericError(NumericErrorKind::ZeroDenominator, os.str());
  }
  const cplx qt = q + theta;
  return ((1.0 - L1) / qt + (L1 - L12) / q) / den;
}

void check_args(cplx q, cplx theta) {
  if (!(q.real() > 0.0) || !((q + theta).real() > 0.0)) {
    std::ostringstream os;
    os << "double transform needs Re q > 0 and Re(q + theta) > 0, got q = " << q << ", theta = " << theta;
    throw DomainError(os.str());
  }
}

}  // namespace

OccupationTransform::OccupationTransform(QueueModel model)
    : model_(std::move(model)), whole_buffer_(threshold(model_) >= buffer(model_)) {}

cplx OccupationTransform::double_transform(cplx q, cplx theta) const {
  check_args(q, theta);
  if (whole_buffer_) return 1.0 / (q + theta);
  return at(q).double_transform(theta);
}

cplx OccupationTransform::cdf_transform(cplx q, cplx theta) const {
  if (theta == 0.0) throw DomainError("cdf_transform needs theta != 0");
  return double_transform(q, theta) / theta;
}

OccupationTransform::Slice OccupationTransform::at(cplx q) const {
  check_args(q, 0.0);
  Slice s;
  s.parent_ = this;
  s.q_ = q;
  if (!whole_buffer_) s.ret_ = returns(model_, q);
  return s;
}

cplx OccupationTransform::Slice::double_transform(cplx theta) const {
  check_args(q_, theta);
  if (parent_->whole_buffer_) return 1.0 / (q_ + theta);
  const UpcrossingSolution up = upcrossing(parent_->model_, q_ + theta);
  const cplx L1 = up.z.sum();
  const cplx L12 = joint_transform(up, ret_);
  return combine(q_, theta, L1, L12);
}

cplx OccupationTransform::Slice::cdf_transform(cplx theta) const {
  if (theta == 0.0) throw DomainError("cdf_transform needs theta != 0");
  return double_transform(theta) / theta;
}

double invert_occupation_cdf(const QueueModel& model, double t, double s, const EulerParams& outer,
                             const EulerParams& inner) {
  const OccupationTransform ot(model);
  const EulerRule rule(t, outer);
  std::vector<cplx> g;
  g.reserve(rule.nodes().size());
  for (cplx q : rule.nodes()) {
    const auto slice = ot.at(q);
    g.push_back(euler_invert_1d_complex([&](cplx theta) { return slice.cdf_transform(theta); }, s, inner));
  }
  return rule.combine_real(g);
}

double occupation_cdf(const QueueModel& model, double t, double s, const EulerParams& outer,
                      const EulerParams& inner) {
  const double grid[] = {s};
  return occupation_cdf(model, t, grid, outer, inner, 1).front();
}

std::vector<double> occupation_cdf(const QueueModel& model, double t, std::span<const double> s,
                                   const EulerParams& outer, const EulerParams& inner, unsigned threads) {
  validate(inner);
  const OccupationTransform ot(model);
  const EulerRule rule(t, outer);
  std::vector<OccupationTransform::Slice> slices;
  for (cplx q : rule.nodes()) slices.push_back(ot.at(q));

  std::vector<double> out(s.size());
  parallel_for(
      s.size(),
      [&](std::size_t i) {
        if (!(s[i] > 0.0)) {
          out[i] = 0.0;
          return;
        }
        if (s[i] >= t) {
          out[i] = 1.0;
          return;
        }
        std::vector<cplx> g;
        g.reserve(slices.size());
        for (const auto& slice : slices) {
          g.push_back(
              euler_invert_1d_complex([&](cplx theta) { return slice.cdf_transform(theta); }, s[i], inner));
        }
        out[i] = rule.combine_real(g);
      },
      threads);
  return out;
}

double mean_occupation(const QueueModel& model, double t, const EulerParams& p) {
  const OccupationTransform ot(model);
  return euler_invert_1d(
      [&](cplx q) {
        const auto slice = ot.at(q);
        return -(slice.double_transform(kMeanStep) - slice.double_transform(-kMeanStep)) / (2.0 * kMeanStep);
      },
      t, p);
}

}  // namespace occtime
