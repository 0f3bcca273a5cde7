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

#ifndef OCCTIME_LAPLACE_INVERSION_HPP
#define OCCTIME_LAPLACE_INVERSION_HPP

#include <span>
#include <vector>

#include "occtime/errors.hpp"

namespace occtime {

/// Euler-summation parameters: N base terms, binomial averaging over the
/// partial sums S_N..S_{N+M}, contour abscissa A = gamma ln 10.
struct EulerParams {
  int M = 10;
  int N = 15;
  double gamma = 8.0;
};

inline constexpr EulerParams kDefaultOuter{10, 15, 8.0};
inline constexpr EulerParams kDefaultInner{10, 15, 10.0};

void validate(const EulerParams& p);

/// Fourier-series (Bromwich) rule for one time point t. Node k is
/// (A + 2 pi i k) / (2t), k = 0..N+M. For complex-valued originals the rule
/// also needs values at the conjugate nodes.
class EulerRule {
 public:
  EulerRule(double t, const EulerParams& p);

  std::span<const cplx> nodes() const { return nodes_; }
  double t() const { return t_; }

  /// f(t) from fhat at nodes(); valid when f is real.
  double combine_real(std::span<const cplx> at_nodes) const;

  /// f(t) from fhat at nodes() and at conj(nodes()); f may be complex.
  cplx combine_complex(std::span<const cplx> at_nodes, std::span<const cplx> at_conj_nodes) const;

 private:
  template <class Term>
  cplx combine(Term&& term) const;

  double t_;
  EulerParams p_;
  double scale_;
  std::vector<cplx> nodes_;
  std::vector<double> binom_;
};

template <class F>
double euler_invert_1d(F&& fhat, double t, const EulerParams& p = kDefaultOuter) {
  const EulerRule rule(t, p);
  std::vector<cplx> v;
  v.reserve(rule.nodes().size());
  for (cplx s : rule.nodes()) v.push_back(fhat(s));
  return rule.combine_real(v);
}

/// Inversion of a transform whose original is complex-valued (no
/// conjugate symmetry), e.g. an inner variable with a complex outer node.
template <class F>
cplx euler_invert_1d_complex(F&& fhat, double t, const EulerParams& p = kDefaultInner) {
  const EulerRule rule(t, p);
  std::vector<cplx> a, b;
  a.reserve(rule.nodes().size());
  b.reserve(rule.nodes().size());
  for (cplx s : rule.nodes()) {
    a.push_back(fhat(s));
    b.push_back(fhat(std::conj(s)));
  }
  return rule.combine_complex(a, b);
}

/// Iterated Euler-Euler inversion of ghat(q, theta) = int int e^{-qt - theta s} f(t, s).
/// The inner inversion in theta runs at every outer node q and keeps the
/// complex value; only the outer sum projects onto the real part.
template <class G>
double euler_invert_2d(G&& ghat, double t, double s, const EulerParams& outer = kDefaultOuter,
                       const EulerParams& inner = kDefaultInner) {
  const EulerRule rule(t, outer);
  std::vector<cplx> v;
  v.reserve(rule.nodes().size());
  for (cplx q : rule.nodes()) {
    v.push_back(euler_invert_1d_complex([&](cplx theta) { return ghat(q, theta); }, s, inner));
  }
  return rule.combine_real(v);
}

}  // namespace occtime

#endif  // OCCTIME_LAPLACE_INVERSION_HPP
