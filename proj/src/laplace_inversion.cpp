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

#include "occtime/laplace_inversion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace occtime {
namespace {

// Kahan-compensated complex accumulator; fixed summation order keeps results
// bit-identical between runs.
struct CompensatedSum {
  cplx sum = 0.0;
  cplx carry = 0.0;

  void add(cplx x) {
    const cplx y = x - carry;
    const cplx t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

void validate(const EulerParams& p) {
  if (p.M < 0 || p.N < 1 || !(p.gamma > 0.0) || !std::isfinite(p.gamma)) {
    std::ostringstream os;
    os << "invalid Euler parameters M=" << p.M << " N=" << p.N << " gamma=" << p.gamma;
    throw DomainError(os.str());
  }
}

EulerRule::EulerRule(double t, const EulerParams& p) : t_(t), p_(p) {
  validate(p);
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("Euler inversion needs t > 0");
  const double A = p.gamma * std::log(10.0);
  scale_ = std::exp(A / 2.0) / t;
  const int terms = p.N + p.M;
  nodes_.reserve(terms + 1);
  for (int k = 0; k <= terms; ++k) nodes_.emplace_back(A / (2.0 * t), k * std::numbers::pi / t);

  // Binomial(M, j) / 2^M, built multiplicatively to avoid overflow.
  binom_.assign(p.M + 1, 0.0);
  binom_[0] = std::ldexp(1.0, -p.M);
  for (int j = 1; j <= p.M; ++j) binom_[j] = binom_[j - 1] * (p.M - j + 1) / j;
}

template <class Term>
cplx EulerRule::combine(Term&& term) const {
  // Partial sums S_n = scale * (term(0)/2 + sum_{k=1}^{n} (-1)^k term(k)).
  CompensatedSum partial;
  partial.add(0.5 * term(0));
  for (int k = 1; k < p_.N; ++k) partial.add((k % 2 == 0 ? 1.0 : -1.0) * term(k));
  CompensatedSum result;
  for (int j = 0; j <= p_.M; ++j) {
    const int k = p_.N + j;
    if (k > 0) partial.add((k % 2 == 0 ? 1.0 : -1.0) * term(k));
    result.add(binom_[j] * partial.sum);
  }
  return scale_ * result.sum;
}

double EulerRule::combine_real(std::span<const cplx> at_nodes) const {
  if (at_nodes.size() != nodes_.size()) throw DomainError("EulerRule: wrong number of node values");
  return combine([&](int k) { return cplx(at_nodes[k].real(), 0.0); }).real();
}

cplx EulerRule::combine_complex(std::span<const cplx> at_nodes, std::span<const cplx> at_conj_nodes) const {
  if (at_nodes.size() != nodes_.size() || at_conj_nodes.size() != nodes_.size()) {
    throw DomainError("EulerRule: wrong number of node values");
  }
  return combine([&](int k) { return k == 0 ? at_nodes[0] : 0.5 * (at_nodes[k] + at_conj_nodes[k]); });
}

}  // namespace occtime
