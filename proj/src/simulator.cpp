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

#include "occtime/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "occtime/parallel.hpp"
#include "occtime/phase_type.hpp"

namespace occtime {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Jump chain of a (sub-)generator: exponential holding with rate -G(i,i),
// then a move to j with probability G(i,j)/rate; leftover mass absorbs.
class ChainSampler {
 public:
  explicit ChainSampler(const Eigen::MatrixXd& G) : rate_(G.rows()), cdf_(G.rows()) {
    for (Eigen::Index i = 0; i < G.rows(); ++i) {
      rate_[i] = -G(i, i);
      double c = 0.0;
      for (Eigen::Index j = 0; j < G.cols(); ++j) {
        if (j != i) c += G(i, j) / rate_[i];
        cdf_[i].push_back(c);
      }
    }
  }

  double hold(int i, std::mt19937_64& rng) const { return std::exponential_distribution<double>(rate_[i])(rng); }

  int next(int i, std::mt19937_64& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto& c = cdf_[i];
    const auto it = std::upper_bound(c.begin(), c.end(), u);
    if (it == c.end()) return -1;
    return static_cast<int>(it - c.begin());
  }

 private:
  std::vector<double> rate_;
  std::vector<std::vector<double>> cdf_;
};

struct Walker {
  double x = 0.0;
  double time = 0.0;
  double L = 0.0;
  double Lbar = 0.0;
  double X = 0.0;
  int phase = 0;
};

struct Segment {
  double below = 0.0;      // time with workload <= tau
  double boundary = kInf;  // offset at which 0 (rate < 0) or K (rate > 0) is reached
};

// Moves the workload linearly at `rate` for `dt`, reflecting at 0 and K.
Segment advance(Walker& w, double rate, double dt, double K, double tau) {
  Segment seg;
  const double y = w.x + rate * dt;
  if (rate < 0.0) {
    seg.below = (w.x <= tau) ? dt : std::max(0.0, dt - (w.x - tau) / -rate);
    seg.boundary = w.x / -rate;
    if (y < 0.0) {
      w.L += -y;
      w.x = 0.0;
    } else {
      w.x = y;
    }
  } else {
    if (w.x > tau) {
      seg.below = 0.0;
    } else if (tau >= K) {
      seg.below = dt;
    } else {
      seg.below = std::min(dt, (tau - w.x) / rate);
    }
    seg.boundary = (K - w.x) / rate;
    if (y > K) {
      w.Lbar += y - K;
      w.x = K;
    } else {
      w.x = y;
    }
  }
  w.X += rate * dt;
  w.time += dt;
  return seg;
}

PathState snapshot(const Walker& w) {
  return {w.time, w.x, w.phase, w.L, w.Lbar, w.X};
}

// int_a^b e^{-theta s} ds
double discount(double theta, double a, double b) {
  if (theta == 0.0) return b - a;
  return (std::exp(-theta * a) - std::exp(-theta * b)) / theta;
}

double fluid_occupation(const FluidModel& m, const ChainSampler& chain, const Eigen::VectorXd& rates, double horizon,
                        std::mt19937_64& rng, PathRecord* record) {
  Walker w;
  w.x = m.threshold();
  double alpha = 0.0;
  if (record) record->states.push_back(snapshot(w));
  while (w.time < horizon) {
    const double h = chain.hold(w.phase, rng);
    const double dt = std::min(h, horizon - w.time);
    const Walker before = w;
    const Segment seg = advance(w, rates(w.phase), dt, m.buffer(), m.threshold());
    alpha += seg.below;
    if (record) {
      if (seg.boundary > 0.0 && seg.boundary < dt) {
        // Local times only start accruing at the hit.
        PathState hit = snapshot(before);
        hit.time = before.time + seg.boundary;
        hit.workload = rates(w.phase) < 0.0 ? 0.0 : m.buffer();
        hit.free = before.X + rates(w.phase) * seg.boundary;
        record->states.push_back(hit);
      }
      record->states.push_back(snapshot(w));
    }
    if (dt < h) break;
    w.phase = chain.next(w.phase, rng);
    if (record) record->states.back().phase = w.phase;
  }
  return alpha;
}

// Adds one phase-type jump at the current time, clipping at K.
void mg1_jump(Walker& w, const PhaseTypeSampler& jump, double K, std::mt19937_64& rng, PathRecord* record) {
  for (int p = jump.initial_phase(rng); p >= 0; p = jump.next_phase(p, rng)) {
    const double amount = jump.holding_time(p, rng);
    w.X += amount;
    const double y = w.x + amount;
    if (y > K) {
      w.Lbar += y - K;
      w.x = K;
    } else {
      w.x = y;
    }
    if (record) {
      PathState s = snapshot(w);
      s.phase = p + 1;
      record->states.push_back(s);
    }
  }
  w.phase = 0;
}

double mg1_occupation(const Mg1Model& m, const PhaseTypeSampler& jump, double horizon, std::mt19937_64& rng,
                      PathRecord* record) {
  Walker w;
  w.x = m.threshold();
  double alpha = 0.0;
  if (record) record->states.push_back(snapshot(w));
  std::exponential_distribution<double> arrival(m.lambda());
  while (w.time < horizon) {
    const double a = arrival(rng);
    const double dt = std::min(a, horizon - w.time);
    const Walker before = w;
    const Segment seg = advance(w, m.r1(), dt, m.buffer(), m.threshold());
    alpha += seg.below;
    if (record) {
      if (seg.boundary > 0.0 && seg.boundary < dt) {
        PathState hit = snapshot(before);
        hit.time = before.time + seg.boundary;
        hit.workload = 0.0;
        hit.free = before.X + m.r1() * seg.boundary;
        record->states.push_back(hit);
      }
      record->states.push_back(snapshot(w));
    }
    if (dt < a) break;
    mg1_jump(w, jump, m.buffer(), rng, record);
  }
  return alpha;
}

void require_crossings(const QueueModel& model) {
  if (!(threshold(model) < buffer(model))) {
    throw DomainError("regenerative cycles need tau < K (no upcrossings otherwise)");
  }
}

CycleSample fluid_cycle(const FluidModel& m, const ChainSampler& chain, const Eigen::VectorXd& rates,
                        std::mt19937_64& rng) {
  const double K = m.buffer();
  const double tau = m.threshold();
  CycleSample out{};
  Walker w;
  w.x = tau;
  for (;;) {
    const double h = chain.hold(w.phase, rng);
    const double r = rates(w.phase);
    if (r > 0.0 && w.x <= tau) {
      const double c = (tau - w.x) / r;
      if (c <= h) {
        out.d = w.time + c;
        out.upcross_phase = w.phase;
        break;
      }
    }
    advance(w, r, h, K, tau);
    w.phase = chain.next(w.phase, rng);
  }

  Walker v;
  v.x = tau;
  v.phase = out.upcross_phase;
  for (;;) {
    const double h = chain.hold(v.phase, rng);
    const double r = rates(v.phase);
    if (r < 0.0 && v.x >= tau) {
      const double c = (v.x - tau) / -r;
      if (c <= h) {
        out.u = v.time + c;
        break;
      }
    }
    advance(v, r, h, K, tau);
    v.phase = chain.next(v.phase, rng);
  }
  return out;
}

CycleSample mg1_cycle(const Mg1Model& m, const PhaseTypeSampler& jump, std::mt19937_64& rng) {
  const double K = m.buffer();
  const double tau = m.threshold();
  const double c = -m.r1();
  std::exponential_distribution<double> arrival(m.lambda());
  CycleSample out{};

  double x = tau;
  double t = 0.0;
  for (bool crossed = false; !crossed;) {
    const double a = arrival(rng);
    x = std::max(0.0, x - c * a);
    t += a;
    for (int p = jump.initial_phase(rng); p >= 0; p = jump.next_phase(p, rng)) {
      const double amount = jump.holding_time(p, rng);
      if (x + amount > tau) {
        out.d = t;
        out.upcross_phase = p + 1;
        crossed = true;
        break;
      }
      x += amount;
    }
  }

  // The rest of the crossing jump starts afresh in the crossing phase.
  x = tau;
  for (int p = out.upcross_phase - 1; p >= 0; p = jump.next_phase(p, rng)) x = std::min(K, x + jump.holding_time(p, rng));
  t = 0.0;
  for (;;) {
    const double a = arrival(rng);
    if (x - c * a <= tau) {
      out.u = t + (x - tau) / c;
      break;
    }
    x -= c * a;
    t += a;
    for (int p = jump.initial_phase(rng); p >= 0; p = jump.next_phase(p, rng)) {
      x = std::min(K, x + jump.holding_time(p, rng));
    }
  }
  return out;
}

}  // namespace

std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32), 0x6f636375u};
  return std::mt19937_64(seq);
}

PathRecord simulate_path(const FluidModel& model, double horizon, std::uint64_t seed) {
  if (!(horizon > 0.0)) throw DomainError("simulate_path: horizon must be positive");
  const ChainSampler chain(generator(model));
  auto rng = replication_stream(seed, 0);
  PathRecord rec;
  rec.occupation = fluid_occupation(model, chain, model.drift_rates(), horizon, rng, &rec);
  return rec;
}

PathRecord simulate_mg1_path(const Mg1Model& model, double horizon, std::uint64_t seed) {
  if (!(horizon > 0.0)) throw DomainError("simulate_mg1_path: horizon must be positive");
  const PhaseTypeSampler jump(model.jump());
  auto rng = replication_stream(seed, 0);
  PathRecord rec;
  rec.occupation = mg1_occupation(model, jump, horizon, rng, &rec);
  return rec;
}

std::vector<CycleSample> simulate_cycles(const QueueModel& model, std::size_t n_cycles, std::uint64_t seed,
                                         unsigned threads) {
  if (n_cycles == 0) throw DomainError("simulate_cycles: need at least one cycle");
  require_crossings(model);
  std::vector<CycleSample> out(n_cycles);
  if (const auto* f = std::get_if<FluidModel>(&model)) {
    const ChainSampler chain(generator(*f));
    const Eigen::VectorXd rates = f->drift_rates();
    parallel_for(
        n_cycles,
        [&](std::size_t i) {
          auto rng = replication_stream(seed, i);
          out[i] = fluid_cycle(*f, chain, rates, rng);
        },
        threads);
  } else {
    const auto& m = std::get<Mg1Model>(model);
    const PhaseTypeSampler jump(m.jump());
    parallel_for(
        n_cycles,
        [&](std::size_t i) {
          auto rng = replication_stream(seed, i);
          out[i] = mg1_cycle(m, jump, rng);
        },
        threads);
  }
  return out;
}

std::vector<double> simulate_occupation(const QueueModel& model, double t, double tau, std::size_t n_paths,
                                        std::uint64_t seed, unsigned threads) {
  if (!(t > 0.0)) throw DomainError("simulate_occupation: t must be positive");
  std::vector<double> out(n_paths);
  if (const auto* f0 = std::get_if<FluidModel>(&model)) {
    const FluidModel f = f0->with_level(f0->buffer(), tau);
    const ChainSampler chain(generator(f));
    const Eigen::VectorXd rates = f.drift_rates();
    parallel_for(
        n_paths,
        [&](std::size_t i) {
          auto rng = replication_stream(seed, i);
          out[i] = fluid_occupation(f, chain, rates, t, rng, nullptr);
        },
        threads);
  } else {
    const auto& m0 = std::get<Mg1Model>(model);
    const Mg1Model m = m0.with_level(m0.buffer(), tau);
    const PhaseTypeSampler jump(m.jump());
    parallel_for(
        n_paths,
        [&](std::size_t i) {
          auto rng = replication_stream(seed, i);
          out[i] = mg1_occupation(m, jump, t, rng, nullptr);
        },
        threads);
  }
  return out;
}

Estimate estimate(std::span<const double> samples) {
  Estimate e;
  e.n = samples.size();
  if (e.n == 0) return e;
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double x : samples) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  e.mean = mean;
  e.std_error = e.n > 1 ? std::sqrt(m2 / static_cast<double>(e.n - 1) / static_cast<double>(e.n)) : 0.0;
  return e;
}

Estimate empirical_joint_transform(std::span<const CycleSample> cycles, double theta1, double theta2) {
  std::vector<double> v;
  v.reserve(cycles.size());
  for (const auto& c : cycles) v.push_back(std::exp(-theta1 * c.d - theta2 * c.u));
  return estimate(v);
}

Estimate empirical_cdf(std::span<const double> samples, double s) {
  Estimate e;
  e.n = samples.size();
  if (e.n == 0) return e;
  const auto hits = std::count_if(samples.begin(), samples.end(), [s](double a) { return a <= s; });
  e.mean = static_cast<double>(hits) / static_cast<double>(e.n);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(e.n));
  return e;
}

std::vector<Estimate> return_overflow_transform(const FluidModel& model, int start_state, double theta,
                                                std::size_t n, std::uint64_t seed) {
  const int phases = model.phases();
  if (start_state < 1 || start_state > phases) throw DomainError("start_state must be an ON state 1..n");
  require_crossings(model);
  const ChainSampler chain(generator(model));
  const Eigen::VectorXd rates = model.drift_rates();
  const double K = model.buffer();
  const double tau = model.threshold();

  std::vector<std::vector<double>> per_state(phases, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = replication_stream(seed, i);
    Walker v;
    v.x = tau;
    v.phase = start_state;
    for (;;) {
      const double h = chain.hold(v.phase, rng);
      const double r = rates(v.phase);
      if (r < 0.0) {
        const double c = (v.x - tau) / -r;
        if (c <= h) break;
      } else {
        const double hit = (K - v.x) / r;
        if (hit < h) per_state[v.phase - 1][i] += r * discount(theta, v.time + hit, v.time + h);
      }
      advance(v, r, h, K, tau);
      v.phase = chain.next(v.phase, rng);
    }
  }
  std::vector<Estimate> out;
  for (const auto& s : per_state) out.push_back(estimate(s));
  return out;
}

Estimate upcrossing_idle_transform(const FluidModel& model, double theta, std::size_t n, std::uint64_t seed) {
  require_crossings(model);
  const ChainSampler chain(generator(model));
  const Eigen::VectorXd rates = model.drift_rates();
  const double K = model.buffer();
  const double tau = model.threshold();
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = replication_stream(seed, i);
    Walker w;
    w.x = tau;
    for (;;) {
      const double h = chain.hold(w.phase, rng);
      const double r = rates(w.phase);
      if (r > 0.0) {
        if ((tau - w.x) / r <= h) break;
      } else {
        const double hit = w.x / -r;
        if (hit < h) v[i] += -r * discount(theta, w.time + hit, w.time + h);
      }
      advance(w, r, h, K, tau);
      w.phase = chain.next(w.phase, rng);
    }
  }
  return estimate(v);
}

}  // namespace occtime
