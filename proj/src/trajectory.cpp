// Copyright 2026 The qtrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtrack/trajectory.hpp"

#include <cmath>
#include <limits>

namespace qtrack {

namespace {

constexpr std::uint64_t kStreamTag = 0x7174726b5f6d6346ull;

std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(index), hi32(index), lo32(kStreamTag),
                    hi32(kStreamTag)};
  return std::mt19937_64(seq);
}

// Holds the active local-oscillator setting and its no-jump propagator.
struct Monitor {
  Monitor(const SystemParams& p, Complex mu)
      : mu(mu), ops(measurement_ops(p, {mu})), propagator(ops.K) {}

  Complex mu;
  MeasurementOps ops;
  NoJumpPropagator propagator;
};

}  // namespace

void SimConfig::validate() const {
  params.validate();
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw Error(ErrorCode::InvalidParams, "t_max must be positive");
  }
  if (!(dt_record > 0.0) || !std::isfinite(dt_record)) {
    throw Error(ErrorCode::InvalidParams, "dt_record must be positive");
  }
  if (n_trajectories == 0) {
    throw Error(ErrorCode::InvalidParams, "n_trajectories must be at least 1");
  }
}

std::size_t SimConfig::sample_count() const {
  return static_cast<std::size_t>(std::floor(t_max / dt_record + 1e-9)) + 1;
}

double SimConfig::sample_time(std::size_t k) const {
  return std::min(static_cast<double>(k) * dt_record, t_max);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index)
    : engine_(seeded_engine(seed, index)) {}

double RandomStream::uniform_open() {
  // 53 random bits, offset by half an ulp so neither 0 nor 1 can occur.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

PureState default_initial(const SimConfig& cfg) {
  if (const auto* adaptive = std::get_if<AdaptivePolicy>(&cfg.policy)) {
    return adaptive->scheme.pair.psi1;
  }
  return PureState::excited();
}

TrajectoryRecord simulate_one(const SimConfig& cfg, const PureState& initial,
                              RandomStream& stream) {
  cfg.validate();
  const SystemParams& p = cfg.params;
  const double time_tol = 1e-9 / p.gamma;

  TrajectoryRecord rec;
  rec.params = p;
  PureState state = normalize(initial);

  Complex mu;
  if (const auto* adaptive = std::get_if<AdaptivePolicy>(&cfg.policy)) {
    const JumpingScheme& scheme = adaptive->scheme;
    mu = scheme.mu.mu;
    const bool at_psi1 = fidelity(state, scheme.pair.psi1) >= kOccupancyFidelity;
    const bool at_psi2 = fidelity(state, scheme.pair.psi2) >= kOccupancyFidelity;
    if (at_psi2 && !at_psi1) mu = -mu;
    rec.initial_transient = !at_psi1 && !at_psi2;
  } else {
    mu = std::get<FixedPolicy>(cfg.policy).mu;
  }
  const bool adaptive = std::holds_alternative<AdaptivePolicy>(cfg.policy);

  Monitor monitor(p, mu);
  const std::size_t n_samples = cfg.sample_count();
  rec.samples.reserve(n_samples);
  auto record_sample = [&](double t, const PureState& s) {
    rec.samples.push_back({t, s, bloch_of(s), monitor.mu, rec.jumps.size()});
  };

  record_sample(0.0, state);
  std::size_t next_sample = 1;

  // `state` is normalized at time t_ref; the click fires once
  // ||exp(-K (t - t_ref)) state||^2 drops to `threshold`.
  double t = 0.0;
  double t_ref = 0.0;
  double threshold = stream.uniform_open();

  while (t < cfg.t_max) {
    const bool to_sample = next_sample < n_samples;
    const double t_next = to_sample ? cfg.sample_time(next_sample) : cfg.t_max;

    const PureState evolved = monitor.propagator.at(t_next - t_ref) * state;
    const double survival = norm_squared(evolved);
    if (survival > threshold) {
      state = normalize(evolved);
      threshold /= survival;
      t_ref = t_next;
      t = t_next;
      if (to_sample) {
        record_sample(t_next, state);
        ++next_sample;
      }
      continue;
    }

    // The click lies in (t, t_next].
    double lo = t;
    double hi = t_next;
    while (hi - lo > time_tol) {
      const double mid = 0.5 * (lo + hi);
      if (norm_squared(monitor.propagator.at(mid - t_ref) * state) > threshold) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t_jump = hi;
    const PureState pre = normalize(monitor.propagator.at(t_jump - t_ref) * state);

    PureState post;
    try {
      post = apply_jump(pre, monitor.ops);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroVector) throw;
      rec.termination = Termination::DarkState;
      rec.t_end = t_jump;
      return rec;
    }
    rec.jumps.push_back({t_jump, pre, post});
    if (adaptive) monitor = Monitor(p, -monitor.mu);

    state = post;
    t_ref = t_jump;
    t = t_jump;
    threshold = stream.uniform_open();
  }
  rec.t_end = cfg.t_max;
  return rec;
}

DensityMatrix time_average_rho(const TrajectoryRecord& rec) {
  const double min_span = 100.0 / rec.params.gamma;
  if (rec.samples.size() < 2 ||
      rec.samples.back().t - rec.samples.front().t < min_span * (1.0 - 1e-12)) {
    throw Error(ErrorCode::RecordTooShort, "record must span at least 100/gamma");
  }
  Operator2 sum = Operator2::zero();
  double weight = 0.0;
  for (std::size_t k = 0; k + 1 < rec.samples.size(); ++k) {
    const double w = rec.samples[k + 1].t - rec.samples[k].t;
    sum += w * project(rec.samples[k].state).op;
    weight += w;
  }
  sum *= 1.0 / weight;
  sum.ge = std::conj(sum.eg);
  return DensityMatrix{sum};
}

DwellAccumulator::DwellAccumulator(const JumpingScheme& scheme)
    : psi1_(scheme.pair.psi1), psi2_(scheme.pair.psi2) {}

void DwellAccumulator::add(const TrajectoryRecord& rec) {
  if (rec.samples.empty()) return;
  auto classify = [&](const PureState& s) {
    if (fidelity(s, psi1_) >= kOccupancyFidelity) return 0;
    if (fidelity(s, psi2_) >= kOccupancyFidelity) return 1;
    return -1;
  };

  const std::size_t n_segments = rec.jumps.size() + 1;
  double open_cycle = -1.0;  // completed psi1 dwell awaiting its psi2 partner, or -1
  for (std::size_t i = 0; i < n_segments; ++i) {
    const double start = i == 0 ? rec.samples.front().t : rec.jumps[i - 1].t;
    const double end = i + 1 < n_segments ? rec.jumps[i].t : rec.t_end;
    const PureState& s = i == 0 ? rec.samples.front().state : rec.jumps[i - 1].post;
    const double duration = end - start;
    const int c = classify(s);
    total_time_ += duration;
    if (c < 0) {
      open_cycle = -1.0;
      continue;
    }
    time_in_[c] += duration;

    const bool censored = i + 1 == n_segments;
    if (censored) continue;
    dwell_sum_[c] += duration;
    dwell_sq_sum_[c] += duration * duration;
    ++dwell_count_[c];

    if (c == 0) {
      open_cycle = duration;
    } else if (open_cycle >= 0.0) {
      cycles_.push_back({open_cycle, duration});
      open_cycle = -1.0;
    }
  }
}

DwellStats DwellAccumulator::result() const {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  DwellStats out;
  out.time_in = time_in_;
  out.total_time = total_time_;
  out.dwell_count = dwell_count_;
  out.cycles = cycles_.size();
  for (int c = 0; c < 2; ++c) {
    out.occupancy[c] = total_time_ > 0.0 ? time_in_[c] / total_time_ : nan;
    const auto n = static_cast<double>(dwell_count_[c]);
    out.mean_dwell[c] = n > 0 ? dwell_sum_[c] / n : nan;
    if (n > 1) {
      const double var = (dwell_sq_sum_[c] - n * out.mean_dwell[c] * out.mean_dwell[c]) / (n - 1);
      out.dwell_stderr[c] = std::sqrt(std::max(0.0, var) / n);
    } else {
      out.dwell_stderr[c] = nan;
    }
  }

  out.occupancy_stderr = nan;
  if (cycles_.size() >= 2) {
    double sum1 = 0.0;
    double sum_total = 0.0;
    for (const auto& [d1, d2] : cycles_) {
      sum1 += d1;
      sum_total += d1 + d2;
    }
    const double ratio = sum1 / sum_total;
    double ss = 0.0;
    for (const auto& [d1, d2] : cycles_) {
      const double z = d1 - ratio * (d1 + d2);
      ss += z * z;
    }
    const auto n = static_cast<double>(cycles_.size());
    const double mean_total = sum_total / n;
    out.occupancy_stderr = std::sqrt(ss / (n - 1) / n) / mean_total;
  }
  return out;
}

DwellStats dwell_statistics(const TrajectoryRecord& rec, const JumpingScheme& scheme) {
  DwellAccumulator acc(scheme);
  acc.add(rec);
  return acc.result();
}

}  // namespace qtrack
