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

#include <algorithm>
#include <exception>

#include "qtrack/trajectory.hpp"

namespace qtrack {

namespace {

constexpr std::size_t kChunk = 256;

// Fills out[i] with trajectory first + i. The serial flag selects the
// single-threaded reference loop.
void run_range(const SimConfig& cfg, const PureState& initial, std::size_t first,
               std::vector<TrajectoryRecord>& out, bool serial) {
  const auto n = static_cast<long>(out.size());
  if (serial) {
    for (long i = 0; i < n; ++i) {
      RandomStream stream(cfg.seed, first + static_cast<std::size_t>(i));
      out[i] = simulate_one(cfg, initial, stream);
    }
    return;
  }

  std::vector<std::exception_ptr> errors(out.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      RandomStream stream(cfg.seed, first + static_cast<std::size_t>(i));
      out[i] = simulate_one(cfg, initial, stream);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<TrajectoryRecord> records_impl(const SimConfig& cfg, const PureState& initial,
                                           bool serial) {
  cfg.validate();
  std::vector<TrajectoryRecord> records(cfg.n_trajectories);
  run_range(cfg, initial, 0, records, serial);
  return records;
}

EnsembleStats ensemble_impl(const SimConfig& cfg, const PureState& initial, bool serial) {
  cfg.validate();
  EnsembleAccumulator acc(cfg);
  std::vector<TrajectoryRecord> chunk;
  for (std::size_t first = 0; first < cfg.n_trajectories; first += kChunk) {
    chunk.assign(std::min(kChunk, cfg.n_trajectories - first), TrajectoryRecord{});
    run_range(cfg, initial, first, chunk, serial);
    for (const TrajectoryRecord& rec : chunk) acc.add(rec);
  }
  return acc.result();
}

}  // namespace

EnsembleAccumulator::EnsembleAccumulator(const SimConfig& cfg) {
  const std::size_t n = cfg.sample_count();
  times_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) times_.push_back(cfg.sample_time(k));
  rho_sum_.assign(n, Operator2::zero());
  rho_count_.assign(n, 0);
  if (const auto* adaptive = std::get_if<AdaptivePolicy>(&cfg.policy)) {
    dwell_.emplace(adaptive->scheme);
  }
}

void EnsembleAccumulator::add(const TrajectoryRecord& rec) {
  const std::size_t n = std::min(rec.samples.size(), rho_sum_.size());
  for (std::size_t k = 0; k < n; ++k) {
    rho_sum_[k] += project(rec.samples[k].state).op;
    ++rho_count_[k];
  }
  if (dwell_) dwell_->add(rec);
  ++trajectories_;
  jumps_ += rec.jumps.size();
  if (rec.termination == Termination::DarkState) ++dark_;
}

EnsembleStats EnsembleAccumulator::result() const {
  EnsembleStats out;
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (rho_count_[k] == 0) break;
    Operator2 mean = (1.0 / static_cast<double>(rho_count_[k])) * rho_sum_[k];
    mean.ge = std::conj(mean.eg);
    out.times.push_back(times_[k]);
    out.mean_rho.push_back(DensityMatrix{mean});
  }
  if (dwell_) {
    const DwellStats d = dwell_->result();
    out.has_occupancy = true;
    out.occupancy = d.occupancy;
    out.occupancy_stderr = d.occupancy_stderr;
  }
  out.n_trajectories = trajectories_;
  out.dark_terminations = dark_;
  out.jump_count_mean =
      trajectories_ > 0 ? static_cast<double>(jumps_) / static_cast<double>(trajectories_) : 0.0;
  return out;
}

std::vector<TrajectoryRecord> simulate_records(const SimConfig& cfg, const PureState& initial) {
  return records_impl(cfg, initial, false);
}

std::vector<TrajectoryRecord> simulate_records_serial(const SimConfig& cfg,
                                                      const PureState& initial) {
  return records_impl(cfg, initial, true);
}

EnsembleStats summarize(const SimConfig& cfg, const std::vector<TrajectoryRecord>& records) {
  EnsembleAccumulator acc(cfg);
  for (const TrajectoryRecord& rec : records) acc.add(rec);
  return acc.result();
}

EnsembleStats simulate_ensemble(const SimConfig& cfg, const PureState& initial) {
  return ensemble_impl(cfg, initial, false);
}

EnsembleStats simulate_ensemble_serial(const SimConfig& cfg, const PureState& initial) {
  return ensemble_impl(cfg, initial, true);
}

}  // namespace qtrack
