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

#ifndef QTRACK_TRAJECTORY_HPP
#define QTRACK_TRAJECTORY_HPP

// Quantum-jump trajectories under photodetection with a local oscillator.
//
// Jump times are drawn with the waiting-time method: draw u in (0,1), evolve
// the unnormalized state under exp(-K t) and click when its squared norm
// falls to u. The norm is monotone, so the crossing inside a record interval
// is found by bisection to 1e-9/gamma. There is no per-step Bernoulli test
// and no time-step bias in the no-jump evolution.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "qtrack/dynamics.hpp"
#include "qtrack/qubit.hpp"
#include "qtrack/scheme.hpp"

namespace qtrack {

struct FixedPolicy {
  Complex mu;
};

// Flip the local oscillator between +mu and -mu on every click.
struct AdaptivePolicy {
  JumpingScheme scheme;
};

using Policy = std::variant<FixedPolicy, AdaptivePolicy>;

struct SimConfig {
  SystemParams params;
  Policy policy = FixedPolicy{};
  double t_max = 1.0;
  double dt_record = 0.1;
  std::uint64_t seed = 0;
  std::size_t n_trajectories = 1;

  // Throws InvalidParams on t_max <= 0, dt_record <= 0, n_trajectories == 0.
  void validate() const;
  // Sample times k * dt_record for k = 0 .. sample_count() - 1, all <= t_max.
  std::size_t sample_count() const;
  double sample_time(std::size_t k) const;
};

// Random stream for trajectory `index`; a pure function of (seed, index), so
// results never depend on which thread ran which trajectory.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index);

  // Uniform on the open interval (0, 1), built from the raw 64-bit engine
  // output so the sequence is identical across standard libraries.
  double uniform_open();

 private:
  std::mt19937_64 engine_;
};

struct Sample {
  double t = 0.0;
  PureState state;
  BlochVector bloch;
  Complex active_mu;
  std::size_t jumps_so_far = 0;
};

struct JumpEvent {
  double t = 0.0;
  PureState pre;
  PureState post;
};

enum class Termination {
  Completed,
  DarkState,  // a click was drawn from a state in the kernel of J
};

struct TrajectoryRecord {
  SystemParams params;
  std::vector<Sample> samples;
  std::vector<JumpEvent> jumps;
  Termination termination = Termination::Completed;
  double t_end = 0.0;  // t_max, or the time of a dark-state termination
  // Adaptive runs only: the initial state was not one of the scheme states.
  bool initial_transient = false;
};

// |e> for fixed policies, psi1 for adaptive ones.
PureState default_initial(const SimConfig& cfg);

TrajectoryRecord simulate_one(const SimConfig& cfg, const PureState& initial,
                              RandomStream& stream);

// Time-weighted mean of the sampled projectors. Requires the record to span
// at least 100 / gamma, otherwise throws RecordTooShort.
DensityMatrix time_average_rho(const TrajectoryRecord& rec);

// Fidelity threshold used to decide that a state "is" a scheme state.
inline constexpr double kOccupancyFidelity = 1.0 - 1e-6;

// Occupation and dwell-time statistics of an adaptive record. Between clicks
// the state is a fixed point, so each inter-click segment is classified by
// its starting state.
struct DwellStats {
  std::array<double, 2> time_in{};     // total time in psi1, psi2
  double total_time = 0.0;
  std::array<double, 2> occupancy{};   // time_in / total_time
  // Ratio-estimator standard error of occupancy[0], from complete
  // psi1 -> psi2 -> psi1 cycles. NaN with fewer than two cycles.
  double occupancy_stderr = 0.0;
  std::array<std::size_t, 2> dwell_count{};  // completed (uncensored) dwells
  std::array<double, 2> mean_dwell{};
  std::array<double, 2> dwell_stderr{};
  std::size_t cycles = 0;
};

// Accumulates dwell statistics over one or more records.
class DwellAccumulator {
 public:
  explicit DwellAccumulator(const JumpingScheme& scheme);

  void add(const TrajectoryRecord& rec);
  DwellStats result() const;

 private:
  PureState psi1_;
  PureState psi2_;
  std::array<double, 2> time_in_{};
  double total_time_ = 0.0;
  std::array<double, 2> dwell_sum_{};
  std::array<double, 2> dwell_sq_sum_{};
  std::array<std::size_t, 2> dwell_count_{};
  std::vector<std::array<double, 2>> cycles_;
};

DwellStats dwell_statistics(const TrajectoryRecord& rec, const JumpingScheme& scheme);

struct EnsembleStats {
  std::vector<double> times;
  std::vector<DensityMatrix> mean_rho;
  bool has_occupancy = false;           // adaptive policies only
  std::array<double, 2> occupancy{};
  double occupancy_stderr = 0.0;
  double jump_count_mean = 0.0;
  std::size_t n_trajectories = 0;
  std::size_t dark_terminations = 0;
};

// Order-sensitive reduction of records into EnsembleStats. Records must be
// added in trajectory-index order for reproducible floating-point sums.
class EnsembleAccumulator {
 public:
  explicit EnsembleAccumulator(const SimConfig& cfg);

  void add(const TrajectoryRecord& rec);
  EnsembleStats result() const;

 private:
  std::vector<double> times_;
  std::vector<Operator2> rho_sum_;
  std::vector<std::size_t> rho_count_;
  std::optional<DwellAccumulator> dwell_;
  std::size_t trajectories_ = 0;
  std::size_t jumps_ = 0;
  std::size_t dark_ = 0;
};

// All trajectories of an ensemble. The OpenMP version distributes
// trajectories over threads; the serial version is the reference it is
// tested against. Both return bit-identical records.
std::vector<TrajectoryRecord> simulate_records(const SimConfig& cfg, const PureState& initial);
std::vector<TrajectoryRecord> simulate_records_serial(const SimConfig& cfg,
                                                      const PureState& initial);

EnsembleStats summarize(const SimConfig& cfg, const std::vector<TrajectoryRecord>& records);

// Streams trajectories through the accumulator in fixed-size chunks, so the
// memory use is bounded. Parallel and serial versions agree bit for bit.
EnsembleStats simulate_ensemble(const SimConfig& cfg, const PureState& initial);
EnsembleStats simulate_ensemble_serial(const SimConfig& cfg, const PureState& initial);

}  // namespace qtrack

#endif  // QTRACK_TRAJECTORY_HPP
