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

#ifndef QTRACK_DYNAMICS_HPP
#define QTRACK_DYNAMICS_HPP

// Resonance fluorescence of a damped, driven two-level atom.
//
//   d rho/dt = -i (Omega/2) [sigma_x, rho]
//              + (gamma/2) ([sigma rho, sigma^dag] + [sigma, rho sigma^dag])
//
// Photodetection after mixing the fluorescence with a local oscillator of
// amplitude mu splits an infinitesimal step into two outcomes,
//
//   no click: M0(dt) = 1 - K dt,
//             K = i (Omega/2) sigma_x + (gamma/2) sigma^dag sigma
//                 + gamma mu^* sigma + (gamma |mu|^2 / 2)
//   click:    M1(dt) = sqrt(gamma dt) J,  J = sigma + mu
//
// and averaging over both outcomes reproduces the master equation for any mu.

#include "qtrack/qubit.hpp"

namespace qtrack {

struct SystemParams {
  double gamma = 1.0;  // decay rate, > 0
  double omega = 0.0;  // Rabi frequency, any sign

  // Throws Error(InvalidParams) unless gamma > 0 and both are finite.
  void validate() const;
};

struct LocalOscillator {
  Complex mu{};
};

struct MeasurementOps {
  Operator2 K;  // no-jump generator
  Operator2 J;  // jump operator
};

Operator2 lindblad_rhs(const DensityMatrix& rho, const SystemParams& p);

DensityMatrix steady_state(const SystemParams& p);

MeasurementOps measurement_ops(const SystemParams& p, const LocalOscillator& lo);

// gamma <s|J^dag J|s>: click probability per unit time.
double jump_rate(const PureState& s, const MeasurementOps& ops, const SystemParams& p);

// exp(-K t) for a fixed K, evaluated for many t without refactoring K.
//
// Uses the spectral projectors of K when its eigenvalues are well separated
// on the scale of t, and the hyperbolic (cosh/sinhc) form near degeneracy.
class NoJumpPropagator {
 public:
  explicit NoJumpPropagator(const Operator2& k);

  Operator2 at(double t) const;

 private:
  Operator2 k_;
  Complex half_trace_;
  Complex offset_;  // eigenvalues of K are half_trace_ +- offset_
  Operator2 traceless_;  // K - half_trace_ * I
};

struct NoJumpStep {
  PureState state;  // normalized
  double survival;  // squared norm before normalization
};

NoJumpStep evolve_nojump(const PureState& s, const MeasurementOps& ops, double dt);

PureState apply_jump(const PureState& s, const MeasurementOps& ops);

// RK4 integration of the master equation. Verification path, not a hot loop.
// Requires dt <= 0.01 / max(gamma, |omega|), otherwise throws StepTooLarge.
DensityMatrix integrate_master(const DensityMatrix& rho0, const SystemParams& p, double t,
                               double dt);

}  // namespace qtrack

#endif  // QTRACK_DYNAMICS_HPP
