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

#include "qtrack/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtrack {

namespace {

Complex sinhc(Complex x) {
  if (std::abs(x) < 1e-4) {
    const Complex x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

Operator2 hermitian_part(const Operator2& m) {
  Operator2 h = 0.5 * (m + adjoint(m));
  h.ee = h.ee.real();
  h.gg = h.gg.real();
  return h;
}

}  // namespace

void SystemParams::validate() const {
  if (!std::isfinite(gamma) || !std::isfinite(omega)) {
    throw Error(ErrorCode::InvalidParams, "gamma and omega must be finite");
  }
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::InvalidParams,
                "gamma must be positive (got " + std::to_string(gamma) + ")");
  }
}

Operator2 lindblad_rhs(const DensityMatrix& rho, const SystemParams& p) {
  const Operator2 s = lowering();
  const Operator2 sd = adjoint(s);
  const Operator2 sx = pauli_x();
  const Operator2& r = rho.op;

  const Operator2 hamiltonian = Complex(0.0, -0.5 * p.omega) * (sx * r - r * sx);
  const Operator2 sr = s * r;
  const Operator2 rsd = r * sd;
  const Operator2 damping = Complex(0.5 * p.gamma) * ((sr * sd - sd * sr) + (s * rsd - rsd * s));
  return hamiltonian + damping;
}

DensityMatrix steady_state(const SystemParams& p) {
  p.validate();
  const double g = p.gamma;
  const double w = p.omega;
  const double scale = 1.0 / (g * g + 2.0 * w * w);
  Operator2 rho{w * w * scale, Complex(0.0, -g * w * scale), Complex(0.0, g * w * scale),
                (g * g + w * w) * scale};
  return DensityMatrix{rho};
}

MeasurementOps measurement_ops(const SystemParams& p, const LocalOscillator& lo) {
  const Operator2 s = lowering();
  const Complex mu = lo.mu;
  const Operator2 K = Complex(0.0, 0.5 * p.omega) * pauli_x() +
                      Complex(0.5 * p.gamma) * (adjoint(s) * s) +
                      (std::conj(mu) * p.gamma) * s +
                      Complex(0.5 * p.gamma * std::norm(mu)) * Operator2::identity();
  const Operator2 J = s + mu * Operator2::identity();
  return {K, J};
}

double jump_rate(const PureState& s, const MeasurementOps& ops, const SystemParams& p) {
  return p.gamma * norm_squared(ops.J * s);
}

NoJumpPropagator::NoJumpPropagator(const Operator2& k)
    : k_(k),
      half_trace_(0.5 * trace(k)),
      offset_(std::sqrt(half_trace_ * half_trace_ - determinant(k))),
      traceless_(k - half_trace_ * Operator2::identity()) {}

Operator2 NoJumpPropagator::at(double t) const {
  const Complex x = offset_ * t;
  if (std::abs(x) < 1.0) {
    Operator2 out = std::cosh(x) * Operator2::identity() - (t * sinhc(x)) * traceless_;
    return std::exp(-half_trace_ * t) * out;
  }
  const Operator2 n_over_s = (1.0 / offset_) * traceless_;
  const Operator2 plus = 0.5 * (Operator2::identity() + n_over_s);
  const Operator2 minus = 0.5 * (Operator2::identity() - n_over_s);
  return std::exp(-(half_trace_ + offset_) * t) * plus +
         std::exp(-(half_trace_ - offset_) * t) * minus;
}

NoJumpStep evolve_nojump(const PureState& s, const MeasurementOps& ops, double dt) {
  const PureState raw = NoJumpPropagator(ops.K).at(dt) * s;
  const double survival = norm_squared(raw);
  if (!(survival > 1e-300)) {
    throw Error(ErrorCode::ZeroVector, "no-jump survival probability underflowed");
  }
  return {normalize(raw), survival};
}

PureState apply_jump(const PureState& s, const MeasurementOps& ops) {
  const PureState raw = ops.J * s;
  if (!(norm(raw) > 1e-300)) {
    throw Error(ErrorCode::ZeroVector, "state lies in the kernel of the jump operator");
  }
  return normalize(raw);
}

DensityMatrix integrate_master(const DensityMatrix& rho0, const SystemParams& p, double t,
                               double dt) {
  p.validate();
  const double limit = 0.01 / std::max(p.gamma, std::abs(p.omega));
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
    throw Error(ErrorCode::StepTooLarge, "integration step " + std::to_string(dt) +
                                             " exceeds 0.01/max(gamma,|omega|)");
  }
  if (t <= 0.0) return rho0;

  const auto steps = static_cast<long>(std::ceil(t / dt - 1e-9));
  const double h = t / static_cast<double>(steps);
  auto rhs = [&](const Operator2& m) { return lindblad_rhs(DensityMatrix{m}, p); };

  Operator2 rho = rho0.op;
  for (long i = 0; i < steps; ++i) {
    const Operator2 k1 = rhs(rho);
    const Operator2 k2 = rhs(rho + (0.5 * h) * k1);
    const Operator2 k3 = rhs(rho + (0.5 * h) * k2);
    const Operator2 k4 = rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = hermitian_part(rho);
  }
  return DensityMatrix{rho};
}

}  // namespace qtrack
