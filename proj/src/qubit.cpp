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

#include "qtrack/qubit.hpp"

#include <algorithm>
#include <cmath>

namespace qtrack {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::OmegaZero: return "OmegaZero";
    case ErrorCode::DegenerateEigenstates: return "DegenerateEigenstates";
    case ErrorCode::ZeroRate: return "ZeroRate";
    case ErrorCode::RecordTooShort: return "RecordTooShort";
  }
  return "Unknown";
}

PureState operator*(Complex a, const PureState& s) { return {a * s.ce, a * s.cg}; }

PureState operator+(const PureState& a, const PureState& b) {
  return {a.ce + b.ce, a.cg + b.cg};
}

double norm_squared(const PureState& s) { return std::norm(s.ce) + std::norm(s.cg); }

double norm(const PureState& s) { return std::hypot(std::abs(s.ce), std::abs(s.cg)); }

Complex inner(const PureState& a, const PureState& b) {
  return std::conj(a.ce) * b.ce + std::conj(a.cg) * b.cg;
}

Operator2& Operator2::operator+=(const Operator2& o) {
  ee += o.ee;
  eg += o.eg;
  ge += o.ge;
  gg += o.gg;
  return *this;
}

Operator2& Operator2::operator-=(const Operator2& o) {
  ee -= o.ee;
  eg -= o.eg;
  ge -= o.ge;
  gg -= o.gg;
  return *this;
}

Operator2& Operator2::operator*=(Complex a) {
  ee *= a;
  eg *= a;
  ge *= a;
  gg *= a;
  return *this;
}

Operator2 operator+(Operator2 a, const Operator2& b) { return a += b; }
Operator2 operator-(Operator2 a, const Operator2& b) { return a -= b; }
Operator2 operator*(Complex a, Operator2 m) { return m *= a; }

Operator2 operator*(const Operator2& a, const Operator2& b) {
  return {a.ee * b.ee + a.eg * b.ge, a.ee * b.eg + a.eg * b.gg,
          a.ge * b.ee + a.gg * b.ge, a.ge * b.eg + a.gg * b.gg};
}

PureState operator*(const Operator2& a, const PureState& s) {
  return {a.ee * s.ce + a.eg * s.cg, a.ge * s.ce + a.gg * s.cg};
}

Operator2 adjoint(const Operator2& m) {
  return {std::conj(m.ee), std::conj(m.ge), std::conj(m.eg), std::conj(m.gg)};
}

Complex trace(const Operator2& m) { return m.ee + m.gg; }

Complex determinant(const Operator2& m) { return m.ee * m.gg - m.eg * m.ge; }

double frobenius_norm(const Operator2& m) {
  return std::sqrt(std::norm(m.ee) + std::norm(m.eg) + std::norm(m.ge) + std::norm(m.gg));
}

double max_abs_entry(const Operator2& m) {
  return std::max({std::abs(m.ee), std::abs(m.eg), std::abs(m.ge), std::abs(m.gg)});
}

Operator2 outer(const PureState& a, const PureState& b) {
  return {a.ce * std::conj(b.ce), a.ce * std::conj(b.cg), a.cg * std::conj(b.ce),
          a.cg * std::conj(b.cg)};
}

Complex matrix_element(const PureState& a, const Operator2& m, const PureState& b) {
  return inner(a, m * b);
}

Operator2 lowering() { return {0.0, 0.0, 1.0, 0.0}; }
Operator2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Operator2 pauli_y() { return {0.0, -kI, kI, 0.0}; }
Operator2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

HermitianEigen hermitian_eigen(const Operator2& m) {
  const double a = m.ee.real();
  const double d = m.gg.real();
  const Complex b = 0.5 * (m.eg + std::conj(m.ge));
  const double mean = 0.5 * (a + d);
  const double half_gap = std::hypot(0.5 * (a - d), std::abs(b));
  HermitianEigen out{{mean + half_gap, mean - half_gap}, {}};
  if (std::abs(b) <= 1e-300) {
    if (a >= d) {
      out.vectors = {PureState::excited(), PureState::ground()};
    } else {
      out.vectors = {PureState::ground(), PureState::excited()};
    }
    return out;
  }
  // (A - lambda) v = 0 with first row: (a - lambda) v_e + b v_g = 0.
  for (int k = 0; k < 2; ++k) {
    const double lambda = out.values[k];
    // Use whichever row is better conditioned.
    PureState v = (std::abs(a - lambda) >= std::abs(d - lambda))
                      ? PureState{-b, a - lambda}
                      : PureState{d - lambda, -std::conj(b)};
    out.vectors[k] = normalize(v);
  }
  return out;
}

DensityMatrix DensityMatrix::validated(const Operator2& m, double tol) {
  const bool hermitian = max_abs_entry(m - adjoint(m)) <= tol;
  const bool unit_trace = std::abs(trace(m) - 1.0) <= tol;
  if (!hermitian || !unit_trace) {
    throw Error(ErrorCode::InvalidDensityMatrix,
                "matrix is not Hermitian with unit trace");
  }
  if (hermitian_eigen(m).values[1] < -tol) {
    throw Error(ErrorCode::InvalidDensityMatrix, "matrix has a negative eigenvalue");
  }
  return DensityMatrix{m};
}

double BlochVector::length() const { return std::sqrt(x * x + y * y + z * z); }

PureState normalize(const PureState& s) {
  const double n = norm(s);
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw Error(ErrorCode::ZeroVector, "cannot normalize a zero or non-finite vector");
  }
  return Complex(1.0 / n) * s;
}

double fidelity(const PureState& a, const PureState& b) {
  return std::clamp(std::norm(inner(a, b)), 0.0, 1.0);
}

DensityMatrix project(const PureState& s) {
  Operator2 p = outer(s, s);
  // Exact Hermiticity and real diagonal.
  p.ee = p.ee.real();
  p.gg = p.gg.real();
  p.ge = std::conj(p.eg);
  return DensityMatrix{p};
}

BlochVector bloch_of(const DensityMatrix& rho) {
  const Complex eg = 0.5 * (rho.op.eg + std::conj(rho.op.ge));
  return {2.0 * eg.real(), -2.0 * eg.imag(), rho.op.ee.real() - rho.op.gg.real()};
}

BlochVector bloch_of(const PureState& s) { return bloch_of(project(s)); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  const HermitianEigen eig = hermitian_eigen(a.op - b.op);
  return 0.5 * (std::abs(eig.values[0]) + std::abs(eig.values[1]));
}

double eigen_residual(const Operator2& m, const PureState& s) {
  const PureState ms = m * s;
  const Complex lambda = inner(s, ms);
  return norm(ms + (-lambda) * s);
}

PureState canonical_phase(const PureState& s) {
  const Complex lead = std::abs(s.ce) > 1e-12 ? s.ce : s.cg;
  if (std::abs(lead) == 0.0) return s;
  return (std::abs(lead) / lead) * s;
}

}  // namespace qtrack
