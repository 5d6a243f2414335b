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

#ifndef QTRACK_QUBIT_HPP
#define QTRACK_QUBIT_HPP

// Two-level algebra shared by the whole library.
//
// Basis convention: |e> = (1, 0)^T, |g> = (0, 1)^T. Matrix entries are named
// by basis labels, so `ee` is <e|A|e> and `eg` is <e|A|g>. The lowering
// operator is sigma = |g><e|, i.e. the single entry `ge` = 1.
//
// Bloch coordinates use the Pauli convention sigma_z|e> = +|e>:
//   x = <sigma_x> = 2 Re rho_eg
//   y = <sigma_y> = -2 Im rho_eg
//   z = <sigma_z> = rho_ee - rho_gg
// so the excited state sits at the north pole and |g> at (0, 0, -1).

#include <array>
#include <complex>

#include "qtrack/error.hpp"

namespace qtrack {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

struct PureState {
  Complex ce;  // amplitude of |e>
  Complex cg;  // amplitude of |g>

  static constexpr PureState excited() { return {1.0, 0.0}; }
  static constexpr PureState ground() { return {0.0, 1.0}; }
};

PureState operator*(Complex a, const PureState& s);
PureState operator+(const PureState& a, const PureState& b);

double norm_squared(const PureState& s);
double norm(const PureState& s);

// <a|b>
Complex inner(const PureState& a, const PureState& b);

struct Operator2 {
  Complex ee{};
  Complex eg{};
  Complex ge{};
  Complex gg{};

  static constexpr Operator2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Operator2 zero() { return {}; }

  Operator2& operator+=(const Operator2& o);
  Operator2& operator-=(const Operator2& o);
  Operator2& operator*=(Complex a);
};

Operator2 operator+(Operator2 a, const Operator2& b);
Operator2 operator-(Operator2 a, const Operator2& b);
Operator2 operator*(Complex a, Operator2 m);
Operator2 operator*(const Operator2& a, const Operator2& b);
PureState operator*(const Operator2& a, const PureState& s);

Operator2 adjoint(const Operator2& m);
Complex trace(const Operator2& m);
Complex determinant(const Operator2& m);
double frobenius_norm(const Operator2& m);
// Largest absolute entry.
double max_abs_entry(const Operator2& m);
Operator2 outer(const PureState& a, const PureState& b);  // |a><b|
// <a|M|b>
Complex matrix_element(const PureState& a, const Operator2& m, const PureState& b);

// Qubit operators in the |e>,|g> basis.
Operator2 lowering();  // sigma = |g><e|
Operator2 pauli_x();
Operator2 pauli_y();
Operator2 pauli_z();

// Hermitian unit-trace positive 2x2 matrix. Construct through `validated`,
// `project`, or the dynamics module; the raw constructor is unchecked.
struct DensityMatrix {
  Operator2 op;

  // Throws Error(InvalidDensityMatrix) unless Hermitian, unit trace, and
  // eigenvalues >= -tol.
  static DensityMatrix validated(const Operator2& m, double tol = 1e-12);

  Complex ee() const { return op.ee; }
  Complex eg() const { return op.eg; }
  Complex ge() const { return op.ge; }
  Complex gg() const { return op.gg; }
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double length() const;
};

struct HermitianEigen {
  std::array<double, 2> values;  // descending
  std::array<PureState, 2> vectors;
};

// Eigen-decomposition of the Hermitian part (m + m^dagger)/2.
HermitianEigen hermitian_eigen(const Operator2& m);

PureState normalize(const PureState& s);
double fidelity(const PureState& a, const PureState& b);
DensityMatrix project(const PureState& s);
BlochVector bloch_of(const DensityMatrix& rho);
BlochVector bloch_of(const PureState& s);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// ||M s - <s|M|s> s|| for normalized s; zero iff s is an eigenvector of M.
double eigen_residual(const Operator2& m, const PureState& s);

// Fixes the global phase so the first non-negligible amplitude is real and
// positive. Useful for stable printing; physics never depends on it.
PureState canonical_phase(const PureState& s);

}  // namespace qtrack

#endif  // QTRACK_QUBIT_HPP
