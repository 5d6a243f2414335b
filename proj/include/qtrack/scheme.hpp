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

#ifndef QTRACK_SCHEME_HPP
#define QTRACK_SCHEME_HPP

// Adaptive two-state jumping schemes for resonance fluorescence.
//
// An adaptive scheme holds the local oscillator at +mu while the atom sits in
// psi1 and at -mu while it sits in psi2, flipping the sign on every click.
// psi1 must be a no-jump fixed point for +mu, psi2 for -mu, and each click
// must map one state onto the other. Closing the two-click cycle forces the
// settings to be opposite, (sigma - mu)(sigma + mu) = -mu^2 I, and the fixed
// points of K(mu) are
//
//   psi_{+-}(mu) ~ Omega |e> + (i gamma/2 +- f(mu)) |g>,
//   f(mu) = sqrt(Omega^2 - 2 i Omega gamma mu^* - gamma^2/4).
//
// Requiring the post-click state to be a fixed point for -mu yields, after
// removing the radicals,
//
//   4 gamma^2 |mu|^4 mu^2 + (Omega^2 - gamma^2/4) mu^2 - Omega^2/4 = 0,
//
// whose roots are mu = +-1/2 for every Omega != 0 and the purely imaginary
// mu = +-i sqrt((1 +- sqrt(1 - 16 Omega^2/gamma^2)) / 8) for |Omega| <= gamma/4.
// Which of the four sign pairings is a genuine scheme is then decided by the
// click-cycle test and by whether the pair, weighted by its occupation
// probabilities, reproduces the steady state.
//
// mu and -mu describe the same scheme with psi1 and psi2 exchanged, so
// find_schemes reports one representative per family: mu = +1/2 and the
// positive-imaginary roots.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtrack/dynamics.hpp"
#include "qtrack/qubit.hpp"

namespace qtrack {

enum class Branch {
  RealPlus,
  RealMinus,
  ImagLargePlus,
  ImagLargeMinus,
  ImagSmallPlus,
  ImagSmallMinus,
};

enum class Family { Real, ImagLarge, ImagSmall };

Family family_of(Branch b);
std::string_view to_string(Branch b);
// "real", "imag-large", "imag-small"
std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view name);

struct MuCandidate {
  Complex mu;
  Branch branch;
  // Set at |Omega| = gamma/4, where the large and small imaginary roots merge
  // into one; the merged root is reported once under the ImagLarge labels.
  bool boundary = false;
};

enum class Sign { Plus, Minus };

char to_char(Sign s);

struct FixedStatePair {
  PureState psi1;  // fixed point of K(+mu)
  PureState psi2;  // fixed point of K(-mu)
  Sign s1 = Sign::Plus;
  Sign s2 = Sign::Plus;
  // min of fidelity(normalize(J(mu) psi1), psi2), fidelity(normalize(J(-mu) psi2), psi1)
  double cycle_fidelity = 0.0;
  bool closes_cycle = false;  // cycle_fidelity >= 1 - 1e-9
};

struct Occupation {
  double p1 = 0.0;
  double p2 = 0.0;
  double residual = 0.0;  // Frobenius norm of p1 P1 + p2 P2 - rho_s
};

struct JumpingScheme {
  MuCandidate mu;
  FixedStatePair pair;
  double p1 = 0.0;
  double p2 = 0.0;
  double entropy_bits = 0.0;
  double pr_residual = 0.0;

  Family family() const { return family_of(mu.branch); }
};

inline constexpr double kPrTolerance = 1e-8;
inline constexpr double kCycleTolerance = 1e-9;

Complex f_of_mu(const SystemParams& p, Complex mu);

// Left minus right side of the radical-free consistency condition, divided by
// gamma^2 so it is dimensionless.
Complex radical_free_residual(const SystemParams& p, Complex mu);

// Throws OmegaZero for omega == 0.
std::vector<MuCandidate> mu_candidates(const SystemParams& p);

// min over square-root branch signs of |+-f(-mu) - (+-f(mu) - Omega/mu)| / gamma.
double verify_mu(const SystemParams& p, Complex mu);

struct FixedStates {
  PureState plus;
  PureState minus;
};

// Throws DegenerateEigenstates when |f(mu)| < 1e-12 gamma.
FixedStates fixed_states(const SystemParams& p, Complex mu);

// The four sign pairings (+,+), (+,-), (-,+), (-,-) in that order.
std::vector<FixedStatePair> enumerate_pairs(const SystemParams& p, Complex mu);

Occupation solve_occupation(const FixedStatePair& pair, const SystemParams& p);

// Stationary occupancy of the alternating two-state jump process:
// p1 = r2 / (r1 + r2) with r1 the click rate from psi1 at +mu and r2 the rate
// from psi2 at -mu. Throws ZeroRate if either rate underflows.
struct RateOccupation {
  double p1 = 0.0;
  double p2 = 0.0;
  double rate1 = 0.0;
  double rate2 = 0.0;
};
RateOccupation rate_based_occupation(const FixedStatePair& pair, const SystemParams& p,
                                     Complex mu);

// Binary entropy in bits, with 0 log 0 = 0.
double shannon_entropy(double p1);

// Throws OmegaZero for omega == 0. Results are ordered real, imag-large,
// imag-small.
std::vector<JumpingScheme> find_schemes(const SystemParams& p);

std::optional<JumpingScheme> find_scheme(const SystemParams& p, Family family);

struct EntropyRow {
  double omega_over_gamma = 0.0;
  JumpingScheme scheme;
};

// One row per (grid point, existing family), ordered by grid index then
// family. Grid points are evaluated in parallel with OpenMP.
std::vector<EntropyRow> entropy_curve(double gamma, std::span<const double> omega_grid,
                                      std::optional<Family> family = std::nullopt);

// Single-threaded reference for entropy_curve; identical output.
std::vector<EntropyRow> entropy_curve_serial(double gamma, std::span<const double> omega_grid,
                                             std::optional<Family> family = std::nullopt);

// Omega/gamma at which the large-imaginary family stops selecting the (+,+)
// pairing and switches to (+,-). Brackets the switch on a 1e-3 gamma scan of
// [0.2, 0.25] gamma and refines it by bisection to `tol` (in units of gamma).
double locate_region_boundary(double tol = 1e-12);

}  // namespace qtrack

#endif  // QTRACK_SCHEME_HPP
