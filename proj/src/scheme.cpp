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

#include "qtrack/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace qtrack {

namespace {

void require_driven(const SystemParams& p) {
  p.validate();
  if (p.omega == 0.0) {
    throw Error(ErrorCode::OmegaZero, "undriven atom: tracking trivial");
  }
}

double frobenius_dot(const Operator2& a, const Operator2& b) {
  return (std::conj(a.ee) * b.ee + std::conj(a.eg) * b.eg + std::conj(a.ge) * b.ge +
          std::conj(a.gg) * b.gg)
      .real();
}

bool is_representative(Branch b) {
  return b == Branch::RealPlus || b == Branch::ImagLargePlus || b == Branch::ImagSmallPlus;
}

std::vector<EntropyRow> rows_at(double gamma, double omega, std::optional<Family> family) {
  const SystemParams p{gamma, omega};
  std::vector<EntropyRow> rows;
  for (JumpingScheme& s : find_schemes(p)) {
    if (family && s.family() != *family) continue;
    rows.push_back({omega / gamma, std::move(s)});
  }
  return rows;
}

std::vector<EntropyRow> flatten(std::vector<std::vector<EntropyRow>>& per_point) {
  std::vector<EntropyRow> out;
  for (auto& rows : per_point) {
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

}  // namespace

Family family_of(Branch b) {
  switch (b) {
    case Branch::RealPlus:
    case Branch::RealMinus: return Family::Real;
    case Branch::ImagLargePlus:
    case Branch::ImagLargeMinus: return Family::ImagLarge;
    case Branch::ImagSmallPlus:
    case Branch::ImagSmallMinus: return Family::ImagSmall;
  }
  return Family::Real;
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::RealPlus: return "RealPlus";
    case Branch::RealMinus: return "RealMinus";
    case Branch::ImagLargePlus: return "ImagLargePlus";
    case Branch::ImagLargeMinus: return "ImagLargeMinus";
    case Branch::ImagSmallPlus: return "ImagSmallPlus";
    case Branch::ImagSmallMinus: return "ImagSmallMinus";
  }
  return "?";
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Real: return "real";
    case Family::ImagLarge: return "imag-large";
    case Family::ImagSmall: return "imag-small";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::Real, Family::ImagLarge, Family::ImagSmall}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

char to_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

Complex f_of_mu(const SystemParams& p, Complex mu) {
  const double g = p.gamma;
  const double w = p.omega;
  // Omega^2 - 2 i Omega gamma mu^* - gamma^2/4, split into parts. For purely
  // imaginary mu the radicand is real; a negative real radicand maps to
  // +i sqrt(|r|), never to -i sqrt(|r|) through a stray -0.0.
  const double re = w * w - 0.25 * g * g - 2.0 * w * g * mu.imag();
  double im = -2.0 * w * g * mu.real();
  if (im == 0.0) im = 0.0;
  return std::sqrt(Complex(re, im));
}

Complex radical_free_residual(const SystemParams& p, Complex mu) {
  const double g = p.gamma;
  const double w = p.omega;
  const double m2 = std::norm(mu);
  const Complex mu_sq = mu * mu;
  const Complex lhs = 4.0 * g * g * m2 * m2 * mu_sq + (w * w - 0.25 * g * g) * mu_sq;
  return (lhs - 0.25 * w * w) / (g * g);
}

std::vector<MuCandidate> mu_candidates(const SystemParams& p) {
  require_driven(p);
  std::vector<MuCandidate> out{{0.5, Branch::RealPlus}, {-0.5, Branch::RealMinus}};

  const double ratio = std::abs(p.omega) / p.gamma;
  if (ratio > 0.25 + 1e-12) return out;

  const double d = std::sqrt(std::max(0.0, 1.0 - 16.0 * ratio * ratio));
  const double large = std::sqrt((1.0 + d) / 8.0);
  // (1 - d)/8 rewritten to avoid cancellation at small ratio.
  const double small = std::sqrt(2.0 * ratio * ratio / (1.0 + d));

  if (large - small < 1e-10) {
    const double merged = 0.5 * (large + small);
    out.push_back({Complex(0.0, merged), Branch::ImagLargePlus, true});
    out.push_back({Complex(0.0, -merged), Branch::ImagLargeMinus, true});
    return out;
  }
  out.push_back({Complex(0.0, large), Branch::ImagLargePlus});
  out.push_back({Complex(0.0, -large), Branch::ImagLargeMinus});
  out.push_back({Complex(0.0, small), Branch::ImagSmallPlus});
  out.push_back({Complex(0.0, -small), Branch::ImagSmallMinus});
  return out;
}

double verify_mu(const SystemParams& p, Complex mu) {
  if (mu == Complex{}) return std::numeric_limits<double>::infinity();
  const Complex f_plus = f_of_mu(p, mu);
  const Complex f_minus = f_of_mu(p, -mu);
  const Complex shift = p.omega / mu;
  double best = std::numeric_limits<double>::infinity();
  for (double a : {1.0, -1.0}) {
    for (double b : {1.0, -1.0}) {
      best = std::min(best, std::abs(a * f_minus - (b * f_plus - shift)));
    }
  }
  return best / p.gamma;
}

FixedStates fixed_states(const SystemParams& p, Complex mu) {
  const Complex f = f_of_mu(p, mu);
  if (std::abs(f) < 1e-12 * p.gamma) {
    throw Error(ErrorCode::DegenerateEigenstates,
                "f(mu) vanishes: the two no-jump fixed points coincide");
  }
  const Complex base = 0.5 * kI * p.gamma;
  return {normalize(PureState{p.omega, base + f}), normalize(PureState{p.omega, base - f})};
}

std::vector<FixedStatePair> enumerate_pairs(const SystemParams& p, Complex mu) {
  const FixedStates at_plus = fixed_states(p, mu);
  const FixedStates at_minus = fixed_states(p, -mu);
  const MeasurementOps ops_plus = measurement_ops(p, {mu});
  const MeasurementOps ops_minus = measurement_ops(p, {-mu});

  std::vector<FixedStatePair> pairs;
  pairs.reserve(4);
  for (Sign s1 : {Sign::Plus, Sign::Minus}) {
    for (Sign s2 : {Sign::Plus, Sign::Minus}) {
      FixedStatePair pair;
      pair.s1 = s1;
      pair.s2 = s2;
      pair.psi1 = s1 == Sign::Plus ? at_plus.plus : at_plus.minus;
      pair.psi2 = s2 == Sign::Plus ? at_minus.plus : at_minus.minus;
      const double forward = fidelity(apply_jump(pair.psi1, ops_plus), pair.psi2);
      const double backward = fidelity(apply_jump(pair.psi2, ops_minus), pair.psi1);
      pair.cycle_fidelity = std::min(forward, backward);
      pair.closes_cycle = pair.cycle_fidelity >= 1.0 - kCycleTolerance;
      pairs.push_back(pair);
    }
  }
  return pairs;
}

Occupation solve_occupation(const FixedStatePair& pair, const SystemParams& p) {
  const Operator2 p1 = project(pair.psi1).op;
  const Operator2 p2 = project(pair.psi2).op;
  const Operator2 target = steady_state(p).op;

  // Minimize ||t D - R||_F over t in [0, 1] with D = P1 - P2, R = rho_s - P2.
  const Operator2 d = p1 - p2;
  const double dd = frobenius_dot(d, d);
  double t = 0.5;
  if (dd > 0.0) {
    t = std::clamp(frobenius_dot(d, target - p2) / dd, 0.0, 1.0);
  }
  const double residual = frobenius_norm(t * p1 + (1.0 - t) * p2 - target);
  return {t, 1.0 - t, residual};
}

RateOccupation rate_based_occupation(const FixedStatePair& pair, const SystemParams& p,
                                     Complex mu) {
  const double r1 = jump_rate(pair.psi1, measurement_ops(p, {mu}), p);
  const double r2 = jump_rate(pair.psi2, measurement_ops(p, {-mu}), p);
  if (!(r1 > 1e-300) || !(r2 > 1e-300)) {
    throw Error(ErrorCode::ZeroRate, "a fixed state has vanishing click rate");
  }
  const double total = r1 + r2;
  return {r2 / total, r1 / total, r1, r2};
}

double shannon_entropy(double p1) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p1) + term(1.0 - p1);
}

std::vector<JumpingScheme> find_schemes(const SystemParams& p) {
  std::vector<JumpingScheme> schemes;
  for (const MuCandidate& candidate : mu_candidates(p)) {
    if (!is_representative(candidate.branch)) continue;

    std::vector<FixedStatePair> pairs;
    try {
      pairs = enumerate_pairs(p, candidate.mu);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateEigenstates) continue;
      throw;
    }

    std::optional<JumpingScheme> best;
    for (const FixedStatePair& pair : pairs) {
      if (!pair.closes_cycle) continue;
      const Occupation occ = solve_occupation(pair, p);
      if (occ.residual >= kPrTolerance) continue;
      if (best && best->pr_residual <= occ.residual) continue;
      best = JumpingScheme{candidate, pair, occ.p1, occ.p2, shannon_entropy(occ.p1),
                           occ.residual};
    }
    if (best) schemes.push_back(*best);
  }
  return schemes;
}

std::optional<JumpingScheme> find_scheme(const SystemParams& p, Family family) {
  for (JumpingScheme& s : find_schemes(p)) {
    if (s.family() == family) return s;
  }
  return std::nullopt;
}

std::vector<EntropyRow> entropy_curve_serial(double gamma, std::span<const double> omega_grid,
                                             std::optional<Family> family) {
  std::vector<std::vector<EntropyRow>> per_point(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    per_point[i] = rows_at(gamma, omega_grid[i], family);
  }
  return flatten(per_point);
}

std::vector<EntropyRow> entropy_curve(double gamma, std::span<const double> omega_grid,
                                      std::optional<Family> family) {
  const auto n = static_cast<long>(omega_grid.size());
  std::vector<std::vector<EntropyRow>> per_point(omega_grid.size());
  std::vector<std::exception_ptr> errors(omega_grid.size());

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      per_point[i] = rows_at(gamma, omega_grid[i], family);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return flatten(per_point);
}

double locate_region_boundary(double tol) {
  auto selects_plus_plus = [](double ratio) {
    const auto s = find_scheme(SystemParams{1.0, ratio}, Family::ImagLarge);
    return s && s->pair.s1 == Sign::Plus && s->pair.s2 == Sign::Plus;
  };

  constexpr double kScanStep = 1e-3;
  double lo = 0.2;
  if (!selects_plus_plus(lo)) return std::numeric_limits<double>::quiet_NaN();
  double hi = lo;
  bool bracketed = false;
  for (int k = 1; k <= 50; ++k) {
    hi = 0.2 + k * kScanStep;
    if (!selects_plus_plus(hi)) {
      bracketed = true;
      break;
    }
    lo = hi;
  }
  if (!bracketed) return std::numeric_limits<double>::quiet_NaN();

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (selects_plus_plus(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace qtrack
