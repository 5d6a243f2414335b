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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qtrack/dynamics.hpp"
#include "qtrack/error.hpp"

using namespace qtrack;

namespace {

Operator2 from(const oracle::M2& m) { return {m[0][0], m[0][1], m[1][0], m[1][1]}; }
oracle::M2 to(const Operator2& m) { return oracle::M2{{{m.ee, m.eg}, {m.ge, m.gg}}}; }

bool throws_code(ErrorCode code, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(SystemParams{1.0, -3.0}.validate());
  CHECK(throws_code(ErrorCode::InvalidParams, [] { SystemParams{0.0, 1.0}.validate(); }));
  CHECK(throws_code(ErrorCode::InvalidParams, [] { SystemParams{-1.0, 1.0}.validate(); }));
  CHECK(throws_code(ErrorCode::InvalidParams,
                    [] { SystemParams{1.0, std::nan("")}.validate(); }));
}

TEST_CASE("lindblad_rhs examples") {
  const SystemParams p{1.0, 1.0};
  CHECK(max_abs_entry(lindblad_rhs(steady_state(p), p)) < 1e-12);

  const DensityMatrix g = project(PureState::ground());
  CHECK(max_abs_entry(lindblad_rhs(g, {1.0, 0.0})) == 0.0);

  const Operator2 d = lindblad_rhs(project(PureState::excited()), p);
  CHECK(std::abs(d.ee - (-1.0)) < 1e-15);
  CHECK(std::abs(d.gg - 1.0) < 1e-15);
  CHECK(std::abs(d.eg - 0.5 * kI) < 1e-15);

  // Finite difference of the integrator reproduces the generator.
  const double h = 1e-4;
  const DensityMatrix e = project(PureState::excited());
  const Operator2 fwd = integrate_master(e, p, h, h).op;
  const Operator2 fd = (1.0 / h) * (fwd - e.op);
  CHECK(max_abs_entry(fd - d) < 1e-3);
}

TEST_CASE("lindblad_rhs matches an independent generator") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const SystemParams p{0.1 + std::abs(u(rng)), u(rng)};
    const PureState s = normalize({Complex(n(rng), n(rng)), Complex(n(rng), n(rng))});
    const double w = std::abs(u(rng)) / 2.0;
    const Operator2 mixed = w * project(s).op + (1.0 - w) * project(PureState::ground()).op;
    const DensityMatrix rho{mixed};
    const Operator2 got = lindblad_rhs(rho, p);
    const Operator2 want = from(oracle::lindblad(to(mixed), p.gamma, p.omega));
    CHECK(max_abs_entry(got - want) < 1e-12);
    // Trace-preserving and Hermiticity-preserving.
    CHECK(std::abs(trace(got)) < 1e-12);
    CHECK(max_abs_entry(got - adjoint(got)) < 1e-12);
  }
}

TEST_CASE("steady_state") {
  const Operator2 s0 = steady_state({1.0, 0.0}).op;
  CHECK(max_abs_entry(s0 - Operator2{0.0, 0.0, 0.0, 1.0}) < 1e-15);

  const Operator2 s1 = steady_state({1.0, 1.0}).op;
  const Operator2 want1{1.0 / 3.0, -kI / 3.0, kI / 3.0, 2.0 / 3.0};
  CHECK(max_abs_entry(s1 - want1) < 1e-15);
  CHECK(max_abs_entry(s1 - from(oracle::steady_state(1.0, 1.0))) < 1e-13);

  const Operator2 s2 = steady_state({2.0, 1.0}).op;
  const Operator2 want2{1.0 / 6.0, -kI / 3.0, kI / 3.0, 5.0 / 6.0};
  CHECK(max_abs_entry(s2 - want2) < 1e-15);
  CHECK(max_abs_entry(s2 - from(oracle::steady_state(2.0, 1.0))) < 1e-13);

  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const SystemParams p{0.05 + std::abs(u(rng)), u(rng)};
    const DensityMatrix rho = steady_state(p);
    CHECK(max_abs_entry(rho.op - from(oracle::steady_state(p.gamma, p.omega))) < 1e-12);
    CHECK(max_abs_entry(lindblad_rhs(rho, p)) < 1e-12);
    CHECK_NOTHROW(DensityMatrix::validated(rho.op));
    // Depends only on omega / gamma.
    const double c = 0.1 + std::abs(u(rng));
    CHECK(max_abs_entry(steady_state({c * p.gamma, c * p.omega}).op - rho.op) < 1e-13);
  }
}

TEST_CASE("measurement_ops") {
  const MeasurementOps a = measurement_ops({1.0, 0.0}, {0.0});
  CHECK(max_abs_entry(a.K - Operator2{0.5, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(max_abs_entry(a.J - lowering()) == 0.0);

  const MeasurementOps b = measurement_ops({1.0, 1.0}, {0.5});
  CHECK(max_abs_entry(b.K - Operator2{5.0 / 8.0, 0.5 * kI, 0.5 * kI + 0.5, 1.0 / 8.0}) < 1e-15);
  CHECK(max_abs_entry(b.J - Operator2{0.5, 0.0, 1.0, 0.5}) < 1e-15);

  // Completeness: the first-order coefficient of Omega0^+ Omega0 + Omega1^+ Omega1 - 1
  // is K + K^+ - gamma J^+ J, which must vanish.
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const SystemParams p{0.01 + std::abs(u(rng)), u(rng)};
    const Complex mu(u(rng), u(rng));
    const MeasurementOps ops = measurement_ops(p, {mu});
    CHECK(max_abs_entry(ops.K + adjoint(ops.K) - p.gamma * (adjoint(ops.J) * ops.J)) < 1e-12);
    CHECK(max_abs_entry(ops.K - from(oracle::k_operator(p.gamma, p.omega, mu))) < 1e-12);
    CHECK(max_abs_entry(ops.J - from(oracle::j_operator(mu))) < 1e-15);
  }
}

TEST_CASE("jump_rate") {
  const SystemParams p{1.0, 1.0};
  CHECK(jump_rate(PureState::ground(), measurement_ops(p, {0.0}), p) == 0.0);
  CHECK(jump_rate(PureState::excited(), measurement_ops(p, {0.0}), p) == doctest::Approx(1.0));
  CHECK(jump_rate(PureState::excited(), measurement_ops(p, {0.5}), p) == doctest::Approx(1.25));
  const SystemParams p3{3.0, 1.0};
  CHECK(jump_rate(PureState::excited(), measurement_ops(p3, {0.5}), p3) ==
        doctest::Approx(3.75));
}

TEST_CASE("evolve_nojump") {
  const SystemParams p{1.0, 1.0};
  const MeasurementOps ops = measurement_ops(p, {0.5});

  // The eigenvectors of K are fixed points of the normalized flow.
  const Operator2 k = ops.K;
  const Complex ht = 0.5 * trace(k);
  const Complex off = std::sqrt(ht * ht - determinant(k));
  for (const Complex lambda : {ht + off, ht - off}) {
    const PureState v = normalize({k.eg, lambda - k.ee});
    for (const double dt : {1e-3, 0.1, 1.0, 30.0}) {
      const NoJumpStep step = evolve_nojump(v, ops, dt);
      CHECK(fidelity(step.state, v) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  const NoJumpStep zero = evolve_nojump(PureState::excited(), ops, 0.0);
  CHECK(zero.survival == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity(zero.state, PureState::excited()) == doctest::Approx(1.0).epsilon(1e-15));

  const NoJumpStep tiny = evolve_nojump(PureState::excited(), ops, 1e-9);
  CHECK(std::abs(tiny.survival - 1.0) < 1e-8);

  // First order: 1 - rate dt = 0.875.
  const NoJumpStep s = evolve_nojump(PureState::excited(), ops, 0.1);
  CHECK(std::abs(s.survival - 0.875) < 0.01);
  const double euler = oracle::euler_survival(oracle::k_operator(1.0, 1.0, 0.5), {1.0, 0.0}, 0.1,
                                              1'000'000);
  CHECK(std::abs(s.survival - euler) < 1e-6);

  // Long times and many parameter points against the Euler oracle.
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 20; ++i) {
    const SystemParams q{0.2 + std::abs(u(rng)), u(rng)};
    const Complex mu(u(rng), u(rng));
    const MeasurementOps o = measurement_ops(q, {mu});
    const double t = 0.05 + std::abs(u(rng));
    const double want =
        oracle::euler_survival(oracle::k_operator(q.gamma, q.omega, mu), {0.6, 0.8}, t, 200'000);
    const double got = evolve_nojump({0.6, 0.8}, o, t).survival;
    CHECK(std::abs(got - want) < 1e-4 * std::max(1.0, want));
  }
}

TEST_CASE("no-jump propagator near a degenerate generator") {
  // With mu = i (Omega^2 - gamma^2/4) / (2 Omega gamma) the two eigenvalues of K
  // coincide and K is not diagonalizable; the propagator must stay finite and
  // obey the semigroup law.
  const SystemParams p{1.0, 0.25};
  const Complex mu(0.0, -0.375);
  const MeasurementOps ops = measurement_ops(p, {mu});
  const Complex ht = 0.5 * trace(ops.K);
  CHECK(std::abs(ht * ht - determinant(ops.K)) < 1e-15);
  const NoJumpPropagator prop(ops.K);
  for (const double t : {1e-6, 0.3, 2.0, 25.0}) {
    const Operator2 a = prop.at(t);
    const Operator2 b = prop.at(0.5 * t) * prop.at(0.5 * t);
    CHECK(std::isfinite(frobenius_norm(a)));
    CHECK(max_abs_entry(a - b) < 1e-10 * std::max(1.0, max_abs_entry(a)));
  }
  const double want =
      oracle::euler_survival(oracle::k_operator(1.0, 0.25, mu), {1.0, 0.0}, 1.0, 1'000'000);
  CHECK(std::abs(norm_squared(prop.at(1.0) * PureState::excited()) - want) < 1e-5);
}

TEST_CASE("apply_jump") {
  const SystemParams p{1.0, 1.0};
  const PureState a = apply_jump(PureState::excited(), measurement_ops(p, {0.0}));
  CHECK(fidelity(a, PureState::ground()) == doctest::Approx(1.0));
  CHECK(throws_code(ErrorCode::ZeroVector,
                    [&] { apply_jump(PureState::ground(), measurement_ops(p, {0.0})); }));
  const PureState b = apply_jump(PureState::excited(), measurement_ops(p, {0.5}));
  CHECK(std::abs(b.ce - 1.0 / std::sqrt(5.0)) < 1e-15);
  CHECK(std::abs(b.cg - 2.0 / std::sqrt(5.0)) < 1e-15);
}

TEST_CASE("integrate_master") {
  const SystemParams p{1.0, 1.0};
  const DensityMatrix rs = steady_state(p);
  for (const double t : {0.5, 7.0, 40.0}) {
    CHECK(max_abs_entry(integrate_master(rs, p, t, 0.01).op - rs.op) < 1e-9);
  }
  const DensityMatrix e = project(PureState::excited());
  CHECK(trace_distance(integrate_master(e, p, 50.0, 0.01), rs) < 1e-6);

  const DensityMatrix at0 = integrate_master(e, p, 0.0, 0.01);
  CHECK(max_abs_entry(at0.op - e.op) == 0.0);

  CHECK(throws_code(ErrorCode::StepTooLarge, [&] { integrate_master(e, p, 1.0, 0.02); }));
  CHECK(throws_code(ErrorCode::StepTooLarge,
                    [&] { integrate_master(e, {1.0, 5.0}, 1.0, 0.01); }));

  // Trace and positivity survive long runs at several drive strengths.
  for (const double w : {-2.0, 0.2, 3.0}) {
    const SystemParams q{1.0, w};
    const DensityMatrix r = integrate_master(e, q, 12.3, 0.001);
    CHECK(std::abs(trace(r.op) - 1.0) < 1e-12);
    CHECK_NOTHROW(DensityMatrix::validated(r.op, 1e-10));
  }
}
