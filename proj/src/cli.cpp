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

#include "qtrack/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "qtrack/output.hpp"

namespace qtrack::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

// Maps library errors for rejected inputs onto usage errors.
SystemParams checked_params(double gamma, double omega, bool allow_undriven) {
  const SystemParams p{gamma, omega};
  try {
    p.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("invalid parameters: ") + e.what());
  }
  if (!allow_undriven && omega == 0.0) {
    throw UsageError("undriven atom: tracking trivial");
  }
  return p;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw UsageError("cannot open output file '" + path + "'");
  return os;
}

void write_manifest(const std::string& path, RunManifest manifest,
                    std::chrono::steady_clock::time_point start) {
  manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream os = open_output(path);
  os << to_json(manifest).dump(2) << '\n';
}

std::string manifest_path(const std::string& explicit_path, const std::string& out) {
  if (!explicit_path.empty()) return explicit_path;
  if (!out.empty()) return out + ".manifest.json";
  return {};
}

struct Common {
  std::string out;
  std::string manifest;
  std::vector<std::string> argv;
};

int cmd_solve(double gamma, double omega, const std::string& format, const Common& c,
              std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const SystemParams p = checked_params(gamma, omega, false);
  const std::vector<JumpingScheme> schemes = find_schemes(p);

  auto emit = [&](std::ostream& os, const std::string& fmt) {
    if (fmt == "json") {
      os << schemes_to_json(p, schemes).dump(2) << '\n';
    } else if (fmt == "csv") {
      std::vector<EntropyRow> rows;
      for (const JumpingScheme& s : schemes) rows.push_back({p.omega / p.gamma, s});
      write_scheme_csv(os, rows);
    } else {
      write_scheme_table(os, p, schemes);
    }
  };

  RunManifest manifest;
  manifest.command = "solve";
  manifest.parameters = {{"gamma", gamma}, {"omega", omega}, {"format", format}};
  manifest.command_line = c.argv;
  if (!c.out.empty()) {
    std::ofstream os = open_output(c.out);
    emit(os, format.empty() ? "json" : format);
    manifest.outputs.push_back(c.out);
    write_scheme_table(out, p, schemes);
  } else {
    emit(out, format.empty() ? "table" : format);
  }
  if (const std::string mp = manifest_path(c.manifest, c.out); !mp.empty()) {
    write_manifest(mp, manifest, start);
  }
  return kSuccess;
}

int cmd_entropy_curve(double gamma, double omega_min, double omega_max, int steps,
                      const std::string& family_name, const Common& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  checked_params(gamma, 1.0, true);
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw UsageError("bad range: require 0 < omega-min < omega-max");
  }
  if (steps < 2) throw UsageError("bad range: --steps must be at least 2");
  std::optional<Family> family;
  if (!family_name.empty()) {
    family = parse_family(family_name);
    if (!family) throw UsageError("unknown family '" + family_name + "'");
  }

  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    grid[k] = omega_min + (omega_max - omega_min) * k / (steps - 1);
  }
  const std::vector<EntropyRow> rows = entropy_curve(gamma, grid, family);

  RunManifest manifest;
  manifest.command = "entropy-curve";
  manifest.parameters = {{"gamma", gamma},       {"omega_min", omega_min},
                         {"omega_max", omega_max}, {"steps", steps},
                         {"family", family_name}};
  manifest.command_line = c.argv;
  if (!c.out.empty()) {
    std::ofstream os = open_output(c.out);
    write_scheme_csv(os, rows);
    manifest.outputs.push_back(c.out);
    out << "wrote " << rows.size() << " rows for " << steps << " grid points to " << c.out
        << '\n';
  } else {
    write_scheme_csv(out, rows);
  }
  if (const std::string mp = manifest_path(c.manifest, c.out); !mp.empty()) {
    write_manifest(mp, manifest, start);
  }
  return kSuccess;
}

struct SimulateArgs {
  double gamma = 1.0;
  double omega = 0.0;
  std::string policy;
  double t_max = 100.0;
  double dt_record = 0.1;
  std::uint64_t seed = 0;
  std::size_t n_traj = 1;
  std::string initial;
  std::string stats;
};

int cmd_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  PolicySpec spec;
  try {
    spec = parse_policy(a.policy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("malformed policy: ") + e.what());
  }

  SimConfig cfg;
  cfg.params = checked_params(a.gamma, a.omega, std::holds_alternative<FixedPolicy>(spec));
  cfg.t_max = a.t_max;
  cfg.dt_record = a.dt_record;
  cfg.seed = a.seed;
  cfg.n_trajectories = a.n_traj;
  if (const auto* fixed = std::get_if<FixedPolicy>(&spec)) {
    cfg.policy = *fixed;
  } else {
    const Family family = std::get<Family>(spec);
    const auto scheme = find_scheme(cfg.params, family);
    if (!scheme) {
      throw UsageError("no " + std::string(to_string(family)) +
                       " scheme exists at omega/gamma = " + format_double(a.omega / a.gamma));
    }
    cfg.policy = AdaptivePolicy{*scheme};
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("invalid parameters: ") + e.what());
  }

  PureState initial = default_initial(cfg);
  if (a.initial == "e") {
    initial = PureState::excited();
  } else if (a.initial == "g") {
    initial = PureState::ground();
  } else if (a.initial == "psi1" || a.initial == "psi2") {
    const auto* adaptive = std::get_if<AdaptivePolicy>(&cfg.policy);
    if (!adaptive) throw UsageError("--initial " + a.initial + " needs an adaptive policy");
    initial = a.initial == "psi1" ? adaptive->scheme.pair.psi1 : adaptive->scheme.pair.psi2;
  } else if (!a.initial.empty()) {
    throw UsageError("unknown initial state '" + a.initial + "'");
  }

  const std::vector<TrajectoryRecord> records = simulate_records(cfg, initial);
  const EnsembleStats stats = summarize(cfg, records);

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.parameters = {{"gamma", a.gamma},         {"omega", a.omega},
                         {"policy", a.policy},       {"t_max", a.t_max},
                         {"dt_record", a.dt_record}, {"n_traj", a.n_traj},
                         {"initial", a.initial}};
  manifest.seed = a.seed;
  manifest.command_line = c.argv;

  std::string stats_path = a.stats;
  if (stats_path.empty() && !c.out.empty()) stats_path = c.out + ".stats.json";

  if (!c.out.empty()) {
    std::ofstream os = open_output(c.out);
    write_trajectory_csv(os, records);
    manifest.outputs.push_back(c.out);
  } else {
    write_trajectory_csv(out, records);
  }
  if (!stats_path.empty()) {
    std::ofstream os = open_output(stats_path);
    os << to_json(stats).dump(2) << '\n';
    manifest.outputs.push_back(stats_path);
  }
  if (!c.out.empty()) {
    out << "simulated " << stats.n_trajectories << " trajectories to t = " << a.t_max
        << ", mean jumps " << stats.jump_count_mean;
    if (stats.has_occupancy) out << ", occupancy of psi1 " << stats.occupancy[0];
    out << '\n';
  }
  if (const std::string mp = manifest_path(c.manifest, c.out); !mp.empty()) {
    write_manifest(mp, manifest, start);
  }
  return kSuccess;
}

int cmd_verify(double gamma, double omega, const Common& c, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const SystemParams p = checked_params(gamma, omega, false);
  const std::vector<CheckResult> checks = verify_checks(p);
  bool all = true;
  for (const CheckResult& r : checks) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "[%s] %-38s worst %.3e (tol %.1e)", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.value, r.tolerance);
    out << buf;
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
    all = all && r.passed;
  }
  out << (all ? "all checks passed" : "verification FAILED") << '\n';

  if (!c.manifest.empty()) {
    RunManifest manifest;
    manifest.command = "verify";
    manifest.parameters = {{"gamma", gamma}, {"omega", omega}};
    manifest.command_line = c.argv;
    write_manifest(c.manifest, manifest, start);
  }
  return all ? kSuccess : kVerificationFailed;
}

CheckResult check_at_most(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), value <= tol, value, tol, std::move(detail)};
}

}  // namespace

PolicySpec parse_policy(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("expected fixed:<re>,<im> or adaptive:<family>");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view value = text.substr(colon + 1);
  if (kind == "fixed") {
    const auto comma = value.find(',');
    if (comma == std::string_view::npos) {
      throw std::invalid_argument("fixed policy needs <re>,<im>");
    }
    return FixedPolicy{
        Complex(parse_number(value.substr(0, comma)), parse_number(value.substr(comma + 1)))};
  }
  if (kind == "adaptive") {
    if (const auto family = parse_family(value)) return *family;
    throw std::invalid_argument("adaptive family must be real, imag-large or imag-small");
  }
  throw std::invalid_argument("unknown policy kind '" + std::string(kind) + "'");
}

std::vector<CheckResult> verify_checks(const SystemParams& p) {
  p.validate();
  const std::vector<MuCandidate> candidates = mu_candidates(p);
  const std::vector<JumpingScheme> schemes = find_schemes(p);
  const bool below_quarter = std::abs(p.omega) <= 0.25 * p.gamma * (1.0 + 1e-12);
  std::vector<CheckResult> checks;

  double completeness = 0.0;
  std::vector<Complex> mus{Complex{}};
  for (const MuCandidate& c : candidates) mus.push_back(c.mu);
  for (Complex mu : mus) {
    const MeasurementOps ops = measurement_ops(p, {mu});
    const Operator2 defect =
        ops.K + adjoint(ops.K) - p.gamma * (adjoint(ops.J) * ops.J);
    completeness = std::max(completeness, max_abs_entry(defect) / p.gamma);
  }
  checks.push_back(check_at_most("operator completeness", completeness, 1e-12));

  const DensityMatrix rho_s = steady_state(p);
  checks.push_back(check_at_most("steady state is stationary",
                                 max_abs_entry(lindblad_rhs(rho_s, p)) / p.gamma, 1e-12));
  const double min_eig = hermitian_eigen(rho_s.op).values[1];
  checks.push_back(check_at_most("steady state is a density matrix",
                                 std::max({0.0, -min_eig, std::abs(trace(rho_s.op) - 1.0)}),
                                 1e-12));

  const std::size_t expected_candidates =
      below_quarter ? (candidates.size() == 4 ? 4u : 6u) : 2u;
  checks.push_back(check_at_most(
      "candidate count", candidates.size() == expected_candidates ? 0.0 : 1.0, 0.0,
      std::to_string(candidates.size()) + " candidates"));

  double radical_free = 0.0;
  double branch = 0.0;
  for (const MuCandidate& c : candidates) {
    radical_free = std::max(radical_free, std::abs(radical_free_residual(p, c.mu)));
    branch = std::max(branch, verify_mu(p, c.mu));
  }
  checks.push_back(check_at_most("radical-free condition residual", radical_free, 1e-10));
  checks.push_back(check_at_most("fixed-point consistency residual", branch, 1e-10));

  const std::size_t expected_schemes = below_quarter ? (candidates.size() == 4 ? 2u : 3u) : 1u;
  std::string families;
  for (const JumpingScheme& s : schemes) {
    families += (families.empty() ? "" : ", ") + std::string(to_string(s.family()));
  }
  checks.push_back(check_at_most("scheme families found",
                                 schemes.size() == expected_schemes ? 0.0 : 1.0, 0.0,
                                 "[" + families + "]"));

  double eigen = 0.0;
  double cycle = 0.0;
  double cycle_op = 0.0;
  double pr = 0.0;
  double cross = 0.0;
  double entropy = 0.0;
  double real_half = 1.0;
  for (const JumpingScheme& s : schemes) {
    const Complex mu = s.mu.mu;
    const MeasurementOps plus = measurement_ops(p, {mu});
    const MeasurementOps minus = measurement_ops(p, {-mu});
    eigen = std::max({eigen, eigen_residual(plus.K, s.pair.psi1) / p.gamma,
                      eigen_residual(minus.K, s.pair.psi2) / p.gamma});
    cycle = std::max(cycle, 1.0 - s.pair.cycle_fidelity);
    const Operator2 two_clicks = minus.J * plus.J;
    const Complex scale = two_clicks.ee;
    cycle_op = std::max(cycle_op, max_abs_entry(two_clicks - scale * Operator2::identity()) /
                                      std::abs(scale));
    pr = std::max(pr, s.pr_residual);
    const RateOccupation rates = rate_based_occupation(s.pair, p, mu);
    cross = std::max(cross, std::abs(rates.p1 - s.p1));
    entropy = std::max(entropy, std::abs(s.entropy_bits - shannon_entropy(s.p1)));
    if (s.family() == Family::Real) real_half = std::abs(s.p1 - 0.5);
  }
  checks.push_back(check_at_most("fixed-state eigen residual", eigen, 1e-10));
  checks.push_back(check_at_most("two-click cycle closes", cycle, kCycleTolerance));
  checks.push_back(check_at_most("two-click operator is scalar", cycle_op, 1e-10));
  checks.push_back(check_at_most("steady-state reconstruction", pr, kPrTolerance));
  checks.push_back(check_at_most("occupation cross-check", cross, 1e-9));
  checks.push_back(check_at_most("entropy consistency", entropy, 1e-12));
  checks.push_back(check_at_most("real family occupies 1/2 each", real_half, 1e-9));
  return checks;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-jump tracking of a driven two-level atom", "qtrack"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  common.argv = args;

  double gamma = 1.0;
  double omega = 0.0;
  std::string format;

  auto* solve = app.add_subcommand("solve", "List the adaptive two-state jumping schemes");
  solve->add_option("--gamma", gamma, "Decay rate (default 1)");
  solve->add_option("--omega", omega, "Rabi frequency")->required();
  solve->add_option("--format", format, "json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  solve->add_option("--out", common.out, "Output file (JSON unless --format says otherwise)");
  solve->add_option("--manifest", common.manifest, "Run manifest path");

  double omega_min = 0.0;
  double omega_max = 0.0;
  int steps = 100;
  std::string family;
  auto* curve = app.add_subcommand("entropy-curve", "Entropy of every scheme over an omega grid");
  curve->add_option("--gamma", gamma, "Decay rate (default 1)");
  curve->add_option("--omega-min", omega_min, "First grid point")->required();
  curve->add_option("--omega-max", omega_max, "Last grid point")->required();
  curve->add_option("--steps", steps, "Number of grid points, endpoints included");
  curve->add_option("--family", family, "Restrict to one family");
  curve->add_option("--out", common.out, "CSV output (default stdout)");
  curve->add_option("--manifest", common.manifest, "Run manifest path");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo quantum-jump trajectories");
  simulate->add_option("--gamma", sim.gamma, "Decay rate (default 1)");
  simulate->add_option("--omega", sim.omega, "Rabi frequency")->required();
  simulate->add_option("--policy", sim.policy, "fixed:<re>,<im> or adaptive:<family>")
      ->required();
  simulate->add_option("--t-max", sim.t_max, "Simulated time");
  simulate->add_option("--dt-record", sim.dt_record, "Sampling interval");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--n-traj", sim.n_traj, "Number of trajectories");
  simulate->add_option("--initial", sim.initial, "e, g, psi1 or psi2");
  simulate->add_option("--out", common.out, "Trajectory CSV (default stdout)");
  simulate->add_option("--stats", sim.stats, "Ensemble statistics JSON");
  simulate->add_option("--manifest", common.manifest, "Run manifest path");

  auto* verify = app.add_subcommand("verify", "Check the invariants behind the schemes");
  verify->add_option("--gamma", gamma, "Decay rate (default 1)");
  verify->add_option("--omega", omega, "Rabi frequency")->required();
  verify->add_option("--manifest", common.manifest, "Run manifest path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (*solve) return cmd_solve(gamma, omega, format, common, out);
    if (*curve) {
      return cmd_entropy_curve(gamma, omega_min, omega_max, steps, family, common, out);
    }
    if (*simulate) return cmd_simulate(sim, common, out);
    if (*verify) return cmd_verify(gamma, omega, common, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace qtrack::cli
