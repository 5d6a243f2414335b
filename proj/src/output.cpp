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

#include "qtrack/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace qtrack {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0"
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_scheme_csv(std::ostream& os, const std::vector<EntropyRow>& rows) {
  os << kSchemeCsvHeader << '\n';
  for (const EntropyRow& row : rows) {
    const JumpingScheme& s = row.scheme;
    os << format_double(row.omega_over_gamma) << ',' << to_string(s.family()) << ','
       << format_double(s.mu.mu.real()) << ',' << format_double(s.mu.mu.imag()) << ','
       << format_double(s.p1) << ',' << format_double(s.p2) << ','
       << format_double(s.entropy_bits) << ',' << format_double(s.pr_residual) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& records) {
  os << kTrajectoryCsvHeader << '\n';
  std::string line;
  for (std::size_t id = 0; id < records.size(); ++id) {
    for (const Sample& s : records[id].samples) {
      line.clear();
      line += std::to_string(id);
      for (double v : {s.t, s.state.ce.real(), s.state.ce.imag(), s.state.cg.real(),
                       s.state.cg.imag(), s.bloch.x, s.bloch.y, s.bloch.z, s.active_mu.real(),
                       s.active_mu.imag()}) {
        line += ',';
        line += format_double(v);
      }
      line += ',';
      line += std::to_string(s.jumps_so_far);
      line += '\n';
      os << line;
    }
  }
}

void write_scheme_table(std::ostream& os, const SystemParams& p,
                        const std::vector<JumpingScheme>& schemes) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "gamma = %g, omega = %g (omega/gamma = %g): %zu scheme(s)\n",
                p.gamma, p.omega, p.omega / p.gamma, schemes.size());
  os << buf;
  std::snprintf(buf, sizeof buf, "%-11s %-22s %-6s %-12s %-12s %-12s %-10s\n", "family", "mu",
                "pair", "p1", "p2", "entropy", "residual");
  os << buf;
  for (const JumpingScheme& s : schemes) {
    char mu[64];
    std::snprintf(mu, sizeof mu, "%+.6f%+.6fi", s.mu.mu.real(), s.mu.mu.imag());
    char pair[8];
    std::snprintf(pair, sizeof pair, "(%c,%c)", to_char(s.pair.s1), to_char(s.pair.s2));
    std::snprintf(buf, sizeof buf, "%-11s %-22s %-6s %-12.9f %-12.9f %-12.9f %-10.2e%s\n",
                  std::string(to_string(s.family())).c_str(), mu, pair, s.p1, s.p2,
                  s.entropy_bits, s.pr_residual, s.mu.boundary ? "  (merged at |omega| = gamma/4)" : "");
    os << buf;
  }
}

nlohmann::json to_json(const PureState& s) {
  return {{"re_ce", s.ce.real()},
          {"im_ce", s.ce.imag()},
          {"re_cg", s.cg.real()},
          {"im_cg", s.cg.imag()}};
}

nlohmann::json to_json(const SystemParams& p, const JumpingScheme& s) {
  nlohmann::json psi1 = to_json(canonical_phase(s.pair.psi1));
  psi1["sign"] = std::string(1, to_char(s.pair.s1));
  nlohmann::json psi2 = to_json(canonical_phase(s.pair.psi2));
  psi2["sign"] = std::string(1, to_char(s.pair.s2));
  return {{"family", std::string(to_string(s.family()))},
          {"branch", std::string(to_string(s.mu.branch))},
          {"boundary", s.mu.boundary},
          {"omega_over_gamma", p.omega / p.gamma},
          {"mu_re", s.mu.mu.real()},
          {"mu_im", s.mu.mu.imag()},
          {"psi1", psi1},
          {"psi2", psi2},
          {"p1", s.p1},
          {"p2", s.p2},
          {"entropy_bits", s.entropy_bits},
          {"pr_residual", s.pr_residual},
          {"cycle_fidelity", s.pair.cycle_fidelity}};
}

nlohmann::json schemes_to_json(const SystemParams& p, const std::vector<JumpingScheme>& schemes) {
  nlohmann::json list = nlohmann::json::array();
  for (const JumpingScheme& s : schemes) list.push_back(to_json(p, s));
  return {{"gamma", p.gamma}, {"omega", p.omega}, {"schemes", list}};
}

nlohmann::json to_json(const EnsembleStats& stats) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    const Operator2& r = stats.mean_rho[k].op;
    rows.push_back({{"t", stats.times[k]},
                    {"rho_ee", r.ee.real()},
                    {"rho_gg", r.gg.real()},
                    {"rho_eg_re", r.eg.real()},
                    {"rho_eg_im", r.eg.imag()}});
  }
  nlohmann::json out = {{"n_trajectories", stats.n_trajectories},
                        {"jump_count_mean", stats.jump_count_mean},
                        {"dark_terminations", stats.dark_terminations},
                        {"mean_rho", rows}};
  if (stats.has_occupancy) {
    out["occupancy"] = {stats.occupancy[0], stats.occupancy[1]};
    out["occupancy_stderr"] =
        std::isfinite(stats.occupancy_stderr) ? nlohmann::json(stats.occupancy_stderr) : nullptr;
  } else {
    out["occupancy"] = nullptr;
    out["occupancy_stderr"] = nullptr;
  }
  return out;
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"parameters", m.parameters},
          {"seed", m.seed},
          {"tool_version", m.tool_version},
          {"outputs", m.outputs},
          {"wall_clock_seconds", m.wall_clock_seconds},
          {"command_line", m.command_line}};
}

}  // namespace qtrack
