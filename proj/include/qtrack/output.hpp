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

#ifndef QTRACK_OUTPUT_HPP
#define QTRACK_OUTPUT_HPP

// File formats written by the command-line tool.
//
// CSV: '.' decimal separator, 17 significant digits, '\n' line endings,
// independent of the global locale.

#include <cstdint>
#include <json.hpp>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qtrack/scheme.hpp"
#include "qtrack/trajectory.hpp"

namespace qtrack {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr std::string_view kSchemeCsvHeader =
    "omega_over_gamma,family,mu_re,mu_im,p1,p2,entropy_bits,pr_residual";

inline constexpr std::string_view kTrajectoryCsvHeader =
    "trajectory_id,t,re_ce,im_ce,re_cg,im_cg,bloch_x,bloch_y,bloch_z,active_mu_re,"
    "active_mu_im,jumps_so_far";

std::string format_double(double x);

void write_scheme_csv(std::ostream& os, const std::vector<EntropyRow>& rows);
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& records);
void write_scheme_table(std::ostream& os, const SystemParams& p,
                        const std::vector<JumpingScheme>& schemes);

nlohmann::json to_json(const PureState& s);
nlohmann::json to_json(const SystemParams& p, const JumpingScheme& s);
nlohmann::json schemes_to_json(const SystemParams& p, const std::vector<JumpingScheme>& schemes);
nlohmann::json to_json(const EnsembleStats& stats);

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::string tool_version{kVersion};
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> command_line;
};

nlohmann::json to_json(const RunManifest& m);

}  // namespace qtrack

#endif  // QTRACK_OUTPUT_HPP
