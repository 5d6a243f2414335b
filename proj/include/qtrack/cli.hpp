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

#ifndef QTRACK_CLI_HPP
#define QTRACK_CLI_HPP

#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qtrack/dynamics.hpp"
#include "qtrack/scheme.hpp"
#include "qtrack/trajectory.hpp"

namespace qtrack::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
};

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// `fixed:<re>,<im>` or `adaptive:<family>`. Throws std::invalid_argument.
using PolicySpec = std::variant<FixedPolicy, Family>;
PolicySpec parse_policy(std::string_view text);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // worst observed value
  double tolerance = 0.0;  // pass threshold
  std::string detail;
};

// Self-test of the invariants behind find_schemes at one parameter point.
// Throws Error(InvalidParams / OmegaZero) for rejected inputs.
std::vector<CheckResult> verify_checks(const SystemParams& p);

}  // namespace qtrack::cli

#endif  // QTRACK_CLI_HPP
