// Copyright 2026 The petzlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "petz/json_io.hpp"

namespace petz {

// Exit codes shared by run_command, the C API and the CLI.
enum class ExitCode : int {
  kSuccess = 0,
  kViolation = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

struct ExperimentConfig {
  int dim = 0;
  json reference;  // reference spec
  json channel;    // channel schema
  json state;      // state spec
  Tolerances tol;
  double eps_fix = 1e-8;
  std::uint64_t seed = 0;  // offset added to every component seed
  int n_max = 40;
  std::vector<double> p_list;
  int restarts = 32;
  int num_instances = 1;
  json fuzz;  // {"registry": [...], "shape": {...}, "dims": [...], "workers": k}
};

// Validates the schema and fills defaults. Throws ConfigError.
ExperimentConfig parse_config(const json& j);

// One fully built instance of a config. `index` shifts every component seed,
// on top of the config-level seed.
struct ConfiguredInstance {
  Superoperator phi;
  Reference b;
  State a;
  json resolved;  // the instance's reference/channel/state specs with final seeds
};

ConfiguredInstance build_instance(const ExperimentConfig& config, int index = 0);

struct CommandResult {
  ExitCode code = ExitCode::kSuccess;
  std::string output;  // JSON or CSV, newline-terminated; empty on errors
  std::string error;   // diagnostic on non-success
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"analyze", "iterate", "decompose", "dpi",
                                                 "bound",   "fuzz",    "probe-l1"};
  return names;
}

// Runs a subcommand. Never throws: errors are mapped onto exit codes.
CommandResult run_command(const std::string& command, const json& config,
                          std::optional<std::uint64_t> seed_override = std::nullopt);
CommandResult run_command(const std::string& command, const std::string& config_text,
                          std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace petz
