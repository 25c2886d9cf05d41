// Copyright 2026 The tdcr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration files.
//
// A file is a list of sections, each holding `key = value` lines:
//
//   # comment
//   [trajectory]
//   kind = circle
//   size = 80
//   center = 0, 0
//
// Vectors are comma separated. Keys are addressed as `section.key`, which is
// also the syntax of command-line overrides (`--set controller.s_max=0.8`).
// Unknown sections or keys are rejected. In a file, trajectory.kind and
// trajectory.size are required; every other key falls back to
// default_config().

#ifndef TDCR_CONFIG_HPP_
#define TDCR_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tdcr/simulator.hpp"

namespace tdcr {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  /// Dotted path of the offending field, or empty for syntax errors.
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parsed `section.key` -> raw value text.
using ConfigEntries = std::map<std::string, std::string>;

ConfigEntries parse_config_text(std::string_view text);

/// Applies `section.key=value`.
void apply_override(ConfigEntries& entries, std::string_view assignment);

/// Builds and validates a configuration. Missing keys take their defaults
/// unless listed in `required`.
SimulationConfig build_config(const ConfigEntries& entries,
                              const std::vector<std::string>& required = {});

/// Reads a file, applies overrides, requires trajectory.kind and
/// trajectory.size, and validates.
SimulationConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides = {});

/// Every key of the configuration in file syntax; parses back to `cfg`.
std::string to_config_text(const SimulationConfig& cfg);

}  // namespace tdcr

#endif  // TDCR_CONFIG_HPP_
