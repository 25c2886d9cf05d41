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

#include "tdcr/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace tdcr {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_number(const std::string& field, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(field, field + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

template <typename Int>
Int parse_integer(const std::string& field, std::string_view text) {
  text = trim(text);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(field, field + ": expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(const std::string& field, std::string_view text, std::size_t n) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    out.push_back(parse_number(field, text.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.size() != n) {
    throw ConfigError(field, field + ": expected " + std::to_string(n) + " comma-separated numbers");
  }
  return out;
}

Eigen::Vector3d parse_vec3(const std::string& field, std::string_view text) {
  const auto v = parse_list(field, text, 3);
  return {v[0], v[1], v[2]};
}

std::string format_vec(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(v(i));
  }
  return out;
}

struct Field {
  const char* key;
  std::function<void(SimulationConfig&, const std::string&, std::string_view)> set;
  std::function<std::string(const SimulationConfig&)> get;
};

template <typename Member>
Field number_field(const char* key, Member member) {
  return {key,
          [member](SimulationConfig& c, const std::string& f, std::string_view v) {
            std::invoke(member, c) = parse_number(f, v);
          },
          [member](const SimulationConfig& c) {
            return format_number(std::invoke(member, c));
          }};
}

template <typename Member>
Field vec3_field(const char* key, Member member) {
  return {key,
          [member](SimulationConfig& c, const std::string& f, std::string_view v) {
            std::invoke(member, c) = parse_vec3(f, v);
          },
          [member](const SimulationConfig& c) { return format_vec(std::invoke(member, c)); }};
}

// gamma is resolved after all other keys, see build_config.
constexpr const char* kGammaKey = "plant.gamma";

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"plant.kind",
       [](SimulationConfig& c, const std::string& f, std::string_view v) {
         v = trim(v);
         if (v == "affine") c.plant.kind = PlantKind::kAffine;
         else if (v == "arc") c.plant.kind = PlantKind::kArc;
         else throw ConfigError(f, f + ": expected 'affine' or 'arc'");
       },
       [](const SimulationConfig& c) { return std::string(to_string(c.plant.kind)); }},
      number_field("plant.L", [](auto& c) -> auto& { return c.plant.length; }),
      number_field("plant.k_x", [](auto& c) -> auto& { return c.plant.lateral_gain; }),
      number_field("plant.k_y", [](auto& c) -> auto& { return c.plant.axial_gain; }),
      {kGammaKey, nullptr,
       [](const SimulationConfig& c) { return format_number(c.plant.curvature_gain); }},
      number_field("plant.noise_sigma", [](auto& c) -> auto& { return c.plant.noise_sigma; }),

      number_field("controller.lambda_x", [](auto& c) -> auto& { return c.controller.lambda_x; }),
      number_field("controller.lambda_t", [](auto& c) -> auto& { return c.controller.lambda_t; }),
      number_field("controller.lambda_y", [](auto& c) -> auto& { return c.controller.lambda_y; }),
      number_field("controller.s_max", [](auto& c) -> auto& { return c.controller.s_max; }),
      number_field("controller.tau_min", [](auto& c) -> auto& { return c.controller.tau_min; }),
      number_field("controller.tau_max", [](auto& c) -> auto& { return c.controller.tau_max; }),
      number_field("controller.dy_min", [](auto& c) -> auto& { return c.controller.dy_min; }),
      number_field("controller.dy_max", [](auto& c) -> auto& { return c.controller.dy_max; }),
      vec3_field("controller.y_min", [](auto& c) -> auto& { return c.controller.y_min; }),
      vec3_field("controller.y_max", [](auto& c) -> auto& { return c.controller.y_max; }),
      number_field("controller.alpha_J", [](auto& c) -> auto& { return c.controller.alpha_j; }),
      number_field("controller.dJ_max", [](auto& c) -> auto& { return c.controller.dj_max; }),

      vec3_field("tension.K", [](auto& c) -> auto& { return c.tension.stiffness; }),
      vec3_field("tension.tau_init", [](auto& c) -> auto& { return c.tension.tau_init; }),

      {"trajectory.kind",
       [](SimulationConfig& c, const std::string& f, std::string_view v) {
         const auto kind = parse_path_kind(trim(v));
         if (!kind) throw ConfigError(f, f + ": expected circle, pentagon, or square");
         c.trajectory.kind = *kind;
       },
       [](const SimulationConfig& c) { return std::string(to_string(c.trajectory.kind)); }},
      number_field("trajectory.size", [](auto& c) -> auto& { return c.trajectory.size; }),
      {"trajectory.center",
       [](SimulationConfig& c, const std::string& f, std::string_view v) {
         const auto xy = parse_list(f, v, 2);
         c.trajectory.center = {xy[0], xy[1]};
       },
       [](const SimulationConfig& c) { return format_vec(c.trajectory.center.vec()); }},
      number_field("trajectory.spacing",
                   [](auto& c) -> auto& { return c.trajectory.waypoint_spacing; }),
      {"trajectory.approach",
       [](SimulationConfig& c, const std::string& f, std::string_view v) {
         const auto a = parse_approach(trim(v));
         if (!a) throw ConfigError(f, f + ": expected 'none' or 'direct'");
         c.trajectory.approach = *a;
       },
       [](const SimulationConfig& c) { return std::string(to_string(c.trajectory.approach)); }},

      {"run.hold_steps",
       [](SimulationConfig& c, const std::string& f, std::string_view v) {
         c.run.hold_steps = parse_integer<int>(f, v);
       },
       [](const SimulationConfig& c) { return std::to_string(c.run.hold_steps); }},
      {"run.seed",
       [](SimulationConfig& c, const std::string& f, std::string_view v) {
         c.run.seed = parse_integer<std::uint64_t>(f, v);
       },
       [](const SimulationConfig& c) { return std::to_string(c.run.seed); }},
      number_field("run.perturbation", [](auto& c) -> auto& { return c.run.init_perturbation; }),
      {"run.output_dir",
       [](SimulationConfig& c, const std::string&, std::string_view v) {
         c.run.output_dir = std::string(trim(v));
       },
       [](const SimulationConfig& c) { return c.run.output_dir; }},
  };
  return table;
}

const Field* find_field(const std::string& key) {
  for (const Field& f : fields()) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

// Module validators prefix their messages with the field path.
std::string field_of(const std::string& message) {
  const auto end = message.find_first_of(" :");
  const std::string head = message.substr(0, end);
  return head.find('.') != std::string::npos ? head : std::string();
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(message), field_(std::move(field)) {}

ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError("", where + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("", where + "expected key = value");
    if (section.empty()) throw ConfigError("", where + "key outside of a section");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    if (!entries.emplace(key, std::string(trim(line.substr(eq + 1)))).second) {
      throw ConfigError(key, where + "duplicate key " + key);
    }
  }
  return entries;
}

void apply_override(ConfigEntries& entries, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("", "override '" + std::string(assignment) + "' is not section.key=value");
  }
  const std::string key(trim(assignment.substr(0, eq)));
  if (key.find('.') == std::string::npos) {
    throw ConfigError(key, "override key '" + key + "' is not section.key");
  }
  entries[key] = std::string(trim(assignment.substr(eq + 1)));
}

SimulationConfig build_config(const ConfigEntries& entries,
                              const std::vector<std::string>& required) {
  for (const std::string& key : required) {
    if (!entries.contains(key)) throw ConfigError(key, key + ": required field is missing");
  }
  SimulationConfig cfg = default_config();
  std::string gamma = "auto";
  for (const auto& [key, value] : entries) {
    const Field* field = find_field(key);
    if (field == nullptr) throw ConfigError(key, key + ": unknown key");
    if (key == kGammaKey) {
      gamma = value;
      continue;
    }
    field->set(cfg, key, value);
  }
  cfg.plant.curvature_gain =
      trim(gamma) == "auto" ? cfg.plant.matched_curvature_gain() : parse_number(kGammaKey, gamma);

  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field_of(e.what()), e.what());
  }
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ConfigEntries entries = parse_config_text(buffer.str());
  for (const std::string& o : overrides) apply_override(entries, o);
  return build_config(entries, {"trajectory.kind", "trajectory.size"});
}

std::string to_config_text(const SimulationConfig& cfg) {
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    const std::string key = f.key;
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

}  // namespace tdcr
