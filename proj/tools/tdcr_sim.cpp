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

// tdcr_sim: run single experiments or the full acceptance suite.
//
// Exit codes: 0 success, 1 unexpected error (I/O and the like),
// 2 invalid configuration, 3 run aborted, 4 suite threshold failed.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tdcr/config.hpp"
#include "tdcr/report.hpp"
#include "tdcr/simulator.hpp"
#include "tdcr/suite.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kError = 1,
  kInvalidConfig = 2,
  kAborted = 3,
  kThresholdFailed = 4,
};

constexpr const char* kOutputDirEnv = "TDCR_OUTPUT_DIR";

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  std::optional<std::uint64_t> seed;
};

tdcr::ConfigEntries read_entries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tdcr::ConfigError("", "cannot read config file " + path);
  std::stringstream text;
  text << in.rdbuf();
  return tdcr::parse_config_text(text.str());
}

// --out wins, then run.output_dir when given explicitly, then the
// environment, then the built-in default.
std::string output_dir(const Options& opt, const tdcr::ConfigEntries& entries,
                       const tdcr::SimulationConfig& cfg) {
  if (!opt.out.empty()) return opt.out;
  if (entries.contains("run.output_dir")) return cfg.run.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return cfg.run.output_dir;
}

tdcr::SimulationConfig configure(const Options& opt, tdcr::ConfigEntries& entries,
                                 const std::vector<std::string>& required) {
  for (const std::string& o : opt.overrides) tdcr::apply_override(entries, o);
  if (opt.seed) entries["run.seed"] = std::to_string(*opt.seed);
  return tdcr::build_config(entries, required);
}

const std::vector<std::string> kRequiredInFile = {"trajectory.kind", "trajectory.size"};

int cmd_validate(const Options& opt) {
  tdcr::ConfigEntries entries = read_entries(opt.config);
  configure(opt, entries, kRequiredInFile);
  std::printf("%s: ok\n", opt.config.c_str());
  return kOk;
}

int cmd_run(const Options& opt) {
  tdcr::ConfigEntries entries = read_entries(opt.config);
  const tdcr::SimulationConfig cfg = configure(opt, entries, kRequiredInFile);
  const std::string dir = output_dir(opt, entries, cfg);

  const tdcr::RunResult result = tdcr::run_simulation(cfg);
  const std::string title = std::string(tdcr::to_string(cfg.plant.kind)) + " " +
                            std::string(tdcr::to_string(cfg.trajectory.kind));
  tdcr::write_run_outputs(dir, result, title);

  const tdcr::RunSummary& s = result.summary;
  std::printf(
      "%s: steps=%d steady_mean=%.4f mm steady_max=%.4f mm peak=%.4f mm "
      "tau=[%.3f, %.3f] N infeasible=%d time=%.3f s -> %s\n",
      title.c_str(), s.total_steps, s.steady_mean_error, s.steady_max_error, s.peak_error,
      s.tau_min.minCoeff(), s.tau_max.maxCoeff(), s.infeasible_steps, s.wall_time_s,
      dir.c_str());
  return kOk;
}

int cmd_suite(const Options& opt) {
  tdcr::ConfigEntries entries;
  const tdcr::SimulationConfig base = configure(opt, entries, {});
  const std::string dir = output_dir(opt, entries, base);

  const tdcr::SuiteReport report = tdcr::run_suite(base);
  tdcr::write_suite_outputs(dir, report);

  for (const tdcr::CriterionResult& c : report.criteria) {
    std::printf("%s criterion %s (%s): %s\n", c.passed ? "PASS" : "FAIL", c.id.c_str(),
                c.name.c_str(), c.detail.c_str());
  }
  for (const tdcr::SuiteRun& r : report.runs) {
    if (!r.result) std::fprintf(stderr, "run %s failed: %s\n", r.name.c_str(), r.error.c_str());
  }
  std::fflush(stdout);
  if (!report.passed()) {
    for (const tdcr::CriterionResult& c : report.criteria) {
      if (!c.passed) std::fprintf(stderr, "suite failed: criterion %s (%s)\n", c.id.c_str(), c.name.c_str());
    }
    return kThresholdFailed;
  }
  std::printf("suite passed -> %s\n", dir.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-less tendon-driven continuum robot control simulator"};
  app.require_subcommand(1);
  Options opt;

  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--set", opt.overrides, "Override a key, section.key=value (repeatable)");
  };
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out,
                    std::string("Output directory (default: run.output_dir, then $") +
                        kOutputDirEnv + ")");
    sub->add_option("--seed", opt.seed, "Random seed");
  };

  CLI::App* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("--config", opt.config, "Config file")->required();
  add_overrides(run);
  add_run_flags(run);

  CLI::App* suite = app.add_subcommand("suite", "Run every experiment and check the thresholds");
  add_overrides(suite);
  add_run_flags(suite);

  CLI::App* check = app.add_subcommand("validate", "Check a config file without running it");
  check->add_option("--config", opt.config, "Config file")->required();
  add_overrides(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(opt);
    if (*suite) return cmd_suite(opt);
    return cmd_validate(opt);
  } catch (const tdcr::ConfigError& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kInvalidConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kInvalidConfig;
  } catch (const tdcr::SimulationAborted& e) {
    std::fprintf(stderr, "run aborted: %s\n", e.what());
    return kAborted;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
}
