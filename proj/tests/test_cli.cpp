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

// Drives the tdcr_sim binary and checks exit codes and outputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

#ifndef TDCR_SIM_PATH
#error "TDCR_SIM_PATH must point at the tdcr_sim binary"
#endif

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "tdcr_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Outcome sim(const std::string& args, const std::string& env = "") {
  const fs::path log = workdir() / "log.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && " + env + " '" TDCR_SIM_PATH "' " +
                          args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream s;
  s << in.rdbuf();
  o.output = s.str();
  return o;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p;
}

constexpr const char* kCircle =
    "[plant]\nkind = affine\nk_x = 40\nk_y = 40\n[trajectory]\nkind = circle\nsize = 80\n";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("run writes five outputs") {
  const fs::path cfg = write_config("circle.ini", kCircle);
  const auto o = sim("run --config '" + cfg.string() + "' --out run1");
  CHECK(o.code == 0);
  CHECK(o.output.find("steady_mean=") != std::string::npos);
  for (const char* f :
       {"record.csv", "summary.json", "tracking.svg", "tension.svg", "error_profile.svg"}) {
    CHECK(fs::exists(workdir() / "run1" / f));
  }
}

TEST_CASE("output directory from the environment") {
  const fs::path cfg = write_config("circle_env.ini", kCircle);
  const auto o = sim("run --config '" + cfg.string() + "'", "TDCR_OUTPUT_DIR=from_env");
  CHECK(o.code == 0);
  CHECK(fs::exists(workdir() / "from_env" / "record.csv"));
}

TEST_CASE("validation failures exit with 2") {
  const fs::path missing = write_config("missing.ini", "[trajectory]\nkind = circle\n");
  auto o = sim("run --config '" + missing.string() + "'");
  CHECK(o.code == 2);
  CHECK(o.output.find("trajectory.size") != std::string::npos);

  const fs::path cfg = write_config("ok.ini", kCircle);
  o = sim("run --config '" + cfg.string() + "' --set controller.s_max=0");
  CHECK(o.code == 2);
  CHECK(o.output.find("controller.s_max") != std::string::npos);

  o = sim("validate --config '" + cfg.string() + "'");
  CHECK(o.code == 0);
  o = sim("validate --config '" + cfg.string() + "' --set plant.nope=1");
  CHECK(o.code == 2);
  o = sim("validate --config does_not_exist.ini");
  CHECK(o.code == 2);
}

TEST_CASE("seed flag overrides the file") {
  const fs::path noisy = write_config(
      "noisy.ini",
      "[plant]\nkind = arc\nk_x = 40\nk_y = 40\nnoise_sigma = 0.01\n"
      "[trajectory]\nkind = square\nsize = 80\n[run]\nhold_steps = 5\n");
  REQUIRE(sim("run --config '" + noisy.string() + "' --out s1 --seed 3").code == 0);
  REQUIRE(sim("run --config '" + noisy.string() + "' --out s2 --seed 3").code == 0);
  REQUIRE(sim("run --config '" + noisy.string() + "' --out s3 --seed 4").code == 0);
  CHECK(slurp(workdir() / "s1" / "record.csv") == slurp(workdir() / "s2" / "record.csv"));
  CHECK(slurp(workdir() / "s1" / "record.csv") != slurp(workdir() / "s3" / "record.csv"));
}

TEST_CASE("suite passes with defaults and is deterministic") {
  auto o = sim("suite --out suite_a");
  CHECK(o.code == 0);
  CHECK(o.output.find("FAIL") == std::string::npos);
  CHECK(fs::exists(workdir() / "suite_a" / "suite_summary.json"));
  REQUIRE(sim("suite --out suite_b").code == 0);
  for (const char* run : {"affine_circle", "affine_pentagon", "affine_square", "arc_circle",
                          "arc_pentagon", "arc_square"}) {
    CAPTURE(run);
    CHECK(slurp(workdir() / "suite_a" / run / "record.csv") ==
          slurp(workdir() / "suite_b" / run / "record.csv"));
  }
}

TEST_CASE("suite without the tracking term fails") {
  const auto o = sim("suite --out suite_c --set controller.lambda_x=0");
  CHECK(o.code == 4);
  CHECK(o.output.find("suite failed: criterion 1 (circle tracking)") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(sim("").code != 0);
  CHECK(sim("run").code != 0);
  CHECK(sim("frobnicate").code != 0);
}
