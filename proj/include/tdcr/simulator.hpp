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

#ifndef TDCR_SIMULATOR_HPP_
#define TDCR_SIMULATOR_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdcr/controller.hpp"
#include "tdcr/trajectory.hpp"

namespace tdcr {

struct TensionConfig {
  Eigen::Vector3d stiffness{0.09, 0.4, 0.4};  // N/mm
  Eigen::Vector3d tau_init{1.0, 1.0, 1.0};    // N
};

struct RunOptions {
  int hold_steps = 100;
  std::uint64_t seed = 1;
  double init_perturbation = 0.5;  // mm per actuator
  std::string output_dir = "out";
};

struct SimulationConfig {
  PlantParams plant;
  ControllerConfig controller;
  TensionConfig tension;
  TrajectorySpec trajectory;
  RunOptions run;
};

/// Experiment defaults: the bench parameters with plant gains large enough
/// for the 80 mm reference paths to be reachable inside the tension window.
SimulationConfig default_config();

/// Throws std::invalid_argument naming the offending field.
void validate(const SimulationConfig& cfg);

/// One control cycle. Tip, reference, actuators, and tensions are the state
/// at the start of the cycle; dy and the solver fields describe the action
/// taken in it, which aims at the next reference waypoint.
struct RunRow {
  int step = 0;
  TipPosition reference;
  TipPosition tip;
  double error = 0.0;   // |tip - reference|
  double arclen = 0.0;  // cumulative reference arc length
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  Eigen::Vector3d dy = Eigen::Vector3d::Zero();
  Eigen::Vector3d tau = Eigen::Vector3d::Zero();
  double t_bb = 0.0;
  double dj_norm = 0.0;
  QpStatus status = QpStatus::kOptimal;
  double kkt = 0.0;
};

struct RunRecord {
  std::vector<RunRow> rows;
  std::size_t waypoint_count = 0;
  int hold_steps = 0;

  /// First row of the steady-state window: the final half of the
  /// waypoints plus the hold tail.
  std::size_t steady_start() const { return waypoint_count / 2; }
};

struct RunSummary {
  double steady_mean_error = 0.0;
  double steady_max_error = 0.0;
  double peak_error = 0.0;
  Eigen::Vector3d tau_min = Eigen::Vector3d::Zero();
  Eigen::Vector3d tau_max = Eigen::Vector3d::Zero();
  double t_bb_min = 0.0;
  double t_bb_max = 0.0;
  int infeasible_steps = 0;
  int total_steps = 0;
  double wall_time_s = 0.0;
};

struct RunResult {
  RunRecord record;
  RunSummary summary;
};

/// More than 10% of the steps fell back because the actuation program could
/// not be solved.
class SimulationAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything in RunSummary except wall time, derived from the record alone.
RunSummary summarize(const RunRecord& record);

struct ErrorSample {
  double arclen = 0.0;
  double error = 0.0;
};

/// Error against cumulative reference arc length, one sample per row.
std::vector<ErrorSample> compute_error_profile(const RunRecord& record);

/// Initial state at the rest pose with the Jacobian estimated by finite
/// differences on the plant.
ControlState initial_state(const SimulationConfig& cfg, const Plant& plant);

/// Runs the loop over the waypoint schedule plus the hold tail.
RunResult run_simulation(const SimulationConfig& cfg);

}  // namespace tdcr

#endif  // TDCR_SIMULATOR_HPP_
