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

#include "tdcr/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>

namespace tdcr {

SimulationConfig default_config() {
  SimulationConfig cfg;
  cfg.plant.lateral_gain = 40.0;
  cfg.plant.axial_gain = 40.0;
  cfg.plant.curvature_gain = cfg.plant.matched_curvature_gain();
  return cfg;
}

void validate(const SimulationConfig& cfg) {
  validate(cfg.plant);
  validate(cfg.controller);
  validate(cfg.trajectory, cfg.controller.s_max);
  if ((cfg.tension.stiffness.array() <= 0.0).any()) {
    throw std::invalid_argument("tension.K must be > 0");
  }
  if ((cfg.tension.tau_init.array() < cfg.controller.tau_min).any() ||
      (cfg.tension.tau_init.array() > cfg.controller.tau_max).any()) {
    throw std::invalid_argument("tension.tau_init must lie in [tau_min, tau_max]");
  }
  const Eigen::Vector3d rest = rest_state(cfg.plant).vec();
  if ((rest.array() < cfg.controller.y_min.array()).any() ||
      (rest.array() > cfg.controller.y_max.array()).any()) {
    throw std::invalid_argument("controller.y_min/y_max must contain the rest pose");
  }
  if (cfg.run.hold_steps < 0) throw std::invalid_argument("run.hold_steps must be >= 0");
  if (!(cfg.run.init_perturbation > 0.0)) {
    throw std::invalid_argument("run.perturbation must be > 0");
  }
}

RunSummary summarize(const RunRecord& record) {
  RunSummary s;
  s.total_steps = static_cast<int>(record.rows.size());
  if (record.rows.empty()) return s;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  s.tau_min.setConstant(kInf);
  s.tau_max.setConstant(-kInf);
  s.t_bb_min = kInf;
  s.t_bb_max = -kInf;
  double steady_sum = 0.0;
  std::size_t steady_count = 0;
  const std::size_t start = record.steady_start();
  for (std::size_t k = 0; k < record.rows.size(); ++k) {
    const RunRow& row = record.rows[k];
    s.peak_error = std::max(s.peak_error, row.error);
    s.tau_min = s.tau_min.cwiseMin(row.tau);
    s.tau_max = s.tau_max.cwiseMax(row.tau);
    s.t_bb_min = std::min(s.t_bb_min, row.t_bb);
    s.t_bb_max = std::max(s.t_bb_max, row.t_bb);
    if (row.status != QpStatus::kOptimal) ++s.infeasible_steps;
    if (k >= start) {
      steady_sum += row.error;
      s.steady_max_error = std::max(s.steady_max_error, row.error);
      ++steady_count;
    }
  }
  s.steady_mean_error = steady_count > 0 ? steady_sum / static_cast<double>(steady_count) : 0.0;
  return s;
}

std::vector<ErrorSample> compute_error_profile(const RunRecord& record) {
  std::vector<ErrorSample> out;
  out.reserve(record.rows.size());
  for (const RunRow& row : record.rows) out.push_back({row.arclen, row.error});
  return out;
}

ControlState initial_state(const SimulationConfig& cfg, const Plant& plant) {
  const ActuatorState y0 = rest_state(cfg.plant);
  return ControlState{
      .y = y0,
      .x = plant.tip(y0),
      .tension = TensionState(cfg.tension.tau_init, cfg.tension.stiffness),
      .jacobian = init_jacobian_fd(y0, cfg.run.init_perturbation, plant),
  };
}

RunResult run_simulation(const SimulationConfig& cfg) {
  validate(cfg);
  const auto started = std::chrono::steady_clock::now();
  const Plant plant(cfg.plant);
  std::mt19937_64 rng(cfg.run.seed);

  ControlState state = initial_state(cfg, plant);
  const std::vector<Waypoint> waypoints = generate_waypoints(cfg.trajectory, state.x);

  RunResult result;
  RunRecord& record = result.record;
  record.waypoint_count = waypoints.size();
  record.hold_steps = cfg.run.hold_steps;
  const std::size_t steps = waypoints.size() + static_cast<std::size_t>(cfg.run.hold_steps);
  record.rows.reserve(steps);

  for (std::size_t k = 0; k < steps; ++k) {
    const Waypoint& ref = reference_at(waypoints, k);
    const StepResult step =
        control_step(state, reference_at(waypoints, k + 1).point, cfg.controller, plant, rng);

    RunRow row;
    row.step = static_cast<int>(k);
    row.reference = ref.point;
    row.tip = state.x;
    row.error = (state.x.vec() - ref.point.vec()).norm();
    row.arclen = ref.arclen;
    row.y = state.y.vec();
    row.dy = step.dy;
    row.tau = state.tension.tau();
    row.t_bb = state.tension.backbone();
    row.dj_norm = step.dj_norm;
    row.status = step.status;
    row.kkt = step.kkt_residual;
    record.rows.push_back(row);

    state = step.next;
  }

  result.summary = summarize(record);
  result.summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (result.summary.infeasible_steps * 10 > result.summary.total_steps) {
    throw SimulationAborted(std::to_string(result.summary.infeasible_steps) + " of " +
                            std::to_string(result.summary.total_steps) +
                            " steps had an unsolvable actuation program");
  }
  return result;
}

}  // namespace tdcr
