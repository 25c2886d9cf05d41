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

#ifndef TDCR_CONTROLLER_HPP_
#define TDCR_CONTROLLER_HPP_

#include <Eigen/Dense>

#include <random>

#include "tdcr/jacobian.hpp"
#include "tdcr/kinematics.hpp"
#include "tdcr/qp.hpp"
#include "tdcr/tension.hpp"

namespace tdcr {

struct ControllerConfig {
  double lambda_x = 1.0;   // tracking weight
  double lambda_t = 1e-3;  // tension weight
  double lambda_y = 1e-2;  // actuator smoothness weight
  double s_max = 1.0;      // mm
  double tau_min = 0.3;    // N
  double tau_max = 3.0;    // N
  double dy_min = -2.0;    // mm per step
  double dy_max = 2.0;     // mm per step
  Eigen::Vector3d y_min{0.0, 230.0, 230.0};
  Eigen::Vector3d y_max{100.0, 330.0, 330.0};
  double alpha_j = 0.15;
  double dj_max = 0.035;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const ControllerConfig& cfg);

struct ControlState {
  ActuatorState y;
  TipPosition x;
  TensionState tension;
  JacobianEstimate jacobian;
  Eigen::Vector3d dy_prev = Eigen::Vector3d::Zero();
  int step_index = 0;
};

/// min(1, s_max / |d|) d with d = target - now; zero when d is zero.
Eigen::Vector2d clip_step(const TipPosition& now, const TipPosition& target, double s_max);

/// Actuation program in dy:
///   lambda_x |J dy - dx|^2 + lambda_t |tau + K dy|^2 + lambda_y |dy - dy_prev|^2
/// with rows tau + K dy >= tau_min and -(tau + K dy) >= -tau_max, and box
/// bounds combining [dy_min, dy_max] with y + dy in [y_min, y_max].
QpProblem assemble_actuation_qp(const ControlState& state, const Eigen::Vector2d& dx,
                                const ControllerConfig& cfg);

struct StepResult {
  ControlState next;
  Eigen::Vector2d requested = Eigen::Vector2d::Zero();  // clipped dx
  Eigen::Vector3d dy = Eigen::Vector3d::Zero();
  QpStatus status = QpStatus::kOptimal;
  double kkt_residual = 0.0;
  double dj_norm = 0.0;  // Frobenius norm of the clipped Jacobian increment
  bool fallback = false; // program not solved; actuators held
};

/// One cycle: clip, solve, apply dy, read the plant, update tension and the
/// Jacobian. A program that is not solved to optimality holds the actuators
/// (dy = 0) and sets fallback.
StepResult control_step(const ControlState& state, const TipPosition& target,
                        const ControllerConfig& cfg, const Plant& plant,
                        std::mt19937_64& rng);

}  // namespace tdcr

#endif  // TDCR_CONTROLLER_HPP_
