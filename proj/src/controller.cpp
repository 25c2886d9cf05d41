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

#include "tdcr/controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace tdcr {

void validate(const ControllerConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(c.lambda_x >= 0.0, "controller.lambda_x must be >= 0");
  require(c.lambda_t >= 0.0, "controller.lambda_t must be >= 0");
  require(c.lambda_y > 0.0, "controller.lambda_y must be > 0");
  require(c.s_max > 0.0, "controller.s_max must be > 0");
  require(c.tau_min < c.tau_max, "controller.tau_min must be < controller.tau_max");
  require(c.dy_min < 0.0 && 0.0 < c.dy_max, "controller.dy_min < 0 < controller.dy_max required");
  require((c.y_min.array() < c.y_max.array()).all(), "controller.y_min must be < controller.y_max");
  require(c.alpha_j >= 0.0 && c.alpha_j <= 1.0, "controller.alpha_J must be in [0, 1]");
  require(c.dj_max > 0.0, "controller.dJ_max must be > 0");
}

Eigen::Vector2d clip_step(const TipPosition& now, const TipPosition& target, double s_max) {
  const Eigen::Vector2d desired = target.vec() - now.vec();
  const double norm = desired.norm();
  if (norm <= s_max) return desired;
  return (s_max / norm) * desired;
}

QpProblem assemble_actuation_qp(const ControlState& state, const Eigen::Vector2d& dx,
                                const ControllerConfig& cfg) {
  const Matrix23& J = state.jacobian.raw;
  const Eigen::Matrix3d K = state.tension.stiffness();
  const Eigen::Vector3d& tau = state.tension.tau();
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();

  QpProblem p = QpProblem::with_size(3, 6);
  const Eigen::Matrix3d H =
      2.0 * (cfg.lambda_x * J.transpose() * J + cfg.lambda_t * K.transpose() * K + cfg.lambda_y * I);
  p.H = 0.5 * (H + H.transpose());
  p.g = -2.0 * (cfg.lambda_x * J.transpose() * dx - cfg.lambda_t * K.transpose() * tau +
                cfg.lambda_y * state.dy_prev);

  p.A.topRows(3) = K;
  p.b.head(3) = Eigen::Vector3d::Constant(cfg.tau_min) - tau;
  p.A.bottomRows(3) = -K;
  p.b.tail(3) = tau - Eigen::Vector3d::Constant(cfg.tau_max);

  const Eigen::Vector3d y = state.y.vec();
  for (int i = 0; i < 3; ++i) {
    p.lower(i) = std::max(cfg.dy_min, cfg.y_min(i) - y(i));
    p.upper(i) = std::min(cfg.dy_max, cfg.y_max(i) - y(i));
  }
  return p;
}

StepResult control_step(const ControlState& state, const TipPosition& target,
                        const ControllerConfig& cfg, const Plant& plant,
                        std::mt19937_64& rng) {
  StepResult out{.next = state};
  out.requested = clip_step(state.x, target, cfg.s_max);

  const QpSolution sol = solve_qp(assemble_actuation_qp(state, out.requested, cfg));
  out.status = sol.status;
  out.kkt_residual = sol.kkt_residual;
  if (sol.status != QpStatus::kOptimal) {
    out.fallback = true;
    out.next.dy_prev.setZero();
    out.next.step_index = state.step_index + 1;
    return out;
  }
  out.dy = sol.z;

  ControlState& next = out.next;
  next.y = ActuatorState::from(state.y.vec() + out.dy);
  next.x = plant.tip(next.y);
  const Eigen::Vector2d measured = measure_displacement(plant, state.y, next.y, rng);
  next.tension = propagate_tension(state.tension, out.dy, cfg.tau_min);
  const JacobianUpdate update =
      update_jacobian(state.jacobian, out.dy, measured, cfg.alpha_j, cfg.dj_max);
  next.jacobian = update.estimate;
  out.dj_norm = update.clipped.norm();
  next.dy_prev = out.dy;
  next.step_index = state.step_index + 1;
  return out;
}

}  // namespace tdcr
