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

#include "tdcr/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tdcr {

DegenerateColumn::DegenerateColumn(int column, double norm)
    : std::runtime_error("jacobian column " + std::to_string(column) +
                         " has norm " + std::to_string(norm)),
      column_(column) {}

JacobianEstimate JacobianEstimate::from_raw(const Matrix23& raw) {
  JacobianEstimate est;
  est.raw = raw;
  for (int i = 0; i < 3; ++i) {
    const double w = raw.col(i).norm();
    if (!(w >= 1e-9)) throw DegenerateColumn(i, w);
    est.column_norms(i) = w;
    est.normalized.col(i) = raw.col(i) / w;
  }
  return est;
}

JacobianEstimate init_jacobian_fd(const ActuatorState& y0, double perturbation,
                                  const Plant& plant) {
  if (!(perturbation > 0.0)) {
    throw std::invalid_argument("init_jacobian_fd: perturbation must be > 0");
  }
  const Eigen::Vector2d base = plant.tip(y0).vec();
  Matrix23 raw;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d y = y0.vec();
    y(i) += perturbation;
    raw.col(i) = (plant.tip(ActuatorState::from(y)).vec() - base) / perturbation;
  }
  return JacobianEstimate::from_raw(raw);
}

Matrix23 minimal_increment(const Matrix23& normalized, const Eigen::Vector3d& v,
                           const Eigen::Vector2d& dx_meas) {
  const Eigen::Vector2d residual = dx_meas - normalized * v;
  return residual * v.transpose() / v.squaredNorm();
}

Matrix23 clip_increment(const Matrix23& increment, double limit) {
  return increment.unaryExpr([limit](double x) { return std::clamp(x, -limit, limit); });
}

JacobianUpdate update_jacobian(const JacobianEstimate& estimate, const Eigen::Vector3d& dy,
                               const Eigen::Vector2d& dx_meas, double smoothing,
                               double increment_limit) {
  JacobianUpdate out;
  out.estimate = estimate;
  const Eigen::Vector3d v = estimate.column_norms.cwiseProduct(dy);
  if (v.norm() < kUpdateDeadBand) return out;

  out.increment = minimal_increment(estimate.normalized, v, dx_meas);
  out.clipped = clip_increment(out.increment, increment_limit);
  out.estimate.normalized = estimate.normalized + smoothing * out.clipped;
  out.estimate.raw = out.estimate.normalized * estimate.scaling();
  out.applied = true;
  return out;
}

}  // namespace tdcr
