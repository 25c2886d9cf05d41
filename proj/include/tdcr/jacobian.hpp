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

#ifndef TDCR_JACOBIAN_HPP_
#define TDCR_JACOBIAN_HPP_

#include <Eigen/Dense>

#include <stdexcept>

#include "tdcr/kinematics.hpp"

namespace tdcr {

using Matrix23 = Eigen::Matrix<double, 2, 3>;

/// A Jacobian column had (near) zero norm, so the plant does not respond to
/// that actuator.
class DegenerateColumn : public std::runtime_error {
 public:
  DegenerateColumn(int column, double norm);
  int column() const { return column_; }

 private:
  int column_;
};

/// Empirical task Jacobian together with its column-norm scaling.
///
/// raw = normalized * diag(column_norms). The scaling is fixed when the
/// estimate is created from a raw matrix; online updates act on the
/// normalized form and leave column_norms untouched.
struct JacobianEstimate {
  Matrix23 raw = Matrix23::Zero();
  Eigen::Vector3d column_norms = Eigen::Vector3d::Ones();
  Matrix23 normalized = Matrix23::Zero();

  Eigen::Matrix3d scaling() const { return column_norms.asDiagonal(); }

  /// Normalizes each column of raw by its Euclidean norm. Throws
  /// DegenerateColumn if a norm is below 1e-9.
  static JacobianEstimate from_raw(const Matrix23& raw);
};

/// Columns are forward differences (tip(y0 + h e_i) - tip(y0)) / h.
JacobianEstimate init_jacobian_fd(const ActuatorState& y0, double perturbation,
                                  const Plant& plant);

/// Minimum-Frobenius-norm dJ with dx_meas = (J_hat + dJ) v:
/// dJ = (dx_meas - J_hat v) v' / |v|^2.
Matrix23 minimal_increment(const Matrix23& normalized, const Eigen::Vector3d& v,
                           const Eigen::Vector2d& dx_meas);

/// Entrywise sign(dJ) * min(|dJ|, limit).
Matrix23 clip_increment(const Matrix23& increment, double limit);

/// Below this |W dy| (mm) an update is skipped.
inline constexpr double kUpdateDeadBand = 1e-6;

struct JacobianUpdate {
  JacobianEstimate estimate;
  Matrix23 increment = Matrix23::Zero();  // unclipped minimal increment
  Matrix23 clipped = Matrix23::Zero();
  bool applied = false;  // false when the motion fell inside the dead band
};

/// One online correction: v = W dy, minimal increment, clip, then
/// J_hat+ = J_hat + smoothing * clipped and raw = J_hat+ W.
JacobianUpdate update_jacobian(const JacobianEstimate& estimate,
                               const Eigen::Vector3d& dy,
                               const Eigen::Vector2d& dx_meas, double smoothing,
                               double increment_limit);

}  // namespace tdcr

#endif  // TDCR_JACOBIAN_HPP_
