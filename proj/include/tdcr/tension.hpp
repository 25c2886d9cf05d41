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

#ifndef TDCR_TENSION_HPP_
#define TDCR_TENSION_HPP_

#include <Eigen/Dense>

#include <stdexcept>

namespace tdcr {

/// A tendon went below the slack bound after an update. The actuation
/// program forbids this, so seeing it means a constraint was not honored.
class SlackViolation : public std::runtime_error {
 public:
  SlackViolation(int tendon, double tension);
  int tendon() const { return tendon_; }

 private:
  int tendon_;
};

/// Mean of left and right tendon tension; insertion tension is excluded.
inline double backbone_tension(const Eigen::Vector3d& tau) {
  return 0.5 * (tau(1) + tau(2));
}

/// Tensions (N) of insertion, left, and right actuators with the diagonal
/// stiffness (N/mm) that maps displacement increments to tension changes.
class TensionState {
 public:
  TensionState(const Eigen::Vector3d& tau, const Eigen::Vector3d& stiffness);

  const Eigen::Vector3d& tau() const { return tau_; }
  const Eigen::Vector3d& stiffness_diagonal() const { return stiffness_; }
  Eigen::Matrix3d stiffness() const { return stiffness_.asDiagonal(); }
  double backbone() const { return backbone_tension(tau_); }

 private:
  Eigen::Vector3d tau_;
  Eigen::Vector3d stiffness_;
};

/// tau+ = tau + K dy. Throws SlackViolation when any tau+ < tau_min - 1e-9.
TensionState propagate_tension(const TensionState& state, const Eigen::Vector3d& dy,
                               double tau_min);

}  // namespace tdcr

#endif  // TDCR_TENSION_HPP_
