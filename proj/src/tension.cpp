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

#include "tdcr/tension.hpp"

#include <string>

namespace tdcr {

SlackViolation::SlackViolation(int tendon, double tension)
    : std::runtime_error("tendon " + std::to_string(tendon) + " went slack at " +
                         std::to_string(tension) + " N"),
      tendon_(tendon) {}

TensionState::TensionState(const Eigen::Vector3d& tau, const Eigen::Vector3d& stiffness)
    : tau_(tau), stiffness_(stiffness) {
  if (!tau.allFinite() || !stiffness.allFinite()) {
    throw std::invalid_argument("tension: non-finite state");
  }
  if ((stiffness.array() <= 0.0).any()) {
    throw std::invalid_argument("tension: stiffness entries must be > 0");
  }
}

TensionState propagate_tension(const TensionState& state, const Eigen::Vector3d& dy,
                               double tau_min) {
  const Eigen::Vector3d next = state.tau() + state.stiffness_diagonal().cwiseProduct(dy);
  for (int j = 0; j < 3; ++j) {
    if (next(j) < tau_min - 1e-9) throw SlackViolation(j, next(j));
  }
  return TensionState(next, state.stiffness_diagonal());
}

}  // namespace tdcr
