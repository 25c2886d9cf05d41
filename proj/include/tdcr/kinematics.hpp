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

#ifndef TDCR_KINEMATICS_HPP_
#define TDCR_KINEMATICS_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tdcr {

/// Actuator displacements in mm: insertion, left tendon, right tendon.
struct ActuatorState {
  double insertion = 0.0;
  double left = 0.0;
  double right = 0.0;

  Eigen::Vector3d vec() const { return {insertion, left, right}; }
  static ActuatorState from(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
};

/// Planar tip coordinate in mm. The straight unloaded pose sits at (0, 0).
struct TipPosition {
  double lateral = 0.0;
  double axial = 0.0;

  Eigen::Vector2d vec() const { return {lateral, axial}; }
  static TipPosition from(const Eigen::Vector2d& v) { return {v(0), v(1)}; }
};

enum class PlantKind { kAffine, kArc };

std::string_view to_string(PlantKind kind);

struct PlantParams {
  double length = 280.0;        // backbone length L, mm
  double lateral_gain = 1.0;    // k_x, mm tip per mm tendon differential
  double axial_gain = 1.0;      // k_y, mm tip per mm mean tendon travel
  double curvature_gain = 2.0 / (280.0 * 280.0);  // gamma, 1/mm per mm
  PlantKind kind = PlantKind::kAffine;
  double noise_sigma = 0.0;     // mm, per axis

  /// Curvature gain that matches the arc plant's small-deflection lateral
  /// sensitivity to the affine plant: 2 k_x / L^2.
  double matched_curvature_gain() const {
    return 2.0 * lateral_gain / (length * length);
  }
};

/// Throws std::invalid_argument if any parameter is out of range.
void validate(const PlantParams& params);

/// Straight pose (0, L, L).
ActuatorState rest_state(const PlantParams& params);

/// Affine surrogate map:
///   lateral = k_x (y_r - y_l)
///   axial   = -k_y ((y_l + y_r)/2 - L) + y_i
TipPosition surrogate_fk(const ActuatorState& y, const PlantParams& params);

/// Point at arc length s along a constant-curvature arc starting at the
/// origin and tangent to the axial direction, unshifted.
TipPosition arc_point(double curvature, double s);

double arc_curvature(const ActuatorState& y, const PlantParams& params);

/// Extended backbone length L + y_i - k_y((y_l + y_r)/2 - L). Equals L at rest
/// and reproduces the surrogate's axial sensitivity at the straight pose.
double arc_length(const ActuatorState& y, const PlantParams& params);

/// Constant-curvature tip, shifted by -L axially so the rest pose is (0, 0).
TipPosition arc_tip(const ActuatorState& y, const PlantParams& params);

/// Backbone samples from base (0, -L) to tip at uniform arc length.
/// n_samples must be at least 2.
std::vector<TipPosition> backbone_polyline(const ActuatorState& y,
                                           const PlantParams& params,
                                           int n_samples);

/// Forward map selected by params.kind.
class Plant {
 public:
  explicit Plant(PlantParams params);

  const PlantParams& params() const { return params_; }
  TipPosition tip(const ActuatorState& y) const;

 private:
  PlantParams params_;
};

/// tip(after) - tip(before) plus zero-mean Gaussian noise of std
/// params.noise_sigma per axis drawn from rng. No draw happens when sigma is 0.
Eigen::Vector2d measure_displacement(const Plant& plant,
                                     const ActuatorState& before,
                                     const ActuatorState& after,
                                     std::mt19937_64& rng);

}  // namespace tdcr

#endif  // TDCR_KINEMATICS_HPP_
