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

#include "tdcr/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace tdcr {

std::string_view to_string(PlantKind kind) {
  return kind == PlantKind::kArc ? "arc" : "affine";
}

void validate(const PlantParams& p) {
  if (!(p.length > 0.0)) throw std::invalid_argument("plant.L must be > 0");
  if (!(p.lateral_gain > 0.0)) throw std::invalid_argument("plant.k_x must be > 0");
  if (!(p.axial_gain > 0.0)) throw std::invalid_argument("plant.k_y must be > 0");
  if (!(p.curvature_gain > 0.0)) throw std::invalid_argument("plant.gamma must be > 0");
  if (!(p.noise_sigma >= 0.0)) throw std::invalid_argument("plant.noise_sigma must be >= 0");
}

ActuatorState rest_state(const PlantParams& p) {
  return {0.0, p.length, p.length};
}

TipPosition surrogate_fk(const ActuatorState& y, const PlantParams& p) {
  return {p.lateral_gain * (y.right - y.left),
          -p.axial_gain * (0.5 * (y.left + y.right) - p.length) + y.insertion};
}

TipPosition arc_point(double curvature, double s) {
  const double ks = curvature * s;
  if (std::abs(ks) < 1e-6) {
    // Taylor expansions of (1 - cos ks)/k and sin(ks)/k.
    const double k2 = curvature * curvature;
    const double s2 = s * s;
    return {curvature * s2 / 2.0 - k2 * curvature * s2 * s2 / 24.0,
            s - k2 * s2 * s / 6.0 + k2 * k2 * s2 * s2 * s / 120.0};
  }
  // 1 - cos x = 2 sin^2(x/2) avoids cancellation just above the switch.
  const double half = std::sin(0.5 * ks);
  return {2.0 * half * half / curvature, std::sin(ks) / curvature};
}

double arc_curvature(const ActuatorState& y, const PlantParams& p) {
  return p.curvature_gain * (y.right - y.left);
}

double arc_length(const ActuatorState& y, const PlantParams& p) {
  return p.length + y.insertion - p.axial_gain * (0.5 * (y.left + y.right) - p.length);
}

TipPosition arc_tip(const ActuatorState& y, const PlantParams& p) {
  TipPosition tip = arc_point(arc_curvature(y, p), arc_length(y, p));
  tip.axial -= p.length;
  return tip;
}

std::vector<TipPosition> backbone_polyline(const ActuatorState& y,
                                           const PlantParams& p, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("backbone_polyline: n_samples < 2");
  const double kappa = arc_curvature(y, p);
  const double ell = arc_length(y, p);
  std::vector<TipPosition> points;
  points.reserve(static_cast<std::size_t>(n_samples));
  for (int j = 0; j < n_samples; ++j) {
    const double s = j == n_samples - 1 ? ell : ell * j / (n_samples - 1);
    TipPosition q = arc_point(kappa, s);
    q.axial -= p.length;
    points.push_back(q);
  }
  return points;
}

Plant::Plant(PlantParams params) : params_(params) { validate(params_); }

TipPosition Plant::tip(const ActuatorState& y) const {
  return params_.kind == PlantKind::kArc ? arc_tip(y, params_) : surrogate_fk(y, params_);
}

Eigen::Vector2d measure_displacement(const Plant& plant, const ActuatorState& before,
                                     const ActuatorState& after, std::mt19937_64& rng) {
  Eigen::Vector2d dx = plant.tip(after).vec() - plant.tip(before).vec();
  const double sigma = plant.params().noise_sigma;
  if (sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma);
    dx(0) += noise(rng);
    dx(1) += noise(rng);
  }
  return dx;
}

}  // namespace tdcr
