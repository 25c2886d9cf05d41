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

#include "tdcr/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <stdexcept>

namespace tdcr {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieTol = 1e-9;

int corner_count(PathKind kind) {
  switch (kind) {
    case PathKind::kPentagon: return 5;
    case PathKind::kSquare: return 4;
    case PathKind::kCircle: return 0;
  }
  return 0;
}

double circumradius(const TrajectorySpec& spec) {
  switch (spec.kind) {
    case PathKind::kSquare: return spec.size / std::sqrt(2.0);
    default: return spec.size;
  }
}

// Corner angle of vertex 0; further vertices follow counterclockwise.
double first_corner_angle(PathKind kind) {
  return kind == PathKind::kPentagon ? kPi / 2.0 : kPi / 4.0;
}

// Angle key used to break ties between equally near start candidates.
double tie_key(const TipPosition& p, const TipPosition& center) {
  const double a = std::atan2(p.axial - center.axial, p.lateral - center.lateral);
  return std::fmod(a + kPi / 2.0 + 4.0 * kPi, 2.0 * kPi);
}

double wrap(double s, double period) {
  double r = std::fmod(s, period);
  if (r < 0.0) r += period;
  return r;
}

std::vector<TipPosition> corners(const TrajectorySpec& spec) {
  const int n = corner_count(spec.kind);
  const double r = circumradius(spec);
  const double a0 = first_corner_angle(spec.kind);
  std::vector<TipPosition> v;
  for (int j = 0; j < n; ++j) {
    const double a = a0 + 2.0 * kPi * j / n;
    v.push_back({spec.center.lateral + r * std::cos(a), spec.center.axial + r * std::sin(a)});
  }
  return v;
}

// Point at arc length s from the path's own origin: the -axial point for a
// circle, corner 0 for a polygon.
TipPosition point_at(const TrajectorySpec& spec, const std::vector<TipPosition>& v, double s) {
  if (spec.kind == PathKind::kCircle) {
    const double a = -kPi / 2.0 + s / spec.size;
    return {spec.center.lateral + spec.size * std::cos(a),
            spec.center.axial + spec.size * std::sin(a)};
  }
  const int n = static_cast<int>(v.size());
  const double side = (v[1].vec() - v[0].vec()).norm();
  s = wrap(s, side * n);
  const int edge = std::min(n - 1, static_cast<int>(std::floor(s / side)));
  const double t = (s - edge * side) / side;
  const Eigen::Vector2d a = v[edge].vec();
  const Eigen::Vector2d b = v[(edge + 1) % n].vec();
  return TipPosition::from(a + t * (b - a));
}

// Arc-length parameter (from the path origin) of the start point.
double start_parameter(const TrajectorySpec& spec, const std::vector<TipPosition>& v,
                       const TipPosition& from) {
  const double period = perimeter(spec);
  if (spec.kind == PathKind::kCircle) {
    const Eigen::Vector2d d = from.vec() - spec.center.vec();
    if (d.norm() < 1e-12) return 0.0;
    const double a = std::atan2(d(1), d(0));
    return wrap((a + kPi / 2.0) * spec.size, period);
  }
  const int n = static_cast<int>(v.size());
  const double side = (v[1].vec() - v[0].vec()).norm();
  double best_dist = std::numeric_limits<double>::infinity();
  double best_key = 0.0;
  double best_s = 0.0;
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector2d a = v[j].vec();
    const Eigen::Vector2d b = v[(j + 1) % n].vec();
    const double t = std::clamp((from.vec() - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
    const Eigen::Vector2d q = a + t * (b - a);
    const double dist = (from.vec() - q).norm();
    const double key = tie_key(TipPosition::from(q), spec.center);
    const bool nearer = dist < best_dist - kTieTol;
    const bool tied = std::abs(dist - best_dist) <= kTieTol && key < best_key;
    if (nearer || tied) {
      best_dist = dist;
      best_key = key;
      best_s = j * side + t * side;
    }
  }
  return wrap(best_s, period);
}

double approach_length(const TrajectorySpec& spec, const TipPosition& from) {
  if (spec.approach != Approach::kDirect) return 0.0;
  return (path_start(spec, from).vec() - from.vec()).norm();
}

}  // namespace

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::kCircle: return "circle";
    case PathKind::kPentagon: return "pentagon";
    case PathKind::kSquare: return "square";
  }
  return "unknown";
}

std::string_view to_string(Approach approach) {
  return approach == Approach::kDirect ? "direct" : "none";
}

std::optional<PathKind> parse_path_kind(std::string_view text) {
  if (text == "circle") return PathKind::kCircle;
  if (text == "pentagon") return PathKind::kPentagon;
  if (text == "square") return PathKind::kSquare;
  return std::nullopt;
}

std::optional<Approach> parse_approach(std::string_view text) {
  if (text == "none") return Approach::kNone;
  if (text == "direct") return Approach::kDirect;
  return std::nullopt;
}

void validate(const TrajectorySpec& spec, double s_max) {
  if (!(spec.size > 0.0)) throw std::invalid_argument("trajectory.size must be > 0");
  if (!(spec.waypoint_spacing > 0.0)) {
    throw std::invalid_argument("trajectory.spacing must be > 0");
  }
  if (spec.waypoint_spacing > s_max) {
    throw std::invalid_argument("trajectory.spacing must be <= controller.s_max");
  }
  if (!std::isfinite(spec.center.lateral) || !std::isfinite(spec.center.axial)) {
    throw std::invalid_argument("trajectory.center must be finite");
  }
}

double perimeter(const TrajectorySpec& spec) {
  if (spec.kind == PathKind::kCircle) return 2.0 * kPi * spec.size;
  const int n = corner_count(spec.kind);
  return n * 2.0 * circumradius(spec) * std::sin(kPi / n);
}

std::vector<TipPosition> polygon_vertices(const TrajectorySpec& spec, const TipPosition& from) {
  const std::vector<TipPosition> v = corners(spec);
  if (v.empty()) return v;
  const double period = perimeter(spec);
  const double side = period / static_cast<double>(v.size());
  const double s0 = start_parameter(spec, v, from);
  std::vector<std::pair<double, TipPosition>> keyed;
  for (std::size_t j = 0; j < v.size(); ++j) {
    double s = wrap(static_cast<double>(j) * side - s0, period);
    if (s < kTieTol) s = period;
    keyed.emplace_back(s, v[j]);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<TipPosition> out;
  for (const auto& [s, p] : keyed) out.push_back(p);
  return out;
}

TipPosition path_start(const TrajectorySpec& spec, const TipPosition& from) {
  const std::vector<TipPosition> v = corners(spec);
  return point_at(spec, v, start_parameter(spec, v, from));
}

std::vector<double> vertex_arclengths(const TrajectorySpec& spec, const TipPosition& from) {
  const std::vector<TipPosition> v = corners(spec);
  std::vector<double> out;
  if (v.empty()) return out;
  const double period = perimeter(spec);
  const double side = period / static_cast<double>(v.size());
  const double s0 = start_parameter(spec, v, from);
  const double lead = approach_length(spec, from);
  for (std::size_t j = 0; j < v.size(); ++j) {
    double s = wrap(static_cast<double>(j) * side - s0, period);
    if (s < kTieTol) s = period;
    out.push_back(lead + s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Waypoint> generate_waypoints(const TrajectorySpec& spec, const TipPosition& from) {
  const std::vector<TipPosition> v = corners(spec);
  const double period = perimeter(spec);
  const double s0 = start_parameter(spec, v, from);
  const double h = spec.waypoint_spacing;
  std::vector<Waypoint> out;

  const TipPosition start = point_at(spec, v, s0);
  const double lead = approach_length(spec, from);
  if (lead > 0.0) {
    const Eigen::Vector2d dir = (start.vec() - from.vec()) / lead;
    for (int k = 0; k * h < lead - 1e-9 * lead; ++k) {
      out.push_back({TipPosition::from(from.vec() + (k * h) * dir), k * h});
    }
  }

  for (int k = 0; k * h < period - 1e-9 * period; ++k) {
    const double s = k * h;
    out.push_back({point_at(spec, v, s0 + s), lead + s});
  }
  out.push_back({start, lead + period});
  return out;
}

const Waypoint& reference_at(const std::vector<Waypoint>& waypoints, std::size_t k) {
  if (waypoints.empty()) throw std::invalid_argument("reference_at: no waypoints");
  return waypoints[std::min(k, waypoints.size() - 1)];
}

}  // namespace tdcr
