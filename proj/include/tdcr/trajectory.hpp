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

#ifndef TDCR_TRAJECTORY_HPP_
#define TDCR_TRAJECTORY_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "tdcr/kinematics.hpp"

namespace tdcr {

enum class PathKind { kCircle, kPentagon, kSquare };
enum class Approach { kNone, kDirect };

std::string_view to_string(PathKind kind);
std::string_view to_string(Approach approach);
std::optional<PathKind> parse_path_kind(std::string_view text);
std::optional<Approach> parse_approach(std::string_view text);

/// Closed reference path. size is the radius for a circle, the circumradius
/// for the pentagon, and the side length for the square. The pentagon has a
/// vertex on the +axial side; the square is axis aligned.
struct TrajectorySpec {
  PathKind kind = PathKind::kCircle;
  double size = 80.0;
  TipPosition center{0.0, 0.0};
  double waypoint_spacing = 0.5;
  Approach approach = Approach::kNone;
};

/// Throws std::invalid_argument on size <= 0 or spacing <= 0 or spacing > s_max.
void validate(const TrajectorySpec& spec, double s_max);

struct Waypoint {
  TipPosition point;
  double arclen = 0.0;  // cumulative, mm
};

double perimeter(const TrajectorySpec& spec);

/// Polygon corners in traversal order from the start chosen for `from`;
/// empty for a circle.
std::vector<TipPosition> polygon_vertices(const TrajectorySpec& spec,
                                          const TipPosition& from = {0.0, 0.0});

/// Start point of the closed loop: the point of the path nearest to `from`.
/// Ties go to the smallest counterclockwise angle about the center measured
/// from the -axial direction.
TipPosition path_start(const TrajectorySpec& spec, const TipPosition& from);

/// Cumulative arc length of each polygon corner along the generated
/// waypoints (including any approach segment), in traversal order.
std::vector<double> vertex_arclengths(const TrajectorySpec& spec, const TipPosition& from);

/// Counterclockwise loop from path_start at arc-length spacing equal to
/// waypoint_spacing, closing exactly at the start point. With a direct
/// approach a straight lead-in from `from` is prepended.
std::vector<Waypoint> generate_waypoints(const TrajectorySpec& spec,
                                         const TipPosition& from = {0.0, 0.0});

/// Waypoint min(k, last).
const Waypoint& reference_at(const std::vector<Waypoint>& waypoints, std::size_t k);

}  // namespace tdcr

#endif  // TDCR_TRAJECTORY_HPP_
