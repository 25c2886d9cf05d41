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

#ifndef TDCR_SUITE_HPP_
#define TDCR_SUITE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdcr/simulator.hpp"

namespace tdcr {

/// Thresholds checked by the experiment suite.
namespace thresholds {
inline constexpr double kCircleMeanError = 3.0;     // mm
inline constexpr double kCircleMaxError = 4.0;      // mm
inline constexpr double kSquareMidEdgeError = 0.5;  // mm
inline constexpr double kPentagonEdgeMinimum = 3.0; // mm
inline constexpr double kVertexWindow = 5.0;        // mm of arc length
inline constexpr double kMaxRunSeconds = 5.0;
inline constexpr double kTensionSlack = 1e-9;       // N
}  // namespace thresholds

/// Position of a row along the closed loop.
struct EdgePosition {
  int edge = -1;          // -1 before the loop starts (approach segment)
  double fraction = 0.0;  // 0 at the edge's first corner, 1 at its last
  double loop_arclen = 0.0;
};

/// Edge 0 runs from the first corner after the start to the next one; the
/// last edge wraps through the start point.
EdgePosition locate_on_polygon(const TrajectorySpec& spec, const TipPosition& from,
                               double arclen);

struct EdgeError {
  int edge = 0;
  double mean = 0.0;
  int samples = 0;
};

/// Mean steady-state error per edge over rows whose reference lies in the
/// middle half of that edge.
std::vector<EdgeError> mid_edge_errors(const RunRecord& record, const TrajectorySpec& spec,
                                       const TipPosition& from);

struct VertexPeak {
  double arclen = 0.0;  // loop arc length of the corner
  double peak = 0.0;    // max error within the vertex window
  double before_min = 0.0;
  double after_min = 0.0;
};

struct VertexProfile {
  std::vector<EdgeError> edge_minima;  // `mean` holds the minimum here
  std::vector<VertexPeak> vertices;    // corners fully inside the steady window
};

/// Steady-state error minima along each edge (outside the corner windows)
/// and the error peak around each corner.
VertexProfile analyze_vertices(const RunRecord& record, const TrajectorySpec& spec,
                               const TipPosition& from,
                               double window = thresholds::kVertexWindow);

struct CriterionResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
  nlohmann::json values;
};

struct SuiteRun {
  std::string name;
  SimulationConfig config;
  std::optional<RunResult> result;
  std::string error;  // set when the run threw
};

struct SuiteReport {
  std::vector<SuiteRun> runs;
  std::vector<CriterionResult> criteria;

  bool passed() const;
  const SuiteRun* find(const std::string& name) const;
};

/// Circle, pentagon, and square on the affine and arc plants, plus the arc
/// circle with adaptation disabled, all from `base`. Runs execute
/// concurrently.
SuiteReport run_suite(const SimulationConfig& base);

nlohmann::json suite_json(const SuiteReport& report);

/// Per-run outputs under dir/<run name>/ and dir/suite_summary.json.
void write_suite_outputs(const std::filesystem::path& dir, const SuiteReport& report);

}  // namespace tdcr

#endif  // TDCR_SUITE_HPP_
