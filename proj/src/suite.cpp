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

#include "tdcr/suite.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "tdcr/report.hpp"

namespace tdcr {
namespace {

double approach_lead(const TrajectorySpec& spec, const TipPosition& from) {
  if (spec.approach != Approach::kDirect) return 0.0;
  return (path_start(spec, from).vec() - from.vec()).norm();
}

// Corner positions in loop arc length, ascending, within (0, P].
std::vector<double> loop_corners(const TrajectorySpec& spec, const TipPosition& from) {
  std::vector<double> v = vertex_arclengths(spec, from);
  const double lead = approach_lead(spec, from);
  for (double& s : v) s -= lead;
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

TipPosition run_origin(const SimulationConfig& cfg) {
  return surrogate_fk(rest_state(cfg.plant), cfg.plant);
}

CriterionResult missing_run(std::string id, std::string name, const std::string& run,
                            const SuiteReport& report) {
  CriterionResult c{std::move(id), std::move(name), false, "", {}};
  const SuiteRun* r = report.find(run);
  c.detail = run + " did not complete" + (r && !r->error.empty() ? ": " + r->error : "");
  return c;
}

CriterionResult check_circle(const SuiteReport& report) {
  const SuiteRun* run = report.find("affine_circle");
  if (!run || !run->result) return missing_run("1", "circle tracking", "affine_circle", report);
  const RunSummary& s = run->result->summary;
  CriterionResult c{"1", "circle tracking", false, "", {}};
  c.values = {{"steady_mean_error", s.steady_mean_error},
              {"steady_max_error", s.steady_max_error},
              {"wall_time_s", s.wall_time_s}};
  c.passed = s.steady_mean_error <= thresholds::kCircleMeanError &&
             s.steady_max_error <= thresholds::kCircleMaxError &&
             s.wall_time_s < thresholds::kMaxRunSeconds;
  c.detail = "steady mean " + fmt(s.steady_mean_error) + " mm (<= 3), max " +
             fmt(s.steady_max_error) + " mm (<= 4), " + fmt(s.wall_time_s) + " s (< 5)";
  return c;
}

CriterionResult check_square(const SuiteReport& report) {
  const SuiteRun* run = report.find("affine_square");
  if (!run || !run->result) return missing_run("2", "square mid-edge precision", "affine_square", report);
  const auto edges = mid_edge_errors(run->result->record, run->config.trajectory,
                                     run_origin(run->config));
  CriterionResult c{"2", "square mid-edge precision", !edges.empty(), "", {}};
  double worst = 0.0;
  nlohmann::json per_edge = nlohmann::json::array();
  for (const EdgeError& e : edges) {
    worst = std::max(worst, e.mean);
    per_edge.push_back({{"edge", e.edge}, {"mean_error", e.mean}, {"samples", e.samples}});
    if (!(e.mean <= thresholds::kSquareMidEdgeError)) c.passed = false;
  }
  const double wall = run->result->summary.wall_time_s;
  if (!(wall < thresholds::kMaxRunSeconds)) c.passed = false;
  c.values = {{"edges", per_edge}, {"worst_mean_error", worst}, {"wall_time_s", wall}};
  c.detail = "worst mid-edge mean " + fmt(worst) + " mm over " + std::to_string(edges.size()) +
             " edges (<= 0.5), " + fmt(wall) + " s (< 5)";
  return c;
}

CriterionResult check_pentagon(const SuiteReport& report) {
  const SuiteRun* run = report.find("affine_pentagon");
  if (!run || !run->result) return missing_run("3", "pentagon vertex behavior", "affine_pentagon", report);
  const VertexProfile profile = analyze_vertices(run->result->record, run->config.trajectory,
                                                 run_origin(run->config));
  CriterionResult c{"3", "pentagon vertex behavior", true, "", {}};
  double worst_min = 0.0;
  nlohmann::json minima = nlohmann::json::array();
  for (const EdgeError& e : profile.edge_minima) {
    worst_min = std::max(worst_min, e.mean);
    minima.push_back({{"edge", e.edge}, {"min_error", e.mean}});
    if (!(e.mean <= thresholds::kPentagonEdgeMinimum)) c.passed = false;
  }
  nlohmann::json peaks = nlohmann::json::array();
  int failed_vertices = 0;
  for (const VertexPeak& v : profile.vertices) {
    peaks.push_back({{"arclen", v.arclen}, {"peak", v.peak}, {"before_min", v.before_min},
                     {"after_min", v.after_min}});
    if (!(v.peak > v.before_min && v.peak > v.after_min)) ++failed_vertices;
  }
  if (profile.edge_minima.empty() || profile.vertices.empty() || failed_vertices > 0) {
    c.passed = false;
  }
  c.values = {{"edge_minima", minima}, {"vertices", peaks}};
  c.detail = "largest edge minimum " + fmt(worst_min) + " mm (<= 3); " +
             std::to_string(profile.vertices.size() - failed_vertices) + "/" +
             std::to_string(profile.vertices.size()) + " corner peaks above adjacent minima";
  return c;
}

CriterionResult check_tension(const SuiteReport& report) {
  CriterionResult c{"4", "tension feasibility", true, "", {}};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double bb_lo = lo, bb_hi = hi;
  int runs = 0;
  std::string problems;
  for (const SuiteRun& run : report.runs) {
    if (run.config.controller.alpha_j != report.runs.front().config.controller.alpha_j) continue;
    if (!run.result) {
      c.passed = false;
      problems += " " + run.name + " failed (" + run.error + ");";
      continue;
    }
    ++runs;
    const double tmin = run.config.controller.tau_min - thresholds::kTensionSlack;
    const double tmax = run.config.controller.tau_max + thresholds::kTensionSlack;
    for (const RunRow& row : run.result->record.rows) {
      lo = std::min(lo, row.tau.minCoeff());
      hi = std::max(hi, row.tau.maxCoeff());
      bb_lo = std::min(bb_lo, row.t_bb);
      bb_hi = std::max(bb_hi, row.t_bb);
      if (row.tau.minCoeff() < tmin || row.tau.maxCoeff() > tmax || row.t_bb < tmin ||
          row.t_bb > tmax) {
        c.passed = false;
      }
    }
  }
  c.values = {{"runs", runs}, {"tau_min", lo}, {"tau_max", hi}, {"t_bb_min", bb_lo},
              {"t_bb_max", bb_hi}};
  c.detail = std::to_string(runs) + " runs, tensions in [" + fmt(lo) + ", " + fmt(hi) +
             "] N, T_bb in [" + fmt(bb_lo) + ", " + fmt(bb_hi) + "] N" + problems;
  return c;
}

CriterionResult check_adaptation(const SuiteReport& report) {
  const SuiteRun* adapted = report.find("arc_circle");
  const SuiteRun* frozen = report.find("arc_circle_no_adaptation");
  if (!adapted || !adapted->result) return missing_run("11", "adaptation necessity", "arc_circle", report);
  if (!frozen || !frozen->result) {
    return missing_run("11", "adaptation necessity", "arc_circle_no_adaptation", report);
  }
  const double a = adapted->result->summary.steady_mean_error;
  const double f = frozen->result->summary.steady_mean_error;
  CriterionResult c{"11", "adaptation necessity", f > a, "", {}};
  c.values = {{"adapted_mean_error", a}, {"frozen_mean_error", f}};
  c.detail = "arc circle steady mean " + fmt(a) + " mm adapted vs " + fmt(f) + " mm frozen";
  return c;
}

}  // namespace

EdgePosition locate_on_polygon(const TrajectorySpec& spec, const TipPosition& from,
                               double arclen) {
  EdgePosition pos;
  const std::vector<double> v = loop_corners(spec, from);
  const double u = arclen - approach_lead(spec, from);
  pos.loop_arclen = u;
  if (v.empty() || u < 0.0) return pos;
  const double period = perimeter(spec);
  const double side = period / static_cast<double>(v.size());
  const int n = static_cast<int>(v.size());
  if (u >= v.back()) {
    pos.edge = n - 1;
    pos.fraction = (u - v.back()) / side;
  } else if (u < v.front()) {
    pos.edge = n - 1;
    pos.fraction = (u + period - v.back()) / side;
  } else {
    for (int j = 0; j + 1 < n; ++j) {
      if (u >= v[j] && u < v[j + 1]) {
        pos.edge = j;
        pos.fraction = (u - v[j]) / side;
        break;
      }
    }
  }
  return pos;
}

std::vector<EdgeError> mid_edge_errors(const RunRecord& record, const TrajectorySpec& spec,
                                       const TipPosition& from) {
  std::map<int, std::pair<double, int>> acc;
  for (std::size_t k = record.steady_start(); k < record.rows.size(); ++k) {
    const EdgePosition pos = locate_on_polygon(spec, from, record.rows[k].arclen);
    if (pos.edge < 0 || pos.fraction < 0.25 || pos.fraction > 0.75) continue;
    auto& [sum, count] = acc[pos.edge];
    sum += record.rows[k].error;
    ++count;
  }
  std::vector<EdgeError> out;
  for (const auto& [edge, sc] : acc) {
    out.push_back({edge, sc.first / sc.second, sc.second});
  }
  return out;
}

VertexProfile analyze_vertices(const RunRecord& record, const TrajectorySpec& spec,
                               const TipPosition& from, double window) {
  VertexProfile profile;
  const std::vector<double> corners = loop_corners(spec, from);
  if (corners.empty() || record.rows.empty()) return profile;
  const double period = perimeter(spec);
  const double lead = approach_lead(spec, from);
  const int n = static_cast<int>(corners.size());
  auto corner_distance = [&](double u, double c) {
    const double d = std::abs(u - c);
    return std::min(d, period - d);
  };

  const std::size_t start = std::min(record.steady_start(), record.rows.size() - 1);
  const double steady_from = record.rows[start].arclen - lead;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> edge_min(static_cast<std::size_t>(n), kInf);
  std::vector<double> peak(static_cast<std::size_t>(n), 0.0);
  for (std::size_t k = start; k < record.rows.size(); ++k) {
    const RunRow& row = record.rows[k];
    const double u = row.arclen - lead;
    if (u < 0.0) continue;
    bool near_corner = false;
    for (int j = 0; j < n; ++j) {
      if (corner_distance(u, corners[j]) <= window) {
        near_corner = true;
        peak[j] = std::max(peak[j], row.error);
      }
    }
    if (!near_corner) {
      const EdgePosition pos = locate_on_polygon(spec, from, row.arclen);
      edge_min[pos.edge] = std::min(edge_min[pos.edge], row.error);
    }
  }

  for (int j = 0; j < n; ++j) {
    if (edge_min[j] < kInf) profile.edge_minima.push_back({j, edge_min[j], 0});
  }
  for (int j = 0; j < n; ++j) {
    const double c = corners[j];
    if (c - window < steady_from || c + window > period) continue;
    const int before = j == 0 ? n - 1 : j - 1;
    if (edge_min[before] == kInf || edge_min[j] == kInf) continue;
    profile.vertices.push_back({c, peak[j], edge_min[before], edge_min[j]});
  }
  return profile;
}

bool SuiteReport::passed() const {
  return !criteria.empty() &&
         std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

const SuiteRun* SuiteReport::find(const std::string& name) const {
  for (const SuiteRun& r : runs) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

SuiteReport run_suite(const SimulationConfig& base) {
  SuiteReport report;
  for (PlantKind plant : {PlantKind::kAffine, PlantKind::kArc}) {
    for (PathKind path : {PathKind::kCircle, PathKind::kPentagon, PathKind::kSquare}) {
      SuiteRun run;
      run.config = base;
      run.config.plant.kind = plant;
      run.config.trajectory.kind = path;
      run.name = std::string(to_string(plant)) + "_" + std::string(to_string(path));
      report.runs.push_back(run);
    }
  }
  SuiteRun ablation;
  ablation.config = base;
  ablation.config.plant.kind = PlantKind::kArc;
  ablation.config.trajectory.kind = PathKind::kCircle;
  ablation.config.controller.alpha_j = 0.0;
  ablation.name = "arc_circle_no_adaptation";
  report.runs.push_back(ablation);

  std::vector<std::future<void>> jobs;
  for (SuiteRun& run : report.runs) {
    jobs.push_back(std::async(std::launch::async, [&run] {
      try {
        run.result = run_simulation(run.config);
      } catch (const std::exception& e) {
        run.error = e.what();
      }
    }));
  }
  for (auto& job : jobs) job.get();

  report.criteria = {check_circle(report), check_square(report), check_pentagon(report),
                     check_tension(report), check_adaptation(report)};
  return report;
}

nlohmann::json suite_json(const SuiteReport& report) {
  nlohmann::json runs = nlohmann::json::object();
  for (const SuiteRun& r : report.runs) {
    runs[r.name] = r.result ? summary_json(r.result->summary) : nlohmann::json{{"error", r.error}};
  }
  nlohmann::json criteria = nlohmann::json::array();
  for (const CriterionResult& c : report.criteria) {
    criteria.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed},
                        {"detail", c.detail}, {"values", c.values}});
  }
  return {{"passed", report.passed()}, {"criteria", criteria}, {"runs", runs}};
}

void write_suite_outputs(const std::filesystem::path& dir, const SuiteReport& report) {
  std::filesystem::create_directories(dir);
  for (const SuiteRun& r : report.runs) {
    if (r.result) write_run_outputs(dir / r.name, *r.result, r.name);
  }
  write_file_atomic(dir / "suite_summary.json", suite_json(report).dump(2) + "\n");
}

}  // namespace tdcr
