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

#ifndef TDCR_REPORT_HPP_
#define TDCR_REPORT_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tdcr/simulator.hpp"

namespace tdcr {

/// Header of record.csv. Downstream tooling depends on it; do not reorder.
inline constexpr std::string_view kRecordCsvHeader =
    "step,ref_x,ref_y,tip_x,tip_y,err,arclen,y_i,y_l,y_r,dy_i,dy_l,dy_r,"
    "tau_i,tau_l,tau_r,t_bb,dj_norm,qp_status,kkt";

std::string record_csv(const RunRecord& record);

nlohmann::json summary_json(const RunSummary& summary);

/// Reference vs tracked tip path with legend.
std::string tracking_svg(const RunRecord& record, std::string_view title);
/// Tendon tensions and backbone tension against step.
std::string tension_svg(const RunRecord& record, std::string_view title);
/// Tracking error against reference arc length, log scale.
std::string error_profile_svg(const RunRecord& record, std::string_view title);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// record.csv, summary.json, tracking.svg, tension.svg, error_profile.svg.
void write_run_outputs(const std::filesystem::path& dir, const RunResult& result,
                       std::string_view title);

}  // namespace tdcr

#endif  // TDCR_REPORT_HPP_
