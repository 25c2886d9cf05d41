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

#include "tdcr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <system_error>
#include <utility>
#include <vector>

namespace tdcr {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    if (f * mag >= raw) return f * mag;
  }
  return 10.0 * mag;
}

// Minimal line-chart renderer. With log_y the data are log10 transformed
// before plotting and tick labels show powers of ten.
std::string render_plot(std::string_view title, std::string_view xlabel, std::string_view ylabel,
                        const std::vector<Series>& series, bool equal_aspect, bool log_y) {
  constexpr double kWidth = 720, kHeight = 520;
  constexpr double kLeft = 80, kRight = 170, kTop = 50, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  auto ty = [log_y](double v) { return log_y ? std::log10(std::max(v, 1e-9)) : v; };
  Range xr, yr;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      xr.add(x);
      yr.add(ty(y));
    }
  }
  xr.pad();
  yr.pad();
  if (equal_aspect) {
    const double scale = std::max((xr.hi - xr.lo) / plot_w, (yr.hi - yr.lo) / plot_h);
    const double xc = 0.5 * (xr.lo + xr.hi), yc = 0.5 * (yr.lo + yr.hi);
    xr = {xc - 0.5 * scale * plot_w, xc + 0.5 * scale * plot_w};
    yr = {yc - 0.5 * scale * plot_h, yc + 0.5 * scale * plot_h};
  }
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double y) { return kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" +
         px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) + " " + px(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + px(kLeft + plot_w / 2) + "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + escape_xml(title) + "</text>\n";
  svg += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(plot_w) +
         "\" height=\"" + px(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  const double xs = nice_step(xr.hi - xr.lo, 6);
  for (double x = std::ceil(xr.lo / xs) * xs; x <= xr.hi; x += xs) {
    svg += "<line x1=\"" + px(sx(x)) + "\" y1=\"" + px(kTop + plot_h) + "\" x2=\"" + px(sx(x)) +
           "\" y2=\"" + px(kTop) + "\" stroke=\"#e0e0e0\"/>\n";
    svg += "<text x=\"" + px(sx(x)) + "\" y=\"" + px(kTop + plot_h + 16) +
           "\" text-anchor=\"middle\">" + num(std::abs(x) < 1e-12 * xs ? 0.0 : x) + "</text>\n";
  }
  const double ys = log_y ? std::max(1.0, std::round(nice_step(yr.hi - yr.lo, 6)))
                          : nice_step(yr.hi - yr.lo, 6);
  for (double y = std::ceil(yr.lo / ys) * ys; y <= yr.hi; y += ys) {
    svg += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(sy(y)) + "\" x2=\"" + px(kLeft + plot_w) +
           "\" y2=\"" + px(sy(y)) + "\" stroke=\"#e0e0e0\"/>\n";
    const std::string label = log_y ? "1e" + num(std::round(y)) : num(std::abs(y) < 1e-12 * ys ? 0.0 : y);
    svg += "<text x=\"" + px(kLeft - 6) + "\" y=\"" + px(sy(y) + 4) +
           "\" text-anchor=\"end\">" + label + "</text>\n";
  }
  svg += "<text x=\"" + px(kLeft + plot_w / 2) + "\" y=\"" + px(kHeight - 18) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape_xml(xlabel) + "</text>\n";
  svg += "<text transform=\"translate(22," + px(kTop + plot_h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" + escape_xml(ylabel) +
         "</text>\n";
  svg += "</g>\n";

  for (const Series& s : series) {
    svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"";
    if (s.dashed) svg += " stroke-dasharray=\"6,4\"";
    svg += " points=\"";
    for (const auto& [x, y] : s.points) svg += px(sx(x)) + "," + px(sy(ty(y))) + " ";
    svg += "\"/>\n";
  }

  svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  const double lx = kLeft + plot_w + 14;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = kTop + 14 + 20.0 * static_cast<double>(i);
    svg += "<line x1=\"" + px(lx) + "\" y1=\"" + px(ly) + "\" x2=\"" + px(lx + 24) + "\" y2=\"" +
           px(ly) + "\" stroke=\"" + series[i].color + "\" stroke-width=\"2\"" +
           (series[i].dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    svg += "<text x=\"" + px(lx + 30) + "\" y=\"" + px(ly + 4) + "\">" +
           escape_xml(series[i].label) + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace

std::string record_csv(const RunRecord& record) {
  std::string out(kRecordCsvHeader);
  out += '\n';
  for (const RunRow& r : record.rows) {
    const double fields[] = {r.reference.lateral, r.reference.axial, r.tip.lateral, r.tip.axial,
                             r.error, r.arclen, r.y(0), r.y(1), r.y(2), r.dy(0), r.dy(1),
                             r.dy(2), r.tau(0), r.tau(1), r.tau(2), r.t_bb, r.dj_norm};
    out += std::to_string(r.step);
    for (double f : fields) {
      out += ',';
      out += num(f);
    }
    out += ',';
    out += to_string(r.status);
    out += ',';
    out += num(r.kkt);
    out += '\n';
  }
  return out;
}

nlohmann::json summary_json(const RunSummary& s) {
  auto vec = [](const Eigen::Vector3d& v) { return nlohmann::json::array({v(0), v(1), v(2)}); };
  return {
      {"steady_mean_error", s.steady_mean_error},
      {"steady_max_error", s.steady_max_error},
      {"peak_error", s.peak_error},
      {"tau_min", vec(s.tau_min)},
      {"tau_max", vec(s.tau_max)},
      {"t_bb_min", s.t_bb_min},
      {"t_bb_max", s.t_bb_max},
      {"infeasible_steps", s.infeasible_steps},
      {"total_steps", s.total_steps},
      {"wall_time_s", s.wall_time_s},
  };
}

std::string tracking_svg(const RunRecord& record, std::string_view title) {
  Series ref{"reference", "#1f77b4", {}, true};
  Series tip{"tracked tip", "#d62728", {}, false};
  for (const RunRow& r : record.rows) {
    ref.points.emplace_back(r.reference.lateral, r.reference.axial);
    tip.points.emplace_back(r.tip.lateral, r.tip.axial);
  }
  return render_plot(title, "lateral (mm)", "axial (mm)", {ref, tip}, true, false);
}

std::string tension_svg(const RunRecord& record, std::string_view title) {
  Series ti{"tau_i", "#2ca02c", {}, false};
  Series tl{"tau_l", "#1f77b4", {}, false};
  Series tr{"tau_r", "#d62728", {}, false};
  Series bb{"T_bb", "black", {}, true};
  for (const RunRow& r : record.rows) {
    ti.points.emplace_back(r.step, r.tau(0));
    tl.points.emplace_back(r.step, r.tau(1));
    tr.points.emplace_back(r.step, r.tau(2));
    bb.points.emplace_back(r.step, r.t_bb);
  }
  return render_plot(title, "step", "tension (N)", {ti, tl, tr, bb}, false, false);
}

std::string error_profile_svg(const RunRecord& record, std::string_view title) {
  Series err{"tracking error", "#d62728", {}, false};
  for (const ErrorSample& e : compute_error_profile(record)) {
    err.points.emplace_back(e.arclen, e.error);
  }
  return render_plot(title, "reference arc length (mm)", "error (mm, log scale)", {err}, false,
                     true);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
}

void write_run_outputs(const std::filesystem::path& dir, const RunResult& result,
                       std::string_view title) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "record.csv", record_csv(result.record));
  write_file_atomic(dir / "summary.json", summary_json(result.summary).dump(2) + "\n");
  write_file_atomic(dir / "tracking.svg", tracking_svg(result.record, title));
  write_file_atomic(dir / "tension.svg", tension_svg(result.record, title));
  write_file_atomic(dir / "error_profile.svg", error_profile_svg(result.record, title));
}

}  // namespace tdcr
