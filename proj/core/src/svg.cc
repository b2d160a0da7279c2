/*
 * Copyright 2026 The xaibench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "svg.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "format_util.h"
#include "xaibench/error.h"
#include "xaibench/report.h"

namespace xaibench {
namespace {

std::string Num(double v) { return FormatFixed(v, 2); }

// Plot area shared by the line charts.
constexpr double kLeft = 80.0;
constexpr double kRight = 760.0;
constexpr double kTop = 70.0;
constexpr double kBottom = 520.0;

constexpr std::array<std::string_view, 10> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// Linear blend from dark blue (p = 0) to near white (p = 1).
std::string HeatColor(double p) {
  p = std::clamp(p, 0.0, 1.0);
  constexpr std::array<double, 3> kDark = {8, 48, 107};
  constexpr std::array<double, 3> kLight = {247, 251, 255};
  char buffer[8];
  std::array<int, 3> rgb{};
  for (int i = 0; i < 3; ++i) {
    rgb[i] = static_cast<int>(std::lround(kDark[i] + p * (kLight[i] - kDark[i])));
  }
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buffer;
}

}  // namespace

std::string XmlEscape(std::string_view text) {
  std::string out;
  for (const char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

SvgDocument::SvgDocument() {
  Rect(0, 0, kSvgWidth, kSvgHeight, "#ffffff");
}

void SvgDocument::Line(double x1, double y1, double x2, double y2,
                       std::string_view stroke, double width) {
  body_ += "<line x1=\"" + Num(x1) + "\" y1=\"" + Num(y1) + "\" x2=\"" + Num(x2) +
           "\" y2=\"" + Num(y2) + "\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"" + Num(width) + "\"/>\n";
}

void SvgDocument::Polyline(std::span<const std::pair<double, double>> points,
                           std::string_view stroke, double width, double opacity) {
  body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
           "\" stroke-width=\"" + Num(width) + "\"";
  if (opacity < 1.0) body_ += " stroke-opacity=\"" + Num(opacity) + "\"";
  body_ += " points=\"";
  for (size_t i = 0; i < points.size(); ++i) {
    if (i > 0) body_ += ' ';
    body_ += Num(points[i].first) + "," + Num(points[i].second);
  }
  body_ += "\"/>\n";
}

void SvgDocument::Rect(double x, double y, double w, double h,
                       std::string_view fill, std::string_view stroke) {
  body_ += "<rect x=\"" + Num(x) + "\" y=\"" + Num(y) + "\" width=\"" + Num(w) +
           "\" height=\"" + Num(h) + "\" fill=\"" + std::string(fill) +
           "\" stroke=\"" + std::string(stroke) + "\"/>\n";
}

void SvgDocument::Text(double x, double y, std::string_view text, double size,
                       std::string_view anchor, std::string_view fill,
                       double rotate) {
  body_ += "<text x=\"" + Num(x) + "\" y=\"" + Num(y) + "\" font-size=\"" +
           Num(size) + "\" text-anchor=\"" + std::string(anchor) + "\" fill=\"" +
           std::string(fill) + "\"";
  if (rotate != 0.0) {
    body_ += " transform=\"rotate(" + Num(rotate) + " " + Num(x) + " " + Num(y) + ")\"";
  }
  body_ += ">" + XmlEscape(text) + "</text>\n";
}

std::string SvgDocument::Finish() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\" font-family=\"sans-serif\">\n" +
         body_ + "</svg>\n";
}

std::string RenderIccSvg(std::span<const IccCurve> curves,
                         const ReliabilitySummary& summary,
                         std::string_view title) {
  if (curves.empty()) throw InvalidArgument("icc chart: no curves");
  const auto& grid = curves[0].theta_grid;
  if (grid.size() < 2) throw InvalidArgument("icc chart: grid needs 2 points");
  const double lo = grid.front();
  const double hi = grid.back();
  auto x_of = [&](double theta) {
    return kLeft + (theta - lo) / (hi - lo) * (kRight - kLeft);
  };
  auto y_of = [](double p) { return kBottom - p * (kBottom - kTop); };

  SvgDocument svg;
  svg.Text(kSvgWidth / 2, 30, title, 16, "middle");
  svg.Text(kSvgWidth / 2, 52,
           "difficulty: " + Num(summary.mean_difficulty) +
               " discrimination: " + Num(summary.mean_discrimination) +
               " guessing: " + Num(summary.mean_guessing),
           13, "middle");
  svg.Line(kLeft, kBottom, kRight, kBottom, "#000000");
  svg.Line(kLeft, kTop, kLeft, kBottom, "#000000");
  for (int t = static_cast<int>(std::ceil(lo)); t <= static_cast<int>(std::floor(hi)); ++t) {
    svg.Line(x_of(t), kBottom, x_of(t), kBottom + 5, "#000000");
    svg.Text(x_of(t), kBottom + 20, std::to_string(t), 11, "middle");
  }
  for (int i = 0; i <= 4; ++i) {
    const double p = 0.25 * i;
    svg.Line(kLeft - 5, y_of(p), kLeft, y_of(p), "#000000");
    svg.Text(kLeft - 8, y_of(p) + 4, Num(p), 11, "end");
  }
  svg.Text((kLeft + kRight) / 2, kBottom + 45, "ability (theta)", 13, "middle");
  svg.Text(25, (kTop + kBottom) / 2, "P(correct)", 13, "middle", "#000000", -90);

  std::vector<std::pair<double, double>> points(grid.size());
  for (const IccCurve& curve : curves) {
    if (curve.theta_grid != grid || curve.p.size() != grid.size()) {
      throw InvalidArgument("icc chart: curves do not share a grid");
    }
    for (size_t i = 0; i < grid.size(); ++i) points[i] = {x_of(grid[i]), y_of(curve.p[i])};
    svg.Polyline(points,
                 curve.negative_discrimination ? kNegativeColor : kPositiveColor,
                 1.0, 0.6);
  }
  const auto average = PointwiseAverage(curves);
  for (size_t i = 0; i < grid.size(); ++i) points[i] = {x_of(grid[i]), y_of(average[i])};
  svg.Polyline(points, kAverageColor, 3.0);
  return svg.Finish();
}

std::string RenderBumpSvg(std::span<const BumpRow> table,
                          const std::optional<StabilityRecord>& record,
                          std::string_view title) {
  std::set<double> fraction_set;
  std::map<std::string, std::map<double, size_t>> lines;
  size_t max_position = 1;
  for (const BumpRow& row : table) {
    fraction_set.insert(row.fraction);
    lines[row.feature][row.fraction] = row.position;
    max_position = std::max(max_position, row.position);
  }
  const std::vector<double> fractions(fraction_set.begin(), fraction_set.end());
  constexpr double kBumpLeft = 200.0;
  constexpr double kBumpRight = 620.0;
  auto x_of = [&](size_t column) {
    if (fractions.size() < 2) return (kBumpLeft + kBumpRight) / 2;
    return kBumpLeft + static_cast<double>(column) / (fractions.size() - 1) *
                           (kBumpRight - kBumpLeft);
  };
  auto y_of = [&](size_t position) {
    if (max_position < 2) return (kTop + kBottom) / 2;
    return kTop + 20 + static_cast<double>(position - 1) / (max_position - 1) *
                           (kBottom - kTop - 40);
  };

  std::string heading(title);
  if (record) {
    heading += heading.empty() ? "" : " ";
    heading += "sum = " + Num(record->sum);
  }
  SvgDocument svg;
  svg.Text(kSvgWidth / 2, 30, heading, 16, "middle");
  for (size_t c = 0; c < fractions.size(); ++c) {
    svg.Line(x_of(c), kTop, x_of(c), kBottom, "#cccccc");
    svg.Text(x_of(c), kBottom + 25, LevelLabel(fractions[c]), 12, "middle");
    if (record) {
      const auto it = record->rho_by_fraction.find(fractions[c]);
      if (it != record->rho_by_fraction.end()) {
        svg.Text(x_of(c), kBottom + 45, "rho = " + Num(it->second), 11, "middle");
      }
    }
  }
  svg.Text((kBumpLeft + kBumpRight) / 2, kBottom + 70, "perturbation", 13, "middle");

  // Features colored in order of their first-column position.
  std::vector<std::pair<size_t, std::string>> by_start;
  for (const auto& [feature, positions] : lines) {
    by_start.emplace_back(positions.begin()->second, feature);
  }
  std::sort(by_start.begin(), by_start.end());
  for (size_t i = 0; i < by_start.size(); ++i) {
    const auto& positions = lines[by_start[i].second];
    const std::string_view color = kPalette[i % kPalette.size()];
    std::vector<std::pair<double, double>> points;
    for (size_t c = 0; c < fractions.size(); ++c) {
      const auto it = positions.find(fractions[c]);
      if (it != positions.end()) points.emplace_back(x_of(c), y_of(it->second));
    }
    svg.Polyline(points, color, 3.0);
    const auto& first = *positions.begin();
    const auto& last = *positions.rbegin();
    svg.Text(kBumpLeft - 12, y_of(first.second) + 4, by_start[i].second, 12, "end", color);
    svg.Text(kBumpRight + 12, y_of(last.second) + 4,
             std::to_string(last.second) + ". " + by_start[i].second, 12, "start", color);
  }
  return svg.Finish();
}

std::string RenderHeatmapSvg(const PosthocMatrix& matrix) {
  const size_t k = matrix.labels.size();
  if (matrix.p.rows() != k || matrix.p.cols() != k) {
    throw InvalidArgument("heatmap: matrix shape disagrees with its labels");
  }
  constexpr double kGridLeft = 150.0;
  constexpr double kGridTop = 120.0;
  const double cell = k == 0 ? 0.0
                             : std::min((kSvgWidth - kGridLeft - 20) / k,
                                        (kSvgHeight - kGridTop - 20) / k);
  const double font = std::clamp(cell * 0.32, 6.0, 14.0);
  SvgDocument svg;
  svg.Text(kSvgWidth / 2, 25, "Friedman-Nemenyi p-values", 16, "middle");
  for (size_t i = 0; i < k; ++i) {
    const double y = kGridTop + i * cell;
    svg.Text(kGridLeft - 6, y + cell / 2 + font / 3, matrix.labels[i], font, "end");
    const double x = kGridLeft + i * cell + cell / 2;
    svg.Text(x, kGridTop - 6, matrix.labels[i], font, "start", "#000000", -45);
    for (size_t j = 0; j < k; ++j) {
      const double p = matrix.p(i, j);
      const double cx = kGridLeft + j * cell;
      svg.Rect(cx, y, cell, cell, HeatColor(p), "#ffffff");
      svg.Text(cx + cell / 2, y + cell / 2 + font / 3, Num(p), font, "middle",
               p < 0.5 ? "#ffffff" : "#000000");
    }
  }
  return svg.Finish();
}

}  // namespace xaibench
