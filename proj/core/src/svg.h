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

#ifndef XAIBENCH_SRC_SVG_H_
#define XAIBENCH_SRC_SVG_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace xaibench {

inline constexpr double kSvgWidth = 800.0;
inline constexpr double kSvgHeight = 600.0;

// Escapes &, <, >, " and '.
std::string XmlEscape(std::string_view text);

// Appends elements to a fixed-size standalone document. Coordinates are
// printed with 2 decimals.
class SvgDocument {
 public:
  SvgDocument();

  void Line(double x1, double y1, double x2, double y2, std::string_view stroke,
            double width = 1.0);
  void Polyline(std::span<const std::pair<double, double>> points,
                std::string_view stroke, double width, double opacity = 1.0);
  void Rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none");
  // anchor: "start", "middle" or "end". rotate is in degrees about (x, y).
  void Text(double x, double y, std::string_view text, double size = 12.0,
            std::string_view anchor = "start", std::string_view fill = "#000000",
            double rotate = 0.0);

  std::string Finish() const;

 private:
  std::string body_;
};

}  // namespace xaibench

#endif  // XAIBENCH_SRC_SVG_H_
