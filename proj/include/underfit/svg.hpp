// Copyright 2026 The Underfit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef UNDERFIT_SVG_HPP_
#define UNDERFIT_SVG_HPP_

#include <string>
#include <vector>

#include "underfit/types.hpp"

namespace underfit {

// Minimal static SVG plotting: scatter, polylines, circles, histogram and
// heat-map primitives with a framed data viewport. Output carries no
// timestamps, so identical inputs give identical bytes.
class SvgPlot {
 public:
  SvgPlot(double width, double height, double x_min, double x_max, double y_min,
          double y_max, std::string title = "");

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, double stroke_width = 1.5);
  void scatter(const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& color, double radius = 2.0);
  void circle(double cx, double cy, double r, const std::string& color,
              double stroke_width = 1.5);
  void line(double x0, double y0, double x1, double y1, const std::string& color,
            double stroke_width = 1.5);
  void rect(double x0, double y0, double x1, double y1, const std::string& fill);
  void text(double x, double y, const std::string& content, int font_px = 11);

  std::string str() const;
  void save(const std::string& path) const;

  // x-coordinate clamp range of the data viewport.
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }

  static const std::vector<std::string>& palette();

 private:
  double to_px_x(double x) const;
  double to_px_y(double y) const;

  double width_, height_;
  double x_min_, x_max_, y_min_, y_max_;
  std::string body_;
};

// Figure helpers used by the CLI reports.
std::string plot_histogram(const std::vector<double>& values, int bins,
                           const std::string& title);
std::string plot_convergence(const std::vector<std::vector<double>>& histories,
                             const std::string& title);
std::string plot_heatmap(const Matd& m, const std::string& title, int max_cells = 200);

}  // namespace underfit

#endif  // UNDERFIT_SVG_HPP_
