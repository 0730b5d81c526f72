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

#include "underfit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "underfit/errors.hpp"

namespace underfit {

namespace {

constexpr double kMarginPx = 34.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& SvgPlot::palette() {
  static const std::vector<std::string> colors = {
      "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
      "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
  return colors;
}

SvgPlot::SvgPlot(double width, double height, double x_min, double x_max, double y_min,
                 double y_max, std::string title)
    : width_(width), height_(height), x_min_(x_min), x_max_(x_max), y_min_(y_min),
      y_max_(y_max) {
  if (!(x_max_ > x_min_)) x_max_ = x_min_ + 1.0;
  if (!(y_max_ > y_min_)) y_max_ = y_min_ + 1.0;
  body_ += "<rect x=\"" + fmt(kMarginPx) + "\" y=\"" + fmt(kMarginPx) + "\" width=\"" +
           fmt(width_ - 2 * kMarginPx) + "\" height=\"" + fmt(height_ - 2 * kMarginPx) +
           "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  if (!title.empty()) text(x_min_, y_max_, title, 13);
  // Axis range labels.
  body_ += "<text x=\"" + fmt(kMarginPx) + "\" y=\"" + fmt(height_ - 8.0) +
           "\" font-size=\"10\" fill=\"#444\">" + fmt(x_min_) + "</text>\n";
  body_ += "<text x=\"" + fmt(width_ - kMarginPx - 30.0) + "\" y=\"" + fmt(height_ - 8.0) +
           "\" font-size=\"10\" fill=\"#444\">" + fmt(x_max_) + "</text>\n";
  body_ += "<text x=\"2\" y=\"" + fmt(height_ - kMarginPx) +
           "\" font-size=\"10\" fill=\"#444\">" + fmt(y_min_) + "</text>\n";
  body_ += "<text x=\"2\" y=\"" + fmt(kMarginPx + 10.0) +
           "\" font-size=\"10\" fill=\"#444\">" + fmt(y_max_) + "</text>\n";
}

double SvgPlot::to_px_x(double x) const {
  return kMarginPx + (x - x_min_) / (x_max_ - x_min_) * (width_ - 2 * kMarginPx);
}

double SvgPlot::to_px_y(double y) const {
  return height_ - kMarginPx - (y - y_min_) / (y_max_ - y_min_) * (height_ - 2 * kMarginPx);
}

void SvgPlot::polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::string& color, double stroke_width) {
  if (xs.size() != ys.size() || xs.empty()) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
           fmt(stroke_width) + "\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    body_ += fmt(to_px_x(xs[i])) + "," + fmt(to_px_y(ys[i])) + " ";
  }
  body_ += "\"/>\n";
}

void SvgPlot::scatter(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::string& color, double radius) {
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    body_ += "<circle cx=\"" + fmt(to_px_x(xs[i])) + "\" cy=\"" + fmt(to_px_y(ys[i])) +
             "\" r=\"" + fmt(radius) + "\" fill=\"" + color + "\"/>\n";
  }
}

void SvgPlot::circle(double cx, double cy, double r, const std::string& color,
                     double stroke_width) {
  const double rx = r / (x_max_ - x_min_) * (width_ - 2 * kMarginPx);
  body_ += "<circle cx=\"" + fmt(to_px_x(cx)) + "\" cy=\"" + fmt(to_px_y(cy)) + "\" r=\"" +
           fmt(rx) + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
           fmt(stroke_width) + "\"/>\n";
}

void SvgPlot::line(double x0, double y0, double x1, double y1, const std::string& color,
                   double stroke_width) {
  body_ += "<line x1=\"" + fmt(to_px_x(x0)) + "\" y1=\"" + fmt(to_px_y(y0)) + "\" x2=\"" +
           fmt(to_px_x(x1)) + "\" y2=\"" + fmt(to_px_y(y1)) + "\" stroke=\"" + color +
           "\" stroke-width=\"" + fmt(stroke_width) + "\"/>\n";
}

void SvgPlot::rect(double x0, double y0, double x1, double y1, const std::string& fill) {
  const double px0 = to_px_x(std::min(x0, x1));
  const double px1 = to_px_x(std::max(x0, x1));
  const double py0 = to_px_y(std::max(y0, y1));
  const double py1 = to_px_y(std::min(y0, y1));
  body_ += "<rect x=\"" + fmt(px0) + "\" y=\"" + fmt(py0) + "\" width=\"" + fmt(px1 - px0) +
           "\" height=\"" + fmt(py1 - py0) + "\" fill=\"" + fill + "\"/>\n";
}

void SvgPlot::text(double x, double y, const std::string& content, int font_px) {
  body_ += "<text x=\"" + fmt(to_px_x(x)) + "\" y=\"" + fmt(to_px_y(y) - 6.0) +
           "\" font-size=\"" + std::to_string(font_px) + "\" fill=\"#222\">" + content +
           "</text>\n";
}

std::string SvgPlot::str() const {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width_) +
                    "\" height=\"" + fmt(height_) + "\" viewBox=\"0 0 " + fmt(width_) + " " +
                    fmt(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

void SvgPlot::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << str();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string plot_histogram(const std::vector<double>& values, int bins,
                           const std::string& title) {
  if (values.empty() || bins < 1) return SvgPlot(480, 320, 0, 1, 0, 1, title).str();
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi <= lo) hi = lo + 1e-12;
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (double v : values) {
    int idx = static_cast<int>((v - lo) / (hi - lo) * bins);
    idx = std::clamp(idx, 0, bins - 1);
    counts[static_cast<std::size_t>(idx)] += 1.0;
  }
  const double cmax = *std::max_element(counts.begin(), counts.end());
  SvgPlot plot(480, 320, lo, hi, 0.0, cmax * 1.05, title);
  const double bw = (hi - lo) / bins;
  for (int i = 0; i < bins; ++i) {
    const double x0 = lo + i * bw;
    if (counts[static_cast<std::size_t>(i)] > 0) {
      plot.rect(x0, 0.0, x0 + bw, counts[static_cast<std::size_t>(i)], "#1f77b4");
    }
  }
  if (lo < 0.0 && hi > 0.0) plot.line(0.0, 0.0, 0.0, cmax * 1.05, "#d62728", 1.0);
  return plot.str();
}

std::string plot_convergence(const std::vector<std::vector<double>>& histories,
                             const std::string& title) {
  std::size_t longest = 1;
  double top = 0.0;
  for (const auto& h : histories) {
    longest = std::max(longest, h.size());
    for (double v : h) top = std::max(top, v);
  }
  SvgPlot plot(480, 320, 1.0, static_cast<double>(longest), 0.0, std::max(top, 1e-12) * 1.05,
               title);
  const auto& colors = SvgPlot::palette();
  for (std::size_t f = 0; f < histories.size(); ++f) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < histories[f].size(); ++i) {
      xs.push_back(static_cast<double>(i + 1));
      ys.push_back(histories[f][i]);
    }
    plot.polyline(xs, ys, colors[f % colors.size()]);
  }
  return plot.str();
}

std::string plot_heatmap(const Matd& m, const std::string& title, int max_cells) {
  // Max-pool down to at most max_cells per side to keep files small.
  const Index br = (m.rows() + max_cells - 1) / max_cells;
  const Index bc = (m.cols() + max_cells - 1) / max_cells;
  const Index rows = (m.rows() + br - 1) / br;
  const Index cols = (m.cols() + bc - 1) / bc;
  const double vmax = std::max(m.maxCoeff(), 1e-300);
  SvgPlot plot(520, 420, 0.0, static_cast<double>(cols), 0.0, static_cast<double>(rows),
               title);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double block = 0.0;
      for (Index a = i * br; a < std::min((i + 1) * br, m.rows()); ++a) {
        for (Index bidx = j * bc; bidx < std::min((j + 1) * bc, m.cols()); ++bidx) {
          block = std::max(block, m(a, bidx));
        }
      }
      const int shade = 255 - static_cast<int>(std::lround(block / vmax * 255.0));
      char color[10];
      std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, shade);
      plot.rect(static_cast<double>(j), static_cast<double>(rows - 1 - i),
                static_cast<double>(j + 1), static_cast<double>(rows - i), color);
    }
  }
  return plot.str();
}

}  // namespace underfit
