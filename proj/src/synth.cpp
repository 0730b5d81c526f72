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

#include "underfit/synth.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "underfit/errors.hpp"
#include "underfit/rng.hpp"

namespace underfit {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Index> split_evenly(Index total, int k) {
  std::vector<Index> per(static_cast<std::size_t>(k), total / k);
  for (Index i = 0; i < total % k; ++i) per[static_cast<std::size_t>(i)] += 1;
  return per;
}

void check_params(const SynthParams& p) {
  if (p.k < 1) throw InvalidParams("synth: k must be >= 1");
  if (p.total_points < 1) throw InvalidParams("synth: total_points must be >= 1");
  if (p.noise < 0.0) throw InvalidParams("synth: noise must be >= 0");
  if (!(p.outlier_ratio >= 0.0 && p.outlier_ratio < 1.0)) {
    throw InvalidParams("synth: outlier_ratio must be in [0, 1)");
  }
}

// Uniform outliers at distance > margin from all models; rejection-sampled.
void add_gross_outliers_2d(SynthResult& out, Index count, double margin, Rng& rng) {
  Index placed = 0;
  std::int64_t attempts = 0;
  const std::int64_t cap = 20000 * std::max<Index>(count, 1);
  Index row = out.data.points.rows() - count;
  while (placed < count) {
    if (++attempts > cap) throw InvalidParams("synth: outlier margin leaves no room");
    Vecd p(2);
    p << rng.uniform(), rng.uniform();
    bool clear = true;
    for (const auto& model : out.truth) {
      if (residual(model, p) <= margin) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    out.data.points.row(row + placed) = p.transpose();
    out.data.labels[static_cast<std::size_t>(row + placed)] = 0;
    ++placed;
  }
}

ModelParams line_through(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = (b - a).normalized();
  const Eigen::Vector2d n(-d.y(), d.x());
  ModelParams out;
  out.family = ModelFamily::kLine2D;
  out.theta = Vecd(3);
  out.theta << n.x(), n.y(), -n.dot(a);
  return out;
}

}  // namespace

SynthResult synth_star(const SynthParams& p) {
  check_params(p);
  Rng rng(p.seed);
  const Index n_out = static_cast<Index>(std::llround(p.total_points * p.outlier_ratio));
  const Index n_in = p.total_points - n_out;
  const auto per = split_evenly(n_in, p.k);

  SynthResult out;
  out.data.family = ModelFamily::kLine2D;
  out.data.points.resize(p.total_points, 2);
  out.data.labels.assign(static_cast<std::size_t>(p.total_points), 0);

  const Eigen::Vector2d center(0.5, 0.5);
  Index row = 0;
  if (p.k % 2 == 1 && p.k >= 3) {
    // Star polygon: strokes V_t -> V_{t+2} of a regular k-gon.
    const double radius = 0.46;
    const double phi = 2.0 * kPi * rng.uniform();
    std::vector<Eigen::Vector2d> v;
    for (int t = 0; t < p.k; ++t) {
      const double a = phi + 2.0 * kPi * t / p.k;
      v.emplace_back(center + radius * Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
    for (int t = 0; t < p.k; ++t) {
      const Eigen::Vector2d a = v[static_cast<std::size_t>(t)];
      const Eigen::Vector2d b = v[static_cast<std::size_t>((t + 2) % p.k)];
      out.truth.push_back(line_through(a, b));
      const Eigen::Vector2d d = b - a;
      for (Index i = 0; i < per[static_cast<std::size_t>(t)]; ++i) {
        const Eigen::Vector2d q = a + rng.uniform() * d +
                                  Eigen::Vector2d(rng.normal(0.0, p.noise), rng.normal(0.0, p.noise));
        out.data.points.row(row) << q.x(), q.y();
        out.data.labels[static_cast<std::size_t>(row)] = t + 1;
        ++row;
      }
    }
  } else {
    // Asterisk: k lines through a common center, hollow core.
    const double r_hole = 0.18, r_max = 0.46;
    for (int t = 0; t < p.k; ++t) {
      const double a = kPi * (t + 0.2 * (rng.uniform() - 0.5)) / p.k;
      const Eigen::Vector2d d(std::cos(a), std::sin(a));
      const Eigen::Vector2d anchor = center;
      out.truth.push_back(line_through(anchor, anchor + d));
      for (Index i = 0; i < per[static_cast<std::size_t>(t)]; ++i) {
        const double sgn = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double s = sgn * (r_hole + rng.uniform() * (r_max - r_hole));
        const Eigen::Vector2d q = center + s * d +
                                  Eigen::Vector2d(rng.normal(0.0, p.noise), rng.normal(0.0, p.noise));
        out.data.points.row(row) << q.x(), q.y();
        out.data.labels[static_cast<std::size_t>(row)] = t + 1;
        ++row;
      }
    }
  }
  add_gross_outliers_2d(out, n_out, p.margin, rng);
  out.data.meta = {{"k", static_cast<double>(p.k)}, {"noise", p.noise},
                   {"outlier_ratio", p.outlier_ratio}, {"margin", p.margin},
                   {"seed", static_cast<double>(p.seed)}};
  return out;
}

SynthResult synth_stairs(const SynthParams& p) {
  check_params(p);
  Rng rng(p.seed);
  const Index n_out = static_cast<Index>(std::llround(p.total_points * p.outlier_ratio));
  const Index n_in = p.total_points - n_out;
  const auto per = split_evenly(n_in, p.k);

  SynthResult out;
  out.data.family = ModelFamily::kLine2D;
  out.data.points.resize(p.total_points, 2);
  out.data.labels.assign(static_cast<std::size_t>(p.total_points), 0);

  const double span = 0.8;
  const double step_x = span / p.k;
  Index row = 0;
  for (int t = 0; t < p.k; ++t) {
    const double y = 0.1 + span * (t + 0.5) / p.k;
    const double x0 = 0.1 + step_x * t;
    out.truth.push_back(line_through({x0, y}, {x0 + 1.0, y}));
    for (Index i = 0; i < per[static_cast<std::size_t>(t)]; ++i) {
      const double x = x0 + rng.uniform() * step_x;
      out.data.points.row(row) << x + rng.normal(0.0, p.noise), y + rng.normal(0.0, p.noise);
      out.data.labels[static_cast<std::size_t>(row)] = t + 1;
      ++row;
    }
  }
  add_gross_outliers_2d(out, n_out, p.margin, rng);
  out.data.meta = {{"k", static_cast<double>(p.k)}, {"noise", p.noise},
                   {"outlier_ratio", p.outlier_ratio}, {"margin", p.margin},
                   {"seed", static_cast<double>(p.seed)}};
  return out;
}

SynthResult synth_circles(const SynthParams& p) {
  check_params(p);
  Rng rng(p.seed);
  const Index n_out = static_cast<Index>(std::llround(p.total_points * p.outlier_ratio));
  const Index n_in = p.total_points - n_out;
  const auto per = split_evenly(n_in, p.k);

  SynthResult out;
  out.data.family = ModelFamily::kCircle2D;
  out.data.points.resize(p.total_points, 2);
  out.data.labels.assign(static_cast<std::size_t>(p.total_points), 0);

  // One deliberately intersecting pair, the rest spread out. Centers and
  // radii are jittered per seed.
  static const double base[][3] = {
      {0.30, 0.72, 0.17}, {0.58, 0.78, 0.16}, {0.20, 0.24, 0.15},
      {0.62, 0.26, 0.16}, {0.87, 0.55, 0.11}, {0.50, 0.50, 0.13},
      {0.85, 0.15, 0.10}, {0.12, 0.52, 0.10},
  };
  const int n_base = static_cast<int>(sizeof(base) / sizeof(base[0]));
  Index row = 0;
  for (int t = 0; t < p.k; ++t) {
    const auto& g = base[t % n_base];
    const double cx = g[0] + rng.normal(0.0, 0.01);
    const double cy = g[1] + rng.normal(0.0, 0.01);
    const double r = g[2] * (1.0 + 0.06 * (rng.uniform() - 0.5));
    ModelParams circle;
    circle.family = ModelFamily::kCircle2D;
    circle.theta = Vecd(3);
    circle.theta << cx, cy, r;
    out.truth.push_back(circle);
    for (Index i = 0; i < per[static_cast<std::size_t>(t)]; ++i) {
      const double a = 2.0 * kPi * rng.uniform();
      out.data.points.row(row) << cx + r * std::cos(a) + rng.normal(0.0, p.noise),
          cy + r * std::sin(a) + rng.normal(0.0, p.noise);
      out.data.labels[static_cast<std::size_t>(row)] = t + 1;
      ++row;
    }
  }
  add_gross_outliers_2d(out, n_out, p.margin, rng);
  out.data.meta = {{"k", static_cast<double>(p.k)}, {"noise", p.noise},
                   {"outlier_ratio", p.outlier_ratio}, {"margin", p.margin},
                   {"seed", static_cast<double>(p.seed)}};
  return out;
}

namespace {

// Maps the unit square corners onto a quad; exact homography via the DLT on
// the four corner correspondences.
ModelParams homography_from_quads(const Matd& src, const Matd& dst) {
  Matd sample(4, 4);
  sample << src(0, 0), src(0, 1), dst(0, 0), dst(0, 1),
            src(1, 0), src(1, 1), dst(1, 0), dst(1, 1),
            src(2, 0), src(2, 1), dst(2, 0), dst(2, 1),
            src(3, 0), src(3, 1), dst(3, 0), dst(3, 1);
  return fit_minimal(ModelFamily::kHomography2D, sample);
}

Eigen::Vector2d apply_h(const ModelParams& h, const Eigen::Vector2d& x) {
  const Eigen::Vector3d q(h.theta[0] * x.x() + h.theta[1] * x.y() + h.theta[2],
                          h.theta[3] * x.x() + h.theta[4] * x.y() + h.theta[5],
                          h.theta[6] * x.x() + h.theta[7] * x.y() + h.theta[8]);
  return q.hnormalized();
}

void add_gross_outlier_correspondences(SynthResult& out, Index count, double margin_px,
                                       double w, double h, Rng& rng) {
  Index placed = 0;
  std::int64_t attempts = 0;
  const std::int64_t cap = 20000 * std::max<Index>(count, 1);
  Index row = out.data.points.rows() - count;
  while (placed < count) {
    if (++attempts > cap) throw InvalidParams("synth: outlier margin leaves no room");
    Vecd c(4);
    c << rng.uniform(0.0, w), rng.uniform(0.0, h), rng.uniform(0.0, w), rng.uniform(0.0, h);
    bool clear = true;
    for (const auto& model : out.truth) {
      if (residual(model, c) <= margin_px) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    out.data.points.row(row + placed) = c.transpose();
    out.data.labels[static_cast<std::size_t>(row + placed)] = 0;
    ++placed;
  }
}

}  // namespace

SynthResult synth_homography(const SynthParams& p) {
  check_params(p);
  Rng rng(p.seed);
  const double width = 640.0, height = 480.0;
  const double noise_px = p.noise;
  const double margin_px = p.margin;
  const Index n_out = static_cast<Index>(std::llround(p.total_points * p.outlier_ratio));
  const Index n_in = p.total_points - n_out;
  const auto per = split_evenly(n_in, p.k);

  SynthResult out;
  out.data.family = ModelFamily::kHomography2D;
  out.data.points.resize(p.total_points, 4);
  out.data.labels.assign(static_cast<std::size_t>(p.total_points), 0);

  // Source regions: cells of a grid over image one, with margins.
  const int grid = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p.k))));
  Index row = 0;
  for (int t = 0; t < p.k; ++t) {
    const int gx = t % grid, gy = t / grid;
    const double cw = width / grid, ch = height / grid;
    const double x0 = gx * cw + 0.12 * cw, x1 = (gx + 1) * cw - 0.12 * cw;
    const double y0 = gy * ch + 0.12 * ch, y1 = (gy + 1) * ch - 0.12 * ch;
    Matd src(4, 2);
    src << x0, y0, x1, y0, x1, y1, x0, y1;

    // Target quad: similarity plus per-corner perspective jitter.
    const double ang = rng.uniform(-0.35, 0.35);
    const double scale = rng.uniform(0.75, 1.2);
    const Eigen::Rotation2Dd rot(ang);
    const Eigen::Vector2d src_c(0.5 * (x0 + x1), 0.5 * (y0 + y1));
    const Eigen::Vector2d dst_c = src_c + Eigen::Vector2d(rng.uniform(-60.0, 60.0),
                                                          rng.uniform(-60.0, 60.0));
    Matd dst(4, 2);
    for (int c = 0; c < 4; ++c) {
      const Eigen::Vector2d corner(src(c, 0), src(c, 1));
      Eigen::Vector2d mapped = dst_c + scale * (rot * (corner - src_c));
      mapped += Eigen::Vector2d(rng.uniform(-18.0, 18.0), rng.uniform(-18.0, 18.0));
      dst.row(c) << mapped.x(), mapped.y();
    }
    ModelParams h = homography_from_quads(src, dst);
    out.truth.push_back(h);

    for (Index i = 0; i < per[static_cast<std::size_t>(t)]; ++i) {
      const Eigen::Vector2d x1p(rng.uniform(x0, x1), rng.uniform(y0, y1));
      const Eigen::Vector2d x2p = apply_h(h, x1p);
      out.data.points.row(row) << x1p.x() + rng.normal(0.0, noise_px),
          x1p.y() + rng.normal(0.0, noise_px), x2p.x() + rng.normal(0.0, noise_px),
          x2p.y() + rng.normal(0.0, noise_px);
      out.data.labels[static_cast<std::size_t>(row)] = t + 1;
      ++row;
    }
  }
  add_gross_outlier_correspondences(out, n_out, margin_px, width, height, rng);
  out.data.meta = {{"k", static_cast<double>(p.k)}, {"noise", p.noise},
                   {"outlier_ratio", p.outlier_ratio}, {"margin", p.margin},
                   {"seed", static_cast<double>(p.seed)}};
  return out;
}

SynthResult synth_fundamental(const SynthParams& p) {
  check_params(p);
  Rng rng(p.seed);
  const double width = 640.0, height = 480.0;
  const Index n_out = static_cast<Index>(std::llround(p.total_points * p.outlier_ratio));
  const Index n_in = p.total_points - n_out;
  const auto per = split_evenly(n_in, p.k);

  SynthResult out;
  out.data.family = ModelFamily::kFundamental;
  out.data.points.resize(p.total_points, 4);
  out.data.labels.assign(static_cast<std::size_t>(p.total_points), 0);

  Eigen::Matrix3d k_cam;
  k_cam << 500, 0, 320, 0, 500, 240, 0, 0, 1;
  const Eigen::Matrix3d k_inv = k_cam.inverse();

  Index row = 0;
  for (int t = 0; t < p.k; ++t) {
    // Per-motion relative pose (R, translation) between the two views.
    const Eigen::Vector3d axis =
        Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
    const double angle = rng.uniform(0.1, 0.35);
    const Eigen::Matrix3d r_mat = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
    Eigen::Vector3d trans(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-0.3, 0.3));
    if (trans.norm() < 0.3) trans = Eigen::Vector3d(1.0, 0.2, 0.0);
    trans.normalize();

    Eigen::Matrix3d tx;
    tx << 0, -trans.z(), trans.y(), trans.z(), 0, -trans.x(), -trans.y(), trans.x(), 0;
    Eigen::Matrix3d f = k_inv.transpose() * tx * r_mat * k_inv;
    f /= f.norm();
    ModelParams fm;
    fm.family = ModelFamily::kFundamental;
    fm.theta = Vecd(9);
    fm.theta << f(0, 0), f(0, 1), f(0, 2), f(1, 0), f(1, 1), f(1, 2), f(2, 0), f(2, 1), f(2, 2);
    out.truth.push_back(fm);

    Index placed = 0;
    std::int64_t guard = 0;
    while (placed < per[static_cast<std::size_t>(t)]) {
      if (++guard > 100000) throw InvalidParams("synth_fundamental: projection failed");
      const Eigen::Vector3d x3(rng.uniform(-2.0, 2.0), rng.uniform(-1.5, 1.5),
                               rng.uniform(4.0, 9.0));
      const Eigen::Vector3d x3b = r_mat * x3 + trans;
      if (x3b.z() < 0.5) continue;
      const Eigen::Vector2d im1 = (k_cam * x3).hnormalized();
      const Eigen::Vector2d im2 = (k_cam * x3b).hnormalized();
      if (im1.x() < 0 || im1.x() >= width || im1.y() < 0 || im1.y() >= height) continue;
      if (im2.x() < 0 || im2.x() >= width || im2.y() < 0 || im2.y() >= height) continue;
      out.data.points.row(row) << im1.x() + rng.normal(0.0, p.noise),
          im1.y() + rng.normal(0.0, p.noise), im2.x() + rng.normal(0.0, p.noise),
          im2.y() + rng.normal(0.0, p.noise);
      out.data.labels[static_cast<std::size_t>(row)] = t + 1;
      ++row;
      ++placed;
    }
  }
  add_gross_outlier_correspondences(out, n_out, p.margin, width, height, rng);
  out.data.meta = {{"k", static_cast<double>(p.k)}, {"noise", p.noise},
                   {"outlier_ratio", p.outlier_ratio}, {"margin", p.margin},
                   {"seed", static_cast<double>(p.seed)}};
  return out;
}

SynthResult synth_dataset(const std::string& kind, const SynthParams& p) {
  if (kind == "star") return synth_star(p);
  if (kind == "stairs") return synth_stairs(p);
  if (kind == "circles") return synth_circles(p);
  if (kind == "homography") return synth_homography(p);
  if (kind == "fundamental") return synth_fundamental(p);
  throw InvalidParams("synth: unknown kind '" + kind + "'");
}

DigitsToy make_digits_matrix() {
  // Five disjoint bar-shaped parts on a 66-pixel canvas; six images are
  // unions of two or three parts, with distinct usage patterns.
  const int sizes[5] = {20, 16, 12, 10, 8};
  const int usage_sets[5][3] = {{0, 1, 2}, {0, 3, 4}, {1, 3, 5}, {2, 4, 5}, {0, -1, -1}};
  const Index n_pixels = 66;
  const Index n_images = 6;

  DigitsToy toy;
  toy.a = Matd::Zero(n_pixels, n_images);
  toy.usage = Matd::Zero(5, n_images);
  Index offset = 0;
  for (int part = 0; part < 5; ++part) {
    Vecd mask = Vecd::Zero(n_pixels);
    mask.segment(offset, sizes[part]).setOnes();
    offset += sizes[part];
    toy.parts.push_back(mask);
    for (int d : usage_sets[part]) {
      if (d < 0) continue;
      toy.a.col(d) += mask;
      toy.usage(part, d) = 1.0;
    }
  }
  return toy;
}

}  // namespace underfit
