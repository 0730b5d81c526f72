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

#include "underfit/model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "underfit/errors.hpp"

namespace underfit {

namespace {

using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

double bbox_diag(const Matd& pts) {
  const Vecd lo = pts.colwise().minCoeff();
  const Vecd hi = pts.colwise().maxCoeff();
  return (hi - lo).norm();
}

// Twice the signed triangle area.
double cross2(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

Mat3 unpack3x3(const Vecd& theta) {
  Mat3 m;
  m << theta[0], theta[1], theta[2],
       theta[3], theta[4], theta[5],
       theta[6], theta[7], theta[8];
  return m;
}

Vecd pack3x3(const Mat3& m) {
  Vecd theta(9);
  theta << m(0, 0), m(0, 1), m(0, 2),
           m(1, 0), m(1, 1), m(1, 2),
           m(2, 0), m(2, 1), m(2, 2);
  return theta;
}

// Unit Frobenius norm with the largest-magnitude entry positive.
Mat3 canonicalize(Mat3 m) {
  m /= m.norm();
  double best = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(m(i, j)) > std::abs(best)) best = m(i, j);
  if (best < 0.0) m = -m;
  return m;
}

// Hartley normalization: centroid to the origin, mean distance sqrt(2).
// Weighted variant; uniform weights recover the standard transform.
Mat3 normalizing_transform(const Matd& pts, const Vecd& w) {
  const double wsum = w.sum();
  const Vec2 centroid(pts.col(0).dot(w) / wsum, pts.col(1).dot(w) / wsum);
  double mean_dist = 0.0;
  for (Index i = 0; i < pts.rows(); ++i) {
    mean_dist += w[i] * std::hypot(pts(i, 0) - centroid.x(), pts(i, 1) - centroid.y());
  }
  mean_dist /= wsum;
  const double scale = mean_dist > 1e-300 ? std::sqrt(2.0) / mean_dist : 1.0;
  Mat3 t;
  t << scale, 0, -scale * centroid.x(),
       0, scale, -scale * centroid.y(),
       0, 0, 1;
  return t;
}

void check_triples_noncollinear(const Matd& pts, double tol_area) {
  const Index n = pts.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = j + 1; k < n; ++k) {
        const Vec2 a(pts(i, 0), pts(i, 1));
        const Vec2 b(pts(j, 0), pts(j, 1));
        const Vec2 c(pts(k, 0), pts(k, 1));
        if (std::abs(cross2(a, b, c)) < tol_area) {
          throw DegenerateSample("collinear points in minimal sample");
        }
      }
}

// Smallest right singular vector of the (row-weighted) DLT system; throws
// when the system is rank deficient.
Vec3 solve_line_two_points(const Vec2& p, const Vec2& q) {
  const Vec2 d = q - p;
  const double len = d.norm();
  const double scale = std::max(p.norm(), q.norm());
  if (len <= 1e-12 * std::max(scale, 1.0)) {
    throw DegenerateSample("coincident points for line fit");
  }
  const Vec2 n(-d.y() / len, d.x() / len);
  return Vec3(n.x(), n.y(), -n.dot(p));
}

ModelParams fit_line_minimal(const Matd& sample) {
  const Vec2 p(sample(0, 0), sample(0, 1));
  const Vec2 q(sample(1, 0), sample(1, 1));
  const Vec3 line = solve_line_two_points(p, q);
  ModelParams out;
  out.family = ModelFamily::kLine2D;
  out.theta = Vecd(3);
  out.theta << line.x(), line.y(), line.z();
  return out;
}

ModelParams fit_circle_minimal(const Matd& sample) {
  const double scale = bbox_diag(sample);
  check_triples_noncollinear(sample, 1e-12 * std::max(scale * scale, 1e-30));
  const double ax = sample(0, 0), ay = sample(0, 1);
  const double bx = sample(1, 0), by = sample(1, 1);
  const double cx = sample(2, 0), cy = sample(2, 1);
  const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (std::abs(d) < 1e-300) throw DegenerateSample("collinear circle sample");
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  const double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
  const double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
  ModelParams out;
  out.family = ModelFamily::kCircle2D;
  out.theta = Vecd(3);
  out.theta << ux, uy, std::hypot(ax - ux, ay - uy);
  return out;
}

// Rows of the homography DLT for one correspondence (x, y) -> (xp, yp).
void homography_rows(double x, double y, double xp, double yp, double w,
                     Matd& a, Index row) {
  a.row(row) << 0, 0, 0, -x, -y, -1, yp * x, yp * y, yp;
  a.row(row + 1) << x, y, 1, 0, 0, 0, -xp * x, -xp * y, -xp;
  a.row(row) *= w;
  a.row(row + 1) *= w;
}

Vecd smallest_singular_vector(const Matd& a, bool check_rank) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (check_rank && sv.size() >= 8 && sv[7] < 1e-10 * sv[0]) {
    throw DegenerateSample("rank-deficient DLT system");
  }
  return svd.matrixV().col(8);
}

ModelParams homography_from_dlt(const Matd& pts1, const Matd& pts2, const Vecd& w,
                                bool check_rank) {
  const Mat3 t1 = normalizing_transform(pts1, w);
  const Mat3 t2 = normalizing_transform(pts2, w);
  const Index n = pts1.rows();
  Matd a(2 * n, 9);
  for (Index i = 0; i < n; ++i) {
    const Vec3 p1 = t1 * Vec3(pts1(i, 0), pts1(i, 1), 1.0);
    const Vec3 p2 = t2 * Vec3(pts2(i, 0), pts2(i, 1), 1.0);
    homography_rows(p1.x(), p1.y(), p2.x(), p2.y(), std::sqrt(w[i]), a, 2 * i);
  }
  const Vecd h = smallest_singular_vector(a, check_rank);
  Mat3 hn = unpack3x3(h);
  const Mat3 hfull = t2.inverse() * hn * t1;
  ModelParams out;
  out.family = ModelFamily::kHomography2D;
  out.theta = pack3x3(canonicalize(hfull));
  return out;
}

ModelParams fundamental_from_dlt(const Matd& pts1, const Matd& pts2, const Vecd& w,
                                 bool check_rank) {
  const Mat3 t1 = normalizing_transform(pts1, w);
  const Mat3 t2 = normalizing_transform(pts2, w);
  const Index n = pts1.rows();
  Matd a(n, 9);
  for (Index i = 0; i < n; ++i) {
    const Vec3 p1 = t1 * Vec3(pts1(i, 0), pts1(i, 1), 1.0);
    const Vec3 p2 = t2 * Vec3(pts2(i, 0), pts2(i, 1), 1.0);
    const double x = p1.x(), y = p1.y(), xp = p2.x(), yp = p2.y();
    a.row(i) << xp * x, xp * y, xp, yp * x, yp * y, yp, x, y, 1.0;
    a.row(i) *= std::sqrt(w[i]);
  }
  const Vecd f = smallest_singular_vector(a, check_rank);
  Mat3 fn = unpack3x3(f);
  // Rank-2 truncation in the normalized frame.
  Eigen::JacobiSVD<Mat3> svd(fn, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Vec3 sv = svd.singularValues();
  sv[2] = 0.0;
  fn = svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
  const Mat3 ffull = t2.transpose() * fn * t1;
  ModelParams out;
  out.family = ModelFamily::kFundamental;
  out.theta = pack3x3(canonicalize(ffull));
  return out;
}

double line_residual(const Vecd& theta, const Vecd& p) {
  return std::abs(theta[0] * p[0] + theta[1] * p[1] + theta[2]);
}

double circle_residual(const Vecd& theta, const Vecd& p) {
  return std::abs(std::hypot(p[0] - theta[0], p[1] - theta[1]) - theta[2]);
}

double homography_residual(const Mat3& h, const Mat3& hinv, const Vecd& c) {
  const Vec3 p1(c[0], c[1], 1.0);
  const Vec3 p2(c[2], c[3], 1.0);
  const Vec3 q2 = h * p1;
  const Vec3 q1 = hinv * p2;
  if (std::abs(q2.z()) < 1e-300 || std::abs(q1.z()) < 1e-300) {
    return std::numeric_limits<double>::infinity();
  }
  const double fwd = (q2.hnormalized() - Vec2(c[2], c[3])).squaredNorm();
  const double bwd = (q1.hnormalized() - Vec2(c[0], c[1])).squaredNorm();
  return std::sqrt(0.5 * (fwd + bwd));
}

Mat3 invert_homography(const Mat3& h) {
  const double det = h.determinant();
  if (std::abs(det) < 1e-12) {
    throw SingularModel("homography is not invertible");
  }
  return h.inverse();
}

double sampson_residual(const Mat3& f, const Vecd& c) {
  const Vec3 p1(c[0], c[1], 1.0);
  const Vec3 p2(c[2], c[3], 1.0);
  const Vec3 fp1 = f * p1;
  const Vec3 ftp2 = f.transpose() * p2;
  const double num = p2.dot(fp1);
  const double den2 = fp1.x() * fp1.x() + fp1.y() * fp1.y() +
                      ftp2.x() * ftp2.x() + ftp2.y() * ftp2.y();
  if (den2 < 1e-300) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(num) / std::sqrt(den2);
}

ModelParams fit_line_weighted(const Matd& data, const Vecd& w) {
  const double wsum = w.sum();
  const Vec2 centroid(data.col(0).dot(w) / wsum, data.col(1).dot(w) / wsum);
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (Index i = 0; i < data.rows(); ++i) {
    if (w[i] <= 0.0) continue;
    const Vec2 d(data(i, 0) - centroid.x(), data(i, 1) - centroid.y());
    scatter += w[i] * d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
  const Vec2 n = eig.eigenvectors().col(0);  // smallest eigenvalue -> normal
  ModelParams out;
  out.family = ModelFamily::kLine2D;
  out.theta = Vecd(3);
  out.theta << n.x(), n.y(), -n.dot(centroid);
  return out;
}

ModelParams fit_circle_weighted(const Matd& data, const Vecd& w) {
  // Algebraic Kasa seed: minimize sum w (|x|^2 - 2 c.x - t)^2.
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Vec3 atb = Vec3::Zero();
  for (Index i = 0; i < data.rows(); ++i) {
    if (w[i] <= 0.0) continue;
    const Vec3 row(2.0 * data(i, 0), 2.0 * data(i, 1), 1.0);
    const double b = data(i, 0) * data(i, 0) + data(i, 1) * data(i, 1);
    ata += w[i] * row * row.transpose();
    atb += w[i] * row * b;
  }
  const Vec3 sol = ata.ldlt().solve(atb);
  double cx = sol[0], cy = sol[1];
  double rho = std::sqrt(std::max(sol[2] + cx * cx + cy * cy, 1e-30));

  // Gauss-Newton on the geometric residual.
  for (int it = 0; it < 20; ++it) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Vec3 jtr = Vec3::Zero();
    for (Index i = 0; i < data.rows(); ++i) {
      if (w[i] <= 0.0) continue;
      const double dx = data(i, 0) - cx;
      const double dy = data(i, 1) - cy;
      const double dist = std::max(std::hypot(dx, dy), 1e-12);
      const double r = dist - rho;
      const Vec3 j(-dx / dist, -dy / dist, -1.0);
      jtj += w[i] * j * j.transpose();
      jtr += w[i] * j * r;
    }
    jtj.diagonal().array() += 1e-12;
    const Vec3 step = jtj.ldlt().solve(-jtr);
    cx += step[0];
    cy += step[1];
    rho += step[2];
    if (step.norm() < 1e-10 * (1.0 + std::abs(cx) + std::abs(cy) + std::abs(rho))) break;
  }
  ModelParams out;
  out.family = ModelFamily::kCircle2D;
  out.theta = Vecd(3);
  out.theta << cx, cy, std::abs(rho);
  return out;
}

}  // namespace

int minimal_sample_size(ModelFamily family) {
  switch (family) {
    case ModelFamily::kLine2D: return 2;
    case ModelFamily::kCircle2D: return 3;
    case ModelFamily::kHomography2D: return 4;
    case ModelFamily::kFundamental: return 8;
  }
  throw InvalidParams("unknown model family");
}

int datum_dim(ModelFamily family) {
  switch (family) {
    case ModelFamily::kLine2D:
    case ModelFamily::kCircle2D: return 2;
    case ModelFamily::kHomography2D:
    case ModelFamily::kFundamental: return 4;
  }
  throw InvalidParams("unknown model family");
}

std::string family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::kLine2D: return "line2d";
    case ModelFamily::kCircle2D: return "circle2d";
    case ModelFamily::kHomography2D: return "homography";
    case ModelFamily::kFundamental: return "fundamental";
  }
  throw InvalidParams("unknown model family");
}

ModelFamily family_from_name(const std::string& name) {
  if (name == "line2d") return ModelFamily::kLine2D;
  if (name == "circle2d") return ModelFamily::kCircle2D;
  if (name == "homography") return ModelFamily::kHomography2D;
  if (name == "fundamental") return ModelFamily::kFundamental;
  throw InvalidParams("unknown model family '" + name + "'");
}

double residual(const ModelParams& params, const Vecd& datum) {
  switch (params.family) {
    case ModelFamily::kLine2D: return line_residual(params.theta, datum);
    case ModelFamily::kCircle2D: return circle_residual(params.theta, datum);
    case ModelFamily::kHomography2D: {
      const Mat3 h = unpack3x3(params.theta);
      return homography_residual(h, invert_homography(h), datum);
    }
    case ModelFamily::kFundamental: return sampson_residual(unpack3x3(params.theta), datum);
  }
  throw InvalidParams("unknown model family");
}

Vecd residuals(const ModelParams& params, const Matd& data) {
  Vecd out(data.rows());
  if (params.family == ModelFamily::kHomography2D) {
    const Mat3 h = unpack3x3(params.theta);
    const Mat3 hinv = invert_homography(h);
    for (Index i = 0; i < data.rows(); ++i) {
      out[i] = homography_residual(h, hinv, data.row(i).transpose());
    }
    return out;
  }
  if (params.family == ModelFamily::kFundamental) {
    const Mat3 f = unpack3x3(params.theta);
    for (Index i = 0; i < data.rows(); ++i) {
      out[i] = sampson_residual(f, data.row(i).transpose());
    }
    return out;
  }
  for (Index i = 0; i < data.rows(); ++i) {
    out[i] = residual(params, data.row(i).transpose());
  }
  return out;
}

double soft_membership(double d, double sigma) {
  if (d > 3.0 * sigma) return 0.0;
  const double z = d / sigma;
  return std::exp(-0.5 * z * z);
}

Vecd memberships(const ModelParams& params, const Matd& data, double sigma) {
  Vecd r = residuals(params, data);
  for (Index i = 0; i < r.size(); ++i) r[i] = soft_membership(r[i], sigma);
  return r;
}

ModelParams fit_minimal(ModelFamily family, const Matd& sample) {
  const int b = minimal_sample_size(family);
  if (sample.rows() != b || sample.cols() != datum_dim(family)) {
    throw InvalidParams("fit_minimal: sample must be b x datum_dim");
  }
  switch (family) {
    case ModelFamily::kLine2D: return fit_line_minimal(sample);
    case ModelFamily::kCircle2D: return fit_circle_minimal(sample);
    case ModelFamily::kHomography2D: {
      const Matd pts1 = sample.leftCols(2);
      const Matd pts2 = sample.rightCols(2);
      const double s1 = bbox_diag(pts1), s2 = bbox_diag(pts2);
      check_triples_noncollinear(pts1, 1e-12 * std::max(s1 * s1, 1e-30));
      check_triples_noncollinear(pts2, 1e-12 * std::max(s2 * s2, 1e-30));
      return homography_from_dlt(pts1, pts2, Vecd::Ones(4), true);
    }
    case ModelFamily::kFundamental: {
      return fundamental_from_dlt(sample.leftCols(2), sample.rightCols(2),
                                  Vecd::Ones(8), true);
    }
  }
  throw InvalidParams("unknown model family");
}

ModelParams fit_weighted(ModelFamily family, const Matd& data, const Vecd& weights) {
  if (data.rows() != weights.size()) {
    throw LengthMismatch("fit_weighted: weights length must match data");
  }
  const int b = minimal_sample_size(family);
  Index support = 0;
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) ++support;
  }
  if (support < b) {
    throw InsufficientSupport("fit_weighted: fewer than b positive weights");
  }
  switch (family) {
    case ModelFamily::kLine2D: return fit_line_weighted(data, weights);
    case ModelFamily::kCircle2D: return fit_circle_weighted(data, weights);
    case ModelFamily::kHomography2D:
    case ModelFamily::kFundamental: {
      // Drop zero-weight rows; weighted Hartley normalization breaks down
      // only if every weighted point coincides, which the support check and
      // scatter of real data preclude.
      Matd pts1(support, 2), pts2(support, 2);
      Vecd w(support);
      Index k = 0;
      for (Index i = 0; i < data.rows(); ++i) {
        if (weights[i] <= 0.0) continue;
        pts1.row(k) = data.row(i).leftCols(2);
        pts2.row(k) = data.row(i).rightCols(2);
        w[k] = weights[i];
        ++k;
      }
      if (family == ModelFamily::kHomography2D) {
        return homography_from_dlt(pts1, pts2, w, false);
      }
      return fundamental_from_dlt(pts1, pts2, w, false);
    }
  }
  throw InvalidParams("unknown model family");
}

}  // namespace underfit
