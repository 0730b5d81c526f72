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

#ifndef UNDERFIT_LINALG_HPP_
#define UNDERFIT_LINALG_HPP_

#include <cmath>

#include "underfit/errors.hpp"
#include "underfit/types.hpp"

namespace underfit {

// Entrywise projection onto the nonnegative orthant.
template <typename Derived>
auto project_nonneg(const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  return b.cwiseMax(Scalar(0));
}

template <typename Derived>
typename Derived::Scalar frobenius_norm(const Eigen::MatrixBase<Derived>& b) {
  return b.norm();
}

template <typename Derived>
typename Derived::Scalar inf_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().maxCoeff();
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dot(const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b) {
  return a.dot(b);
}

template <typename DerivedA, typename DerivedB>
auto outer(const Eigen::MatrixBase<DerivedA>& a,
           const Eigen::MatrixBase<DerivedB>& b) {
  return (a * b.transpose()).eval();
}

template <typename DerivedA, typename DerivedB>
auto matvec(const Eigen::MatrixBase<DerivedA>& m,
            const Eigen::MatrixBase<DerivedB>& v) {
  return (m * v).eval();
}

template <typename DerivedA, typename DerivedB>
auto vecmat(const Eigen::MatrixBase<DerivedA>& v,
            const Eigen::MatrixBase<DerivedB>& m) {
  return (m.transpose() * v).eval();
}

// Dominant singular triple (x, s, y) with unit x, y and s >= 0.
struct Svd1 {
  Vecd x;
  double s = 0.0;
  Vecd y;
  int iterations = 0;
  bool converged = false;
};

// Rank-one SVD by power iteration on the Gram operator of the smaller side.
// Deterministic: starts from the row-sum vector (aligned with the Perron
// vector for nonnegative input), falling back to canonical basis vectors if
// the iterate collapses. Convergence is measured on the Rayleigh quotient.
// Sign convention: the largest-magnitude entry of x is positive, ties broken
// by lowest index. Throws ZeroMatrix on all-zero input; a run that exhausts
// max_iters is returned with converged = false.
inline Svd1 rank_one_svd(const Matd& a, double tol = 1e-10, int max_iters = 1000) {
  const double norm_a = a.norm();
  if (norm_a == 0.0) throw ZeroMatrix("rank_one_svd: zero matrix");
  const Index rows = a.rows();
  const Index cols = a.cols();
  const bool iterate_rows = rows <= cols;
  const Index dim = iterate_rows ? rows : cols;

  const double tiny = 1e-280 * norm_a;
  auto apply_gram = [&](const Vecd& w) -> Vecd {
    if (iterate_rows) return a * (a.transpose() * w);
    return a.transpose() * (a * w);
  };

  Vecd z = a.rowwise().sum();
  if (!iterate_rows) z = a.transpose() * z;
  Index fallback = 0;
  if (z.norm() <= tiny) {
    z = Vecd::Ones(dim);
  }

  Svd1 out;
  double rayleigh = 0.0;
  int k = 0;
  for (; k < max_iters; ++k) {
    Vecd w = apply_gram(z);
    double wn = w.norm();
    while (wn <= tiny && fallback < dim) {
      z = Vecd::Unit(dim, fallback++);
      w = apply_gram(z);
      wn = w.norm();
    }
    if (wn <= tiny) break;
    z = w / wn;
    const double next = z.dot(apply_gram(z));
    if (k > 0 && std::abs(next - rayleigh) <= tol * std::max(next, 1e-300)) {
      rayleigh = next;
      out.converged = true;
      ++k;
      break;
    }
    rayleigh = next;
  }
  out.iterations = k;

  Vecd x, y;
  double s;
  if (iterate_rows) {
    x = z;
    Vecd w = a.transpose() * x;
    s = w.norm();
    y = s > 0.0 ? Vecd(w / s) : Vecd::Unit(cols, 0);
  } else {
    y = z;
    Vecd w = a * y;
    s = w.norm();
    x = s > 0.0 ? Vecd(w / s) : Vecd::Unit(rows, 0);
  }

  Index imax = 0;
  double best = -1.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x[i]);
    if (mag > best) {
      best = mag;
      imax = i;
    }
  }
  if (x[imax] < 0.0) {
    x = -x;
    y = -y;
  }
  out.x = std::move(x);
  out.s = s;
  out.y = std::move(y);
  return out;
}

}  // namespace underfit

#endif  // UNDERFIT_LINALG_HPP_
