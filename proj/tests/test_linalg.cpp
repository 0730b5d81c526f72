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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>

#include "underfit/csv.hpp"
#include "underfit/linalg.hpp"
#include "underfit/rng.hpp"

using namespace underfit;

namespace {

Matd random_matrix(Index rows, Index cols, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Matd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("project_nonneg matches the entrywise definition") {
  Matd b(2, 2);
  b << -1, 2, 0.5, -3;
  Matd expected(2, 2);
  expected << 0, 2, 0.5, 0;
  CHECK((project_nonneg(b) - expected).norm() == 0.0);

  Matd nonneg(2, 2);
  nonneg << 1, 0, 2, 3;
  CHECK((project_nonneg(nonneg) - nonneg).norm() == 0.0);

  Matd negative = -nonneg.array().max(0.5).matrix();
  CHECK(project_nonneg(negative).norm() == 0.0);
}

TEST_CASE("project_nonneg is idempotent and is the Euclidean projection") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Matd b = random_matrix(4, 5, rng, -2.0, 2.0);
    const Matd pb = project_nonneg(b);
    CHECK((project_nonneg(pb) - pb).norm() == 0.0);
    for (int c = 0; c < 10; ++c) {
      const Matd candidate = random_matrix(4, 5, rng, 0.0, 2.0);
      CHECK((b - pb).norm() <= (b - candidate).norm() + 1e-15);
    }
  }
}

TEST_CASE("norms and products") {
  Matd m(1, 2);
  m << 3, 4;
  CHECK(frobenius_norm(m) == doctest::Approx(5.0));

  Vecd v(2);
  v << -2, 1;
  CHECK(inf_norm(v) == doctest::Approx(2.0));

  Vecd a(2), b(2);
  a << 1, 2;
  b << 3, 4;
  Matd expected(2, 2);
  expected << 3, 4, 6, 8;
  CHECK((outer(a, b) - expected).norm() == 0.0);
  CHECK(dot(a, b) == doctest::Approx(11.0));

  Vecd mv = matvec(expected, a);
  CHECK(mv[0] == doctest::Approx(11.0));
  CHECK(mv[1] == doctest::Approx(22.0));
  Vecd vm = vecmat(a, expected);
  CHECK(vm[0] == doctest::Approx(15.0));
  CHECK(vm[1] == doctest::Approx(20.0));
}

TEST_CASE("rank_one_svd on a diagonal matrix") {
  Matd a(2, 2);
  a << 2, 0, 0, 1;
  const Svd1 svd = rank_one_svd(a, 1e-14, 2000);
  CHECK(svd.converged);
  CHECK(svd.s == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(svd.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(std::abs(svd.x[1]) < 1e-5);
  CHECK(svd.y[0] == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("rank_one_svd recovers an exact outer product") {
  Vecd a(2), b(2);
  a << 1, 2;
  b << 3, 1;
  const Matd m = a * b.transpose();
  const Svd1 svd = rank_one_svd(m);
  CHECK(svd.s == doctest::Approx(std::sqrt(5.0) * std::sqrt(10.0)).epsilon(1e-12));
  CHECK((svd.x - a / a.norm()).norm() < 1e-10);
  CHECK((svd.y - b / b.norm()).norm() < 1e-10);
}

TEST_CASE("rank_one_svd matches a dense eigensolver oracle on the Gram matrix") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Matd a = random_matrix(8, 6, rng);
    const Svd1 svd = rank_one_svd(a, 1e-14, 5000);

    Eigen::MatrixXd gram = (a.transpose() * a).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    const double s_oracle = std::sqrt(eig.eigenvalues().maxCoeff());
    Eigen::VectorXd y_oracle = eig.eigenvectors().col(5);
    if (y_oracle.sum() < 0) y_oracle = -y_oracle;

    CHECK(std::abs(svd.s - s_oracle) < 1e-8);
    CHECK((svd.y - y_oracle).cwiseAbs().maxCoeff() < 1e-6);
    const Eigen::VectorXd x_oracle = a * y_oracle / s_oracle;
    CHECK((svd.x - x_oracle).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("rank_one_svd residual optimality identity") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matd a = random_matrix(6, 5, rng, -1.0, 1.0);
    if (a.norm() == 0.0) continue;
    const Svd1 svd = rank_one_svd(a, 1e-13, 5000);
    const double lhs = (a - svd.s * svd.x * svd.y.transpose()).squaredNorm();
    const double rhs = a.squaredNorm() - svd.s * svd.s;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("rank_one_svd Perron-Frobenius nonnegativity") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Index rows = 2 + static_cast<Index>(rng.uniform_index(8));
    const Index cols = 2 + static_cast<Index>(rng.uniform_index(8));
    const Matd a = random_matrix(rows, cols, rng);
    const Svd1 svd = rank_one_svd(a);
    CHECK(svd.x.minCoeff() >= -1e-10);
    CHECK(svd.y.minCoeff() >= -1e-10);
  }
}

TEST_CASE("rank_one_svd rejects the zero matrix") {
  const Matd zero = Matd::Zero(3, 3);
  CHECK_THROWS_AS(rank_one_svd(zero), ZeroMatrix);
}

TEST_CASE("csv round trip") {
  Rng rng(5);
  const Matd m = random_matrix(7, 3, rng, -5.0, 5.0);
  const std::string path = "test_linalg_roundtrip.csv";
  write_matrix_csv(path, m);
  const Matd back = read_matrix_csv(path);
  CHECK((m - back).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("csv reader rejects ragged and malformed input") {
  const std::string path = "test_linalg_bad.csv";
  {
    std::ofstream out(path);
    out << "1,2,3\n4,5\n";
  }
  CHECK_THROWS_AS(read_matrix_csv(path), ParseError);
  {
    std::ofstream out(path);
    out << "1,2\n3,nan\n";
  }
  CHECK_THROWS_AS(read_matrix_csv(path), ParseError);
  {
    std::ofstream out(path);
    out << "1,2\n3,abc\n";
  }
  CHECK_THROWS_AS(read_matrix_csv(path), ParseError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_matrix_csv("does_not_exist.csv"), IoError);
}

}  // TEST_SUITE
