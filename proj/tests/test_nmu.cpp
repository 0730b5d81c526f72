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

#include "underfit/nmu.hpp"
#include "underfit/rng.hpp"
#include "underfit/synth.hpp"

using namespace underfit;

namespace {

Matd random_matrix(Index rows, Index cols, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Matd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

// Straight-line transcription of the four update formulas with plain loops,
// independent of the library implementation.
struct PlainState {
  std::vector<double> u, v;
  std::vector<std::vector<double>> r, gamma;
};

PlainState plain_admm_step(const Matd& a, PlainState s, double gamma, double xi) {
  const std::size_t m = s.u.size(), n = s.v.size();
  std::vector<std::vector<double>> big_m(m, std::vector<double>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      big_m[i][j] = a(static_cast<Index>(i), static_cast<Index>(j)) - s.r[i][j] +
                    s.gamma[i][j] / gamma;
  double vtv = 0.0;
  for (double x : s.v) vtv += x * x;
  std::vector<double> u(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += big_m[i][j] * s.v[j];
    u[i] = std::max(acc / vtv, 0.0);
  }
  double umax = 0.0;
  for (double x : u) umax = std::max(umax, x);
  for (auto& x : u) x /= umax;
  for (auto& x : s.v) x *= umax;
  double utu = 0.0;
  for (double x : u) utu += x * x;
  std::vector<double> v(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += u[i] * big_m[i][j];
    v[j] = std::max(acc / utu, 0.0);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double gap = a(static_cast<Index>(i), static_cast<Index>(j)) - u[i] * v[j];
      s.r[i][j] = std::max((gamma * gap + s.gamma[i][j]) / (1.0 + gamma), 0.0);
      s.gamma[i][j] += xi * gamma * (gap - s.r[i][j]);
    }
  }
  s.u = u;
  s.v = v;
  return s;
}

}  // namespace

TEST_SUITE("nmu") {

TEST_CASE("admm_step fixed point on an exactly representable matrix") {
  Matd a(1, 1);
  a << 1.0;
  NmuState state;
  state.u = Vecd::Ones(1);
  state.v = Vecd::Ones(1);
  state.R = Matd::Zero(1, 1);
  state.Gamma = Matd::Zero(1, 1);
  const NmuState next = admm_step(a, state, NmuConfig{});
  CHECK(next.u[0] == doctest::Approx(1.0));
  CHECK(next.v[0] == doctest::Approx(1.0));
  CHECK(next.R(0, 0) == doctest::Approx(0.0));
  CHECK(next.Gamma(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("u-update projects negative entries to exact zero") {
  Matd m(3, 2);
  m << 1, 1, -4, -4, 2, 2;
  Vecd v(2);
  v << 1, 1;
  const Vecd u = nmu_update_u(m, v);
  CHECK(u[0] > 0.0);
  CHECK(u[1] == 0.0);
  CHECK(u[2] > 0.0);
}

TEST_CASE("one admm_step matches an independent transcription of the updates") {
  Matd a(2, 2);
  a << 1, 0, 0, 1;
  auto [u0, v0] = init_svd(a);

  NmuState state;
  state.u = u0;
  state.v = v0;
  state.R = project_nonneg(a - u0 * v0.transpose());
  state.Gamma = Matd::Zero(2, 2);

  PlainState plain;
  plain.u = {u0[0], u0[1]};
  plain.v = {v0[0], v0[1]};
  plain.r = {{state.R(0, 0), state.R(0, 1)}, {state.R(1, 0), state.R(1, 1)}};
  plain.gamma = {{0, 0}, {0, 0}};

  const NmuConfig cfg;
  const NmuState next = admm_step(a, state, cfg);
  const PlainState expected = plain_admm_step(a, plain, cfg.gamma, cfg.xi);

  for (int i = 0; i < 2; ++i) {
    CHECK(next.u[i] == doctest::Approx(expected.u[static_cast<std::size_t>(i)]).epsilon(1e-14));
    CHECK(next.v[i] == doctest::Approx(expected.v[static_cast<std::size_t>(i)]).epsilon(1e-14));
    for (int j = 0; j < 2; ++j) {
      CHECK(next.R(i, j) ==
            doctest::Approx(expected.r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                .epsilon(1e-14));
      CHECK(next.Gamma(i, j) ==
            doctest::Approx(
                expected.gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
                .epsilon(1e-14));
    }
  }
}

TEST_CASE("rescale keeps the rank-one product unchanged") {
  Rng rng(19);
  Vecd u(4), v(3);
  for (Index i = 0; i < 4; ++i) u[i] = rng.uniform(0.1, 2.0);
  for (Index j = 0; j < 3; ++j) v[j] = rng.uniform(0.1, 2.0);
  const Matd before = u * v.transpose();
  rescale_max_u(u, v);
  CHECK(u.maxCoeff() == doctest::Approx(1.0).epsilon(1e-15));
  const Matd after = u * v.transpose();
  CHECK((before - after).norm() <= 1e-12 * before.norm());
}

TEST_CASE("init_svd on an exact outer product") {
  Vecd a(2), b(2);
  a << 1, 2;
  b << 1, 1;
  const Matd m = a * b.transpose();
  auto [u0, v0] = init_svd(m);
  CHECK(u0[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(u0[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(v0[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(v0[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("init_svd on a 1x1 matrix and on random input") {
  Matd one(1, 1);
  one << 1.0;
  auto [u0, v0] = init_svd(one);
  CHECK(u0[0] == doctest::Approx(1.0));
  CHECK(v0[0] == doctest::Approx(1.0));

  Rng rng(23);
  const Matd a = random_matrix(5, 4, rng);
  auto [ur, vr] = init_svd(a);
  const Svd1 svd = rank_one_svd(a);
  const Matd best = svd.s * svd.x * svd.y.transpose();
  CHECK((ur * vr.transpose() - best).norm() < 1e-8);
  CHECK(ur.maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solve_rank_one recovers an exact rank-one matrix") {
  Rng rng(31);
  Vecd a(12), b(9);
  for (Index i = 0; i < a.size(); ++i) a[i] = rng.uniform(0.1, 1.0);
  for (Index j = 0; j < b.size(); ++j) b[j] = rng.uniform(0.1, 1.0);
  const Matd m = a * b.transpose();
  const NmuFactor f = solve_rank_one(m, NmuConfig{});
  CHECK(f.converged);
  CHECK((m - f.u * f.v.transpose()).norm() / m.norm() < 1e-6);
}

TEST_CASE("solve_rank_one keeps disjoint blocks apart") {
  // Two disjoint blocks; the factor must stay on one and leave the other in
  // the residual.
  Matd a = Matd::Zero(8, 8);
  a.block(0, 0, 4, 4).setConstant(2.0);
  a.block(4, 4, 4, 4).setConstant(1.0);
  const NmuFactor f = solve_rank_one(a, NmuConfig{});
  const Matd residual = a - f.u * f.v.transpose();
  CHECK(residual.minCoeff() >= -1e-6 * a.maxCoeff());
  const double block1 = residual.block(0, 0, 4, 4).norm();
  const double block2 = residual.block(4, 4, 4, 4).norm();
  // One block captured (near zero residual), the other intact.
  const double captured = std::min(block1, block2);
  const double remaining = std::max(block1, block2);
  CHECK(captured < 1e-6 * a.norm());
  CHECK(remaining > 0.9 * std::min(a.block(0, 0, 4, 4).norm(), a.block(4, 4, 4, 4).norm()));
}

TEST_CASE("solve_rank_one feasibility on random matrices") {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const Index rows = 10 + static_cast<Index>(rng.uniform_index(30));
    const Index cols = 8 + static_cast<Index>(rng.uniform_index(20));
    const Matd a = random_matrix(rows, cols, rng);
    NmuConfig cfg;
    const NmuFactor f = solve_rank_one(a, cfg);
    CHECK((a - f.u * f.v.transpose()).minCoeff() >= 0.0);  // polished: exact

    cfg.polish = false;
    const NmuFactor raw = solve_rank_one(a, cfg);
    CHECK(raw.u.maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero matrix raises ZeroMatrix") {
  const Matd zero = Matd::Zero(4, 3);
  CHECK_THROWS_AS(solve_rank_one(zero, NmuConfig{}), ZeroMatrix);
  CHECK_THROWS_AS(extract_factors(zero, 2), ZeroMatrix);
}

TEST_CASE("scaling convention holds at every iterate") {
  Rng rng(13);
  const Matd a = random_matrix(12, 10, rng);
  NmuState state;
  auto [u0, v0] = init_svd(a);
  state.u = u0;
  state.v = v0;
  state.R = project_nonneg(a - u0 * v0.transpose());
  state.Gamma = Matd::Zero(a.rows(), a.cols());
  const NmuConfig cfg;
  for (int k = 0; k < 50; ++k) {
    state = admm_step(a, state, cfg);
    CHECK(std::abs(state.u.maxCoeff() - 1.0) <= 1e-12);
    CHECK(state.u.minCoeff() >= 0.0);
    CHECK(state.v.minCoeff() >= 0.0);
    CHECK(state.R.minCoeff() >= 0.0);
  }
}

TEST_CASE("block updates minimize the augmented Lagrangian along feasible directions") {
  Rng rng(101);
  const NmuConfig cfg;
  for (int trial = 0; trial < 10; ++trial) {
    const Matd a = random_matrix(7, 6, rng);
    Vecd u = Vecd::NullaryExpr(7, [&](Index) { return rng.uniform(); });
    Vecd v = Vecd::NullaryExpr(6, [&](Index) { return rng.uniform(); });
    rescale_max_u(u, v);
    const Matd r = project_nonneg(random_matrix(7, 6, rng, -0.5, 0.5));
    const Matd gam = random_matrix(7, 6, rng, -0.5, 0.5);
    const Matd m = a - r + gam / cfg.gamma;

    const Vecd u_star = nmu_update_u(m, v);
    const double base_u = augmented_lagrangian(a, u_star, v, r, gam, cfg.gamma);
    const Vecd v_star = nmu_update_v(m, u_star);
    const double base_v = augmented_lagrangian(a, u_star, v_star, r, gam, cfg.gamma);
    const Matd r_star = nmu_update_R(a, u_star, v_star, gam, cfg.gamma);
    const double base_r = augmented_lagrangian(a, u_star, v_star, r_star, gam, cfg.gamma);

    for (int probe = 0; probe < 8; ++probe) {
      const double t = 1e-4;
      Vecd du = Vecd::NullaryExpr(7, [&](Index) { return rng.uniform(-1.0, 1.0); });
      for (Index i = 0; i < du.size(); ++i) {
        if (u_star[i] == 0.0) du[i] = std::abs(du[i]);  // feasible direction
      }
      CHECK(augmented_lagrangian(a, u_star + t * du, v, r, gam, cfg.gamma) >=
            base_u - 1e-9);

      Vecd dv = Vecd::NullaryExpr(6, [&](Index) { return rng.uniform(-1.0, 1.0); });
      for (Index j = 0; j < dv.size(); ++j) {
        if (v_star[j] == 0.0) dv[j] = std::abs(dv[j]);
      }
      CHECK(augmented_lagrangian(a, u_star, v_star + t * dv, r, gam, cfg.gamma) >=
            base_v - 1e-9);

      Matd dr = random_matrix(7, 6, rng, -1.0, 1.0);
      for (Index i = 0; i < dr.rows(); ++i)
        for (Index j = 0; j < dr.cols(); ++j)
          if (r_star(i, j) == 0.0) dr(i, j) = std::abs(dr(i, j));
      CHECK(augmented_lagrangian(a, u_star, v_star, r_star + t * dr, gam, cfg.gamma) >=
            base_r - 1e-9);
    }
  }
}

TEST_CASE("extract_factors reconstructs disjoint-support sums") {
  Matd a = Matd::Zero(9, 6);
  Rng rng(3);
  for (int t = 0; t < 3; ++t) {
    Vecd u = Vecd::Zero(9), v = Vecd::Zero(6);
    for (Index i = 3 * t; i < 3 * (t + 1); ++i) u[i] = rng.uniform(0.5, 1.0);
    for (Index j = 2 * t; j < 2 * (t + 1); ++j) v[j] = rng.uniform(0.5, 1.0);
    a += u * v.transpose();
  }
  const auto factors = extract_factors(a, 3);
  Matd rec = Matd::Zero(9, 6);
  for (const auto& f : factors) rec += f.u * f.v.transpose();
  CHECK((a - rec).norm() / a.norm() < 1e-6);
}

TEST_CASE("digit images are perfectly reconstructed by five factors") {
  const DigitsToy toy = make_digits_matrix();
  NmuConfig cfg;
  cfg.tau = 1e-7;
  cfg.max_iters = 2000;
  const auto factors = extract_factors(toy.a, 5, cfg);
  REQUIRE(factors.size() == 5);
  Matd rec = Matd::Zero(toy.a.rows(), toy.a.cols());
  for (const auto& f : factors) rec += f.u * f.v.transpose();
  CHECK((toy.a - rec).norm() / toy.a.norm() < 1e-6);

  // Each left factor support matches exactly one part mask.
  for (const auto& f : factors) {
    double best_jaccard = 0.0;
    for (const auto& mask : toy.parts) {
      Index inter = 0, uni = 0;
      for (Index i = 0; i < mask.size(); ++i) {
        const bool in_factor = f.u[i] > 1e-3;
        const bool in_mask = mask[i] > 0.5;
        inter += (in_factor && in_mask);
        uni += (in_factor || in_mask);
      }
      if (uni > 0) best_jaccard = std::max(best_jaccard, double(inter) / double(uni));
    }
    CHECK(best_jaccard >= 0.99);
  }
}

TEST_CASE("requesting more factors than needed stops early with tiny factors") {
  Matd a = Matd::Zero(6, 6);
  Vecd u = Vecd::Zero(6), v = Vecd::Zero(6);
  u.head(3).setConstant(1.0);
  v.head(3).setConstant(2.0);
  a += u * v.transpose();
  const auto factors = extract_factors(a, 5);
  REQUIRE(!factors.empty());
  Matd rec = Matd::Zero(6, 6);
  for (const auto& f : factors) rec += f.u * f.v.transpose();
  CHECK((a - rec).norm() / a.norm() < 1e-6);
  for (std::size_t t = 1; t < factors.size(); ++t) {
    CHECK((factors[t].u * factors[t].v.transpose()).norm() <= 1e-6 * a.norm());
  }
}

TEST_CASE("zero rows and columns of the input stay zero in the factor") {
  Rng rng(9);
  Matd a = random_matrix(6, 5, rng);
  a.row(2).setZero();
  a.col(3).setZero();
  const NmuFactor f = solve_rank_one(a, NmuConfig{});
  CHECK(f.u[2] == 0.0);
  CHECK(f.v[3] == 0.0);
}

TEST_CASE("convergence plateau on dominated low-rank-plus-noise input") {
  int violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(100 + static_cast<std::uint64_t>(trial));
    const Index m = 50, n = 40;
    Vecd u1(m), v1(n);
    for (Index i = 0; i < m; ++i) u1[i] = 0.5 + rng.uniform();
    for (Index j = 0; j < n; ++j) v1[j] = 0.5 + rng.uniform();
    Matd a = 3.0 * u1 * v1.transpose();
    a += 0.4 * random_matrix(m, 1, rng) * random_matrix(1, n, rng);
    a += 0.2 * random_matrix(m, 1, rng) * random_matrix(1, n, rng);
    a += 0.02 * random_matrix(m, n, rng);

    NmuConfig cfg;
    cfg.tau = 1e-16;
    cfg.max_iters = 500;
    cfg.record_history = true;
    cfg.polish = false;
    const NmuFactor f = solve_rank_one(a, cfg);
    REQUIRE(f.history.size() == 500);
    const double h50 = f.history[49];
    const double h500 = f.history[499];
    violations += (std::abs(h50 - h500) > 0.05 * h500);
  }
  CHECK(violations == 0);
}

TEST_CASE("energy decomposition never exceeds the input energy") {
  Rng rng(55);
  const Matd a = random_matrix(20, 15, rng);
  const auto factors = extract_factors(a, 4);
  Matd rec = Matd::Zero(a.rows(), a.cols());
  double energy = 0.0;
  for (const auto& f : factors) {
    energy += (f.u * f.v.transpose()).squaredNorm();
    rec += f.u * f.v.transpose();
  }
  energy += (a - rec).squaredNorm();
  CHECK(energy <= a.squaredNorm() * (1.0 + 1e-6));
}

TEST_CASE("later factors are sparse on low-rank-plus-noise data") {
  // Localized structure on top of a dense global component: the trailing
  // factors concentrate on parts while the first stays dense.
  Rng rng(140);
  const Index m = 60, n = 30;
  Vecd dense_u(m), dense_v(n);
  for (Index i = 0; i < m; ++i) dense_u[i] = 0.6 + rng.uniform(0.0, 0.4);
  for (Index j = 0; j < n; ++j) dense_v[j] = 0.6 + rng.uniform(0.0, 0.4);
  Matd a = 2.0 * dense_u * dense_v.transpose();
  Vecd block_u = Vecd::Zero(m), block_v = Vecd::Zero(n);
  block_u.segment(0, 15).setConstant(1.0);
  block_v.segment(0, 8).setConstant(1.0);
  a += 0.8 * block_u * block_v.transpose();
  Vecd block_u2 = Vecd::Zero(m), block_v2 = Vecd::Zero(n);
  block_u2.segment(30, 12).setConstant(1.0);
  block_v2.segment(15, 6).setConstant(1.0);
  a += 0.7 * block_u2 * block_v2.transpose();
  a += 0.01 * random_matrix(m, n, rng);

  const auto factors = extract_factors(a, 3);
  REQUIRE(factors.size() == 3);
  auto zero_fraction = [](const Vecd& u) {
    Index zeros = 0;
    for (Index i = 0; i < u.size(); ++i) zeros += (u[i] <= 1e-8);
    return static_cast<double>(zeros) / static_cast<double>(u.size());
  };
  CHECK(zero_fraction(factors[0].u) <= 0.1);
  CHECK(zero_fraction(factors[1].u) >= 0.5);
  CHECK(zero_fraction(factors[2].u) >= 0.5);
}

}  // TEST_SUITE
