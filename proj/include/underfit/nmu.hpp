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

#ifndef UNDERFIT_NMU_HPP_
#define UNDERFIT_NMU_HPP_

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "underfit/errors.hpp"
#include "underfit/linalg.hpp"
#include "underfit/types.hpp"

namespace underfit {

// Rank-one nonnegative matrix underapproximation,
//
//   min 1/2 ||A - u v^T||_F^2   s.t.  u, v >= 0,  A >= u v^T,
//
// solved by ADMM on the split R = A - u v^T with multiplier Gamma and
// penalty gamma. All four block updates have closed forms.

struct NmuConfig {
  double gamma = 1.0;      // augmented Lagrangian penalty
  double xi = 1.0;         // dual step scale, in (0, 2]
  double tau = 1e-5;       // relative-change tolerance on u and v
  int max_iters = 500;
  bool record_history = false;  // keep ||R||_F / ||A||_F per iteration
  bool polish = true;           // exact feasibility polish after the loop
  double u_floor = 1e-6;        // support floor used by the polish
};

inline void validate(const NmuConfig& cfg) {
  if (!(cfg.gamma > 0.0)) throw InvalidParams("NmuConfig: gamma must be > 0");
  if (!(cfg.xi > 0.0 && cfg.xi <= 2.0)) throw InvalidParams("NmuConfig: xi must be in (0, 2]");
  if (!(cfg.tau > 0.0)) throw InvalidParams("NmuConfig: tau must be > 0");
  if (cfg.max_iters < 1) throw InvalidParams("NmuConfig: max_iters must be >= 1");
}

struct NmuState {
  Vecd u;      // length m, scaled so max(u) = 1 whenever u != 0
  Vecd v;      // length n, nonnegative
  Matd R;      // m x n nonnegative residual block
  Matd Gamma;  // m x n multiplier
  int iter = 0;
};

struct NmuFactor {
  Vecd u;
  Vecd v;
  int iterations_used = 0;
  std::vector<double> history;  // relative residual ||R||_F / ||A||_F
  bool converged = false;

  bool is_zero() const { return u.size() == 0 || u.maxCoeff() <= 0.0; }
};

inline double augmented_lagrangian(const Matd& a, const Vecd& u, const Vecd& v,
                                   const Matd& r, const Matd& gamma_mat,
                                   double gamma) {
  const Matd slack = a - u * v.transpose() - r;
  return 0.5 * r.squaredNorm() + gamma_mat.cwiseProduct(slack).sum() +
         0.5 * gamma * slack.squaredNorm();
}

// Exact minimizer of the augmented Lagrangian over u >= 0 with everything
// else fixed; M = A - R + Gamma / gamma.
inline Vecd nmu_update_u(const Matd& m, const Vecd& v) {
  const double vtv = v.squaredNorm();
  if (vtv < 1e-30) throw DegenerateFactor("nmu: v collapsed to zero");
  return project_nonneg((m * v) / vtv);
}

inline Vecd nmu_update_v(const Matd& m, const Vecd& u) {
  const double utu = u.squaredNorm();
  if (utu < 1e-30) throw DegenerateFactor("nmu: u collapsed to zero");
  return project_nonneg((m.transpose() * u) / utu);
}

inline Matd nmu_update_R(const Matd& a, const Vecd& u, const Vecd& v,
                         const Matd& gamma_mat, double gamma) {
  return project_nonneg((gamma * (a - u * v.transpose()) + gamma_mat) / (1.0 + gamma));
}

// Fixes the scaling indeterminacy: max(u) = 1, with the scale moved into v
// so that u v^T is unchanged.
inline void rescale_max_u(Vecd& u, Vecd& v) {
  const double umax = u.maxCoeff();
  if (umax <= 0.0) throw DegenerateFactor("nmu: u collapsed to zero");
  u /= umax;
  v *= umax;
}

// One full ADMM sweep: u, rescale, v, R, dual. M is evaluated once from the
// incoming (R, Gamma).
inline NmuState admm_step(const Matd& a, NmuState state, const NmuConfig& cfg) {
  const Matd m = a - state.R + state.Gamma / cfg.gamma;
  Vecd u = nmu_update_u(m, state.v);
  Vecd v = std::move(state.v);
  rescale_max_u(u, v);
  v = nmu_update_v(m, u);
  const Matd uv = u * v.transpose();
  state.R = project_nonneg((cfg.gamma * (a - uv) + state.Gamma) / (1.0 + cfg.gamma));
  state.Gamma += cfg.xi * cfg.gamma * (a - uv - state.R);
  state.u = std::move(u);
  state.v = std::move(v);
  ++state.iter;
  return state;
}

// SVD initialization: u0 = x / ||x||_inf, v0 = ||x||_inf * s * y.
// Magnitudes below 1e-14 are clamped to zero and residual round-off
// negatives are projected out.
inline std::pair<Vecd, Vecd> init_svd(const Matd& a) {
  const Svd1 svd = rank_one_svd(a);
  const double xinf = inf_norm(svd.x);
  Vecd u0 = svd.x / xinf;
  Vecd v0 = xinf * svd.s * svd.y;
  auto clamp_dust = [](Vecd& w) {
    for (Index i = 0; i < w.size(); ++i) {
      if (std::abs(w[i]) < 1e-14) w[i] = 0.0;
    }
    w = w.cwiseMax(0.0);
  };
  clamp_dust(u0);
  clamp_dust(v0);
  return {std::move(u0), std::move(v0)};
}

// Shrinks (u, v) so that A >= u v^T holds exactly: u entries below u_floor
// are zeroed, then every positive load v_j is capped by
// min_{i: u_i > 0} A_ij / u_i.
inline void polish_feasibility(const Matd& a, Vecd& u, Vecd& v, double u_floor) {
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] < u_floor) u[i] = 0.0;
  }
  if (u.maxCoeff() <= 0.0) {
    v.setZero();
    return;
  }
  Vecd bound = Vecd::Constant(v.size(), std::numeric_limits<double>::infinity());
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) {
      bound = bound.cwiseMin(a.row(i).transpose() / u[i]);
    }
  }
  v = v.cwiseMin(bound.cwiseMax(0.0));
}

// Runs ADMM from (u0, v0) with R = P+(A - u0 v0^T), Gamma = 0 until the
// relative change in both u and v falls below tau. A collapsed factor is
// returned as the zero factor with converged = false.
inline NmuFactor solve_rank_one(const Matd& a, Vecd u0, Vecd v0, const NmuConfig& cfg) {
  validate(cfg);
  const double norm_a = a.norm();
  if (norm_a == 0.0) throw ZeroMatrix("solve_rank_one: zero matrix");

  NmuFactor out;
  NmuState state;
  state.u = std::move(u0);
  state.v = std::move(v0);
  state.R = project_nonneg(a - state.u * state.v.transpose());
  state.Gamma = Matd::Zero(a.rows(), a.cols());

  constexpr double kEps = 1e-12;
  try {
    for (int k = 0; k < cfg.max_iters; ++k) {
      const Vecd u_prev = state.u;
      const Vecd v_prev = state.v;
      state = admm_step(a, std::move(state), cfg);
      if (cfg.record_history) {
        out.history.push_back(state.R.norm() / norm_a);
      }
      const double du = (state.u - u_prev).norm() / std::max(u_prev.norm(), kEps);
      const double dv = (state.v - v_prev).norm() / std::max(v_prev.norm(), kEps);
      if (du < cfg.tau && dv < cfg.tau) {
        out.converged = true;
        break;
      }
    }
  } catch (const DegenerateFactor&) {
    out.u = Vecd::Zero(a.rows());
    out.v = Vecd::Zero(a.cols());
    out.iterations_used = state.iter;
    out.converged = false;
    return out;
  }
  out.u = std::move(state.u);
  out.v = std::move(state.v);
  out.iterations_used = state.iter;
  if (cfg.polish) {
    polish_feasibility(a, out.u, out.v, cfg.u_floor);
  }
  return out;
}

inline NmuFactor solve_rank_one(const Matd& a, const NmuConfig& cfg = {}) {
  auto [u0, v0] = init_svd(a);
  return solve_rank_one(a, std::move(u0), std::move(v0), cfg);
}

// Multi-factor extraction: solve, deflate A <- P+(A - u v^T), repeat.
// Stops early once the residual norm drops below 1e-12 of the input norm or
// a factor collapses to zero.
inline std::vector<NmuFactor> extract_factors(const Matd& a, int r, const NmuConfig& cfg = {}) {
  if (r < 1) throw InvalidParams("extract_factors: r must be >= 1");
  std::vector<NmuFactor> factors;
  const double norm0 = a.norm();
  if (norm0 == 0.0) throw ZeroMatrix("extract_factors: zero matrix");
  Matd residual = a;
  for (int t = 0; t < r; ++t) {
    if (residual.norm() < 1e-12 * norm0) break;
    auto [u0, v0] = init_svd(residual);
    NmuFactor factor = solve_rank_one(residual, std::move(u0), std::move(v0), cfg);
    const bool zero = factor.is_zero();
    factors.push_back(std::move(factor));
    if (zero) break;
    residual = project_nonneg(residual - factors.back().u * factors.back().v.transpose());
  }
  return factors;
}

}  // namespace underfit

#endif  // UNDERFIT_NMU_HPP_
