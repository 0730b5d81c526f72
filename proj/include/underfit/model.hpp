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

#ifndef UNDERFIT_MODEL_HPP_
#define UNDERFIT_MODEL_HPP_

#include <string>

#include "underfit/types.hpp"

namespace underfit {

// Parametric model families. Data are matrix rows: a 2D point for lines and
// circles, an (x, y, x', y') correspondence for homographies and fundamental
// matrices.
enum class ModelFamily {
  kLine2D,       // theta = (cos a, sin a, c), unit normal, {x : n.x + c = 0}
  kCircle2D,     // theta = (cx, cy, rho), rho > 0
  kHomography2D, // theta = 9 entries of H, row-major, ||H||_F = 1
  kFundamental,  // theta = 9 entries of F, row-major, ||F||_F = 1, rank 2
};

int minimal_sample_size(ModelFamily family);  // b: 2, 3, 4, 8
int datum_dim(ModelFamily family);            // 2, 2, 4, 4
std::string family_name(ModelFamily family);
ModelFamily family_from_name(const std::string& name);

struct ModelParams {
  ModelFamily family = ModelFamily::kLine2D;
  Vecd theta;
};

// Point-to-model error: orthogonal distance (line), radial gap (circle),
// symmetric transfer distance (homography), Sampson distance (fundamental).
double residual(const ModelParams& params, const Vecd& datum);
Vecd residuals(const ModelParams& params, const Matd& data);

// Gaussian kernel of the residual, hard-truncated beyond 3 sigma.
double soft_membership(double d, double sigma);
Vecd memberships(const ModelParams& params, const Matd& data, double sigma);

// Exact fit to a minimal sample (b rows). Throws DegenerateSample on
// coincident/collinear/rank-deficient configurations.
ModelParams fit_minimal(ModelFamily family, const Matd& sample);

// Weighted least-squares refit, weights in [0, 1]. Exact for lines
// (weighted orthogonal regression) and circles (Kasa seed + Gauss-Newton on
// the geometric residual); weighted DLT for homographies and fundamental
// matrices. Throws InsufficientSupport with fewer than b positive weights.
ModelParams fit_weighted(ModelFamily family, const Matd& data, const Vecd& weights);

}  // namespace underfit

#endif  // UNDERFIT_MODEL_HPP_
