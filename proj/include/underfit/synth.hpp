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

#ifndef UNDERFIT_SYNTH_HPP_
#define UNDERFIT_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "underfit/dataset.hpp"
#include "underfit/model.hpp"
#include "underfit/types.hpp"

namespace underfit {

// Labeled synthetic dataset plus its generating models, in label order
// (label t+1 <-> truth[t]; 0 = outlier).
struct SynthResult {
  Dataset data;
  std::vector<ModelParams> truth;
};

struct SynthParams {
  int k = 5;                   // number of model instances
  Index total_points = 500;
  double noise = 0.0075;       // per-point Gaussian noise (coordinate units)
  double outlier_ratio = 0.5;  // fraction of total points
  double margin = 0.1;         // min distance of outliers to any true model
  std::uint64_t seed = 0;
};

// 2D generators in the unit square. Outliers are gross: uniform, but at
// distance > margin from every generating model, so that a label of 0 is
// consistent with the membership kernel.
//
// star: for odd k the classic star polygon (strokes V_t -> V_{t+2} of a
// regular k-gon); for even k an asterisk of k lines through a common center
// with a hollow core. k = 5 gives the pentagram.
SynthResult synth_star(const SynthParams& p);
// stairs: k parallel offset segments.
SynthResult synth_stairs(const SynthParams& p);
// circles: k circles with at least one intersecting pair.
SynthResult synth_circles(const SynthParams& p);

// Correspondence generators in a 640x480 pixel frame; noise and margin are
// in pixels (defaults: noise 1.0, margin 15).
SynthResult synth_homography(const SynthParams& p);
SynthResult synth_fundamental(const SynthParams& p);

SynthResult synth_dataset(const std::string& kind, const SynthParams& p);

// Binary parts/digits toy: six images assembled from five disjoint part
// masks, stacked as columns. Exact nonnegative rank five.
struct DigitsToy {
  Matd a;                    // pixels x images
  std::vector<Vecd> parts;   // five binary masks (pixels)
  Matd usage;                // parts x images binary usage
};
DigitsToy make_digits_matrix();

}  // namespace underfit

#endif  // UNDERFIT_SYNTH_HPP_
