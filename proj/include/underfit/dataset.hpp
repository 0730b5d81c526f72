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

#ifndef UNDERFIT_DATASET_HPP_
#define UNDERFIT_DATASET_HPP_

#include <map>
#include <string>
#include <vector>

#include "underfit/model.hpp"
#include "underfit/types.hpp"

namespace underfit {

// Dataset JSON:
//   { "family": "line2d"|"circle2d"|"homography"|"fundamental",
//     "points": [[...], ...],
//     "labels": [int, ...]        // optional, 0 = outlier
//     "meta":   { ... }           // optional generator parameters
//   }
struct Dataset {
  ModelFamily family = ModelFamily::kLine2D;
  Matd points;               // m x datum_dim(family)
  std::vector<int> labels;   // empty or length m
  std::map<std::string, double> meta;

  bool has_labels() const { return !labels.empty(); }
};

Dataset read_dataset_json(const std::string& path);
void write_dataset_json(const std::string& path, const Dataset& ds);

}  // namespace underfit

#endif  // UNDERFIT_DATASET_HPP_
