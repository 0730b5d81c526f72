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

#ifndef UNDERFIT_PREFERENCE_HPP_
#define UNDERFIT_PREFERENCE_HPP_

#include <cstdint>
#include <vector>

#include "underfit/model.hpp"
#include "underfit/types.hpp"

namespace underfit {

struct Hypothesis {
  ModelParams params;
  std::vector<Index> sample_indices;  // the b defining data, sorted, distinct
};

// m x n soft-membership matrix over data (rows) and hypotheses (columns).
// Deactivated columns are entrywise zero.
struct PreferenceMatrix {
  Matd P;
  std::vector<Hypothesis> hypotheses;
  double sigma = 0.0;
  std::vector<char> active;

  Index rows() const { return P.rows(); }
  Index cols() const { return P.cols(); }
  Index active_count() const;
  void deactivate(Index j);
};

// Uniform RANSAC-style sampling: n size-b subsets drawn uniformly without
// replacement, refit via fit_minimal; degenerate samples are redrawn with a
// global budget of 100 * n attempts. Deterministic for a fixed seed, with
// per-hypothesis streams derived from (seed, index).
std::vector<Hypothesis> sample_pool(const Matd& data, ModelFamily family, Index n,
                                    std::uint64_t seed);

PreferenceMatrix build_preference(const Matd& data, std::vector<Hypothesis> pool,
                                  double sigma);

// RANSAC-consensus initialization: the largest-l1 active column j*,
//   u0 = P_:j* / ||P_:j*||_inf,  v0 = ||P_:j*||_inf P^T u0 / (u0^T u0).
struct ConsensusInit {
  Vecd u0;
  Vecd v0;
  Index j_star = -1;
};
ConsensusInit consensus_init(const PreferenceMatrix& pref);

// Zeroes and deactivates the columns with positive loads
// (v_j > 1e-9 * max(v)); the input is left untouched.
PreferenceMatrix deflate_columns(const PreferenceMatrix& pref, const Vecd& v);

}  // namespace underfit

#endif  // UNDERFIT_PREFERENCE_HPP_
