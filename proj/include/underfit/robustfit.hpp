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

#ifndef UNDERFIT_ROBUSTFIT_HPP_
#define UNDERFIT_ROBUSTFIT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "underfit/model.hpp"
#include "underfit/preference.hpp"
#include "underfit/types.hpp"

namespace underfit {

struct FitConfig {
  double sigma = 0.0;             // the only mandatory parameter
  double corr_threshold = 0.6;    // factor redundancy threshold
  int max_biclusters = 50;
  double alpha_override = 0.0;    // > 0 replaces 1 / C(m, b)
  bool exclusive_assignment = true;
  bool prefilter = true;
  std::uint64_t seed = 0;
  Index pool_size = 0;            // 0 -> 500 for 2D, 2000 for homography/fundamental

  // Inner NMU solve on the preference matrix.
  double nmu_tau = 1e-4;
  int nmu_max_iters = 200;

  // Statistic options. The empirical CDF is taken over the nonzero
  // memberships by default; including the zero tail is kept as a switch for
  // sensitivity analysis, as is the one-sided Smirnov tail.
  bool cdf_include_zeros = false;
  bool one_sided_tail = false;
};

Index default_pool_size(ModelFamily family);

struct StatTest {
  double d_minus = 0.0;
  double p_value = 1.0;
  Index sample_size = 0;
  bool keep = false;  // null rejected at alpha
};

// Kuiper/KS candidate test for one model: memberships of all data, D- of
// their empirical CDF against Uniform[0,1], keep iff p < alpha with
// alpha = 1 / C(m, b).
StatTest test_statistic_for(const ModelParams& model, const Matd& data, double sigma,
                            const FitConfig& cfg);
StatTest test_membership_values(const Vecd& values, Index m_total, int b,
                                const FitConfig& cfg);

// Deactivates every column whose hypothesis fails the test (same alpha).
PreferenceMatrix prefilter_columns(const PreferenceMatrix& pref, const Matd& data,
                                   double sigma, const FitConfig& cfg);

// Weighted refit of a family model from a left NMU factor.
ModelParams refit_from_factor(const Vecd& u_hat, const Matd& data, ModelFamily family);

// Cosine similarity; nonnegative inputs land in [0, 1].
double factor_correlation(const Vecd& u_a, const Vecd& u_b);

struct Bicluster {
  Vecd u_hat;
  Vecd v_hat;
  ModelParams theta_hat;
  Vecd memberships;
  double d_minus = 0.0;
  double p_value = 1.0;

  bool kept = false;
  std::string discard_reason;   // empty when kept
  Index support_size = 0;       // #{i : memberships_i > 0}
  double refit_objective = 0.0; // sum_i u_i e(x_i)^2
  Index anchor_column = -1;
};

// Conflict graph on correlations > corr_threshold, all maximal independent
// sets, pick the one minimizing the geometric mean of p-values (log-space).
// Ties: more members, lower total refit objective, lexicographic indices.
// Returns indices into `candidates`.
std::vector<int> select_mis(const std::vector<Bicluster>& candidates,
                            double corr_threshold);

// Exclusive labels: argmin-residual among models with positive membership,
// 0 when no model claims the datum. `selected` indexes into `candidates`.
std::vector<int> assign_exclusive(const std::vector<Bicluster>& candidates,
                                  const std::vector<int>& selected, const Matd& data);

// Misclassification fraction after optimal one-to-one group matching
// (Hungarian on overlaps); label 0 is scored directly, not matched.
double misclassification_error(const std::vector<int>& predicted,
                               const std::vector<int>& ground_truth);

struct IterationDiag {
  Index j_star = -1;
  Index active_before = 0;
  Index active_after = 0;
  int nmu_iterations = 0;
  double nmu_relative_residual = 0.0;
  double min_margin = 0.0;  // min of P - u v^T over the solved block
  bool kept = false;
  std::string reason;
};

struct FitDiagnostics {
  Index pool_size = 0;
  Index prefilter_discarded = 0;
  std::vector<IterationDiag> iterations;
};

struct FitResult {
  std::vector<Bicluster> all_candidates;
  std::vector<int> selected;      // indices into all_candidates
  std::vector<int> assignment;    // per-datum labels; empty if not exclusive
  FitDiagnostics diagnostics;

  Index model_count() const { return static_cast<Index>(selected.size()); }
};

// The full RS-NMU pipeline: sample -> preference -> prefilter -> iterated
// {consensus init, rank-one NMU, refit, test, column deflation} -> MIS
// selection -> optional exclusive assignment. Deterministic given the seed.
FitResult fit_models(const Matd& data, ModelFamily family, const FitConfig& cfg);

}  // namespace underfit

#endif  // UNDERFIT_ROBUSTFIT_HPP_
