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

#include "underfit/robustfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "underfit/errors.hpp"
#include "underfit/log.hpp"
#include "underfit/nmu.hpp"
#include "underfit/stats.hpp"

namespace underfit {

Index default_pool_size(ModelFamily family) {
  return datum_dim(family) == 2 ? 500 : 2000;
}

StatTest test_membership_values(const Vecd& values, Index m_total, int b,
                                const FitConfig& cfg) {
  std::vector<double> sample;
  sample.reserve(static_cast<std::size_t>(values.size()));
  for (Index i = 0; i < values.size(); ++i) {
    if (cfg.cdf_include_zeros || values[i] > 0.0) sample.push_back(values[i]);
  }
  StatTest out;
  out.sample_size = static_cast<Index>(sample.size());
  if (sample.empty()) return out;  // no evidence at all -> p = 1
  out.d_minus = kuiper_d_minus(std::move(sample));
  out.p_value = cfg.one_sided_tail ? p_value_one_sided(out.d_minus, out.sample_size)
                                   : p_value(out.d_minus, out.sample_size);
  const double alpha =
      cfg.alpha_override > 0.0 ? cfg.alpha_override : alpha_for(m_total, b);
  out.keep = out.p_value < alpha;
  return out;
}

StatTest test_statistic_for(const ModelParams& model, const Matd& data, double sigma,
                            const FitConfig& cfg) {
  const Vecd mem = memberships(model, data, sigma);
  return test_membership_values(mem, data.rows(), minimal_sample_size(model.family), cfg);
}

PreferenceMatrix prefilter_columns(const PreferenceMatrix& pref, const Matd& data,
                                   double sigma, const FitConfig& cfg) {
  (void)data;
  (void)sigma;
  PreferenceMatrix out = pref;
  const int b = out.hypotheses.empty()
                    ? 1
                    : minimal_sample_size(out.hypotheses.front().params.family);
  for (Index j = 0; j < out.cols(); ++j) {
    if (!out.active[static_cast<std::size_t>(j)]) continue;
    // Column j already holds the memberships of hypothesis j.
    const StatTest t = test_membership_values(out.P.col(j), out.rows(), b, cfg);
    if (!t.keep) out.deactivate(j);
  }
  return out;
}

ModelParams refit_from_factor(const Vecd& u_hat, const Matd& data, ModelFamily family) {
  const int b = minimal_sample_size(family);
  Index support = 0;
  for (Index i = 0; i < u_hat.size(); ++i) {
    if (u_hat[i] > 1e-6) ++support;
  }
  if (support < b) {
    throw InsufficientSupport("refit_from_factor: factor support below b");
  }
  return fit_weighted(family, data, u_hat);
}

double factor_correlation(const Vecd& u_a, const Vecd& u_b) {
  const double na = u_a.norm();
  const double nb = u_b.norm();
  if (na <= 0.0 || nb <= 0.0) throw InvalidParams("factor_correlation: zero factor");
  return u_a.dot(u_b) / (na * nb);
}

namespace {

double log_p_floored(double p) { return std::log(std::max(p, 1e-300)); }

struct MisScore {
  double mean_log_p = 0.0;
  Index members = 0;
  double total_objective = 0.0;
  std::vector<int> set;

  // Lexicographic: smaller geometric mean, then more members, then lower
  // total residual objective, then lexicographically smaller index set.
  bool better_than(const MisScore& other) const {
    if (mean_log_p != other.mean_log_p) return mean_log_p < other.mean_log_p;
    if (members != other.members) return members > other.members;
    if (total_objective != other.total_objective) return total_objective < other.total_objective;
    return set < other.set;
  }
};

}  // namespace

std::vector<int> select_mis(const std::vector<Bicluster>& candidates,
                            double corr_threshold) {
  if (candidates.empty()) return {};
  const int n = static_cast<int>(candidates.size());
  std::vector<std::vector<char>> conflict(static_cast<std::size_t>(n),
                                          std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double c = factor_correlation(candidates[static_cast<std::size_t>(a)].u_hat,
                                          candidates[static_cast<std::size_t>(b)].u_hat);
      conflict[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          conflict[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] =
              (c > corr_threshold);
    }
  }
  const auto sets = maximal_independent_sets(conflict);
  MisScore best;
  bool have = false;
  for (const auto& set : sets) {
    MisScore score;
    score.set = set;
    score.members = static_cast<Index>(set.size());
    for (int idx : set) {
      score.mean_log_p += log_p_floored(candidates[static_cast<std::size_t>(idx)].p_value);
      score.total_objective += candidates[static_cast<std::size_t>(idx)].refit_objective;
    }
    score.mean_log_p /= static_cast<double>(set.size());
    if (!have || score.better_than(best)) {
      best = std::move(score);
      have = true;
    }
  }
  return best.set;
}

std::vector<int> assign_exclusive(const std::vector<Bicluster>& candidates,
                                  const std::vector<int>& selected, const Matd& data) {
  if (selected.empty()) throw InvalidParams("assign_exclusive: empty selection");
  const Index m = data.rows();
  std::vector<int> labels(static_cast<std::size_t>(m), 0);
  Vecd best = Vecd::Constant(m, std::numeric_limits<double>::infinity());
  for (std::size_t t = 0; t < selected.size(); ++t) {
    const Bicluster& bc = candidates[static_cast<std::size_t>(selected[t])];
    const Vecd r = residuals(bc.theta_hat, data);
    for (Index i = 0; i < m; ++i) {
      if (bc.memberships[i] > 0.0 && r[i] < best[i]) {
        best[i] = r[i];
        labels[static_cast<std::size_t>(i)] = static_cast<int>(t) + 1;
      }
    }
  }
  return labels;
}

double misclassification_error(const std::vector<int>& predicted,
                               const std::vector<int>& ground_truth) {
  if (predicted.size() != ground_truth.size()) {
    throw LengthMismatch("misclassification_error: label sequences differ in length");
  }
  if (predicted.empty()) return 0.0;

  auto group_ids = [](const std::vector<int>& labels) {
    std::vector<int> ids;
    for (int l : labels) {
      if (l != 0 && std::find(ids.begin(), ids.end(), l) == ids.end()) ids.push_back(l);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  const std::vector<int> pred_ids = group_ids(predicted);
  const std::vector<int> true_ids = group_ids(ground_truth);
  const Index np = static_cast<Index>(pred_ids.size());
  const Index nt = static_cast<Index>(true_ids.size());
  const Index n = std::max(np, nt);

  double matched = 0.0;
  if (n > 0) {
    Matd overlap = Matd::Zero(n, n);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      if (predicted[i] == 0 || ground_truth[i] == 0) continue;
      const auto pi = std::find(pred_ids.begin(), pred_ids.end(), predicted[i]) - pred_ids.begin();
      const auto ti = std::find(true_ids.begin(), true_ids.end(), ground_truth[i]) - true_ids.begin();
      overlap(static_cast<Index>(pi), static_cast<Index>(ti)) += 1.0;
    }
    const std::vector<int> assign = hungarian(-overlap);
    for (Index i = 0; i < n; ++i) {
      matched += overlap(i, assign[static_cast<std::size_t>(i)]);
    }
  }
  double both_outlier = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == 0 && ground_truth[i] == 0) both_outlier += 1.0;
  }
  const double correct = matched + both_outlier;
  return 1.0 - correct / static_cast<double>(predicted.size());
}

FitResult fit_models(const Matd& data, ModelFamily family, const FitConfig& cfg) {
  if (!(cfg.sigma > 0.0)) throw InvalidParams("fit_models: sigma must be > 0");
  if (!(cfg.corr_threshold > 0.0 && cfg.corr_threshold < 1.0)) {
    throw InvalidParams("fit_models: corr_threshold must be in (0, 1)");
  }
  const Index m = data.rows();
  const int b = minimal_sample_size(family);
  if (m < b) throw InvalidParams("fit_models: fewer data than minimal sample size");

  const Index pool_size = cfg.pool_size > 0 ? cfg.pool_size : default_pool_size(family);
  auto pool = sample_pool(data, family, pool_size, cfg.seed);
  PreferenceMatrix pref = build_preference(data, std::move(pool), cfg.sigma);

  FitResult result;
  result.diagnostics.pool_size = pool_size;
  if (cfg.prefilter) {
    const Index before = pref.active_count();
    pref = prefilter_columns(pref, data, cfg.sigma, cfg);
    result.diagnostics.prefilter_discarded = before - pref.active_count();
    UNDERFIT_LOG_INFO("prefilter kept " << pref.active_count() << "/" << before
                                        << " columns");
  }

  NmuConfig nmu_cfg;
  nmu_cfg.tau = cfg.nmu_tau;
  nmu_cfg.max_iters = cfg.nmu_max_iters;

  for (int round = 0; round < cfg.max_biclusters; ++round) {
    IterationDiag diag;
    diag.active_before = pref.active_count();
    if (diag.active_before == 0) break;

    ConsensusInit init;
    try {
      init = consensus_init(pref);
    } catch (const EmptyPreference&) {
      break;  // nothing left to explain
    }
    diag.j_star = init.j_star;

    // Solve on the active columns only; inactive columns are zero and inert.
    std::vector<Index> cols;
    for (Index j = 0; j < pref.cols(); ++j) {
      if (pref.active[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    Matd pc(pref.rows(), static_cast<Index>(cols.size()));
    Vecd v0c(static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      pc.col(static_cast<Index>(k)) = pref.P.col(cols[k]);
      v0c[static_cast<Index>(k)] = init.v0[cols[k]];
    }

    NmuFactor factor = solve_rank_one(pc, init.u0, v0c, nmu_cfg);
    diag.nmu_iterations = factor.iterations_used;

    Bicluster bc;
    bc.anchor_column = init.j_star;
    bc.u_hat = factor.u;
    bc.v_hat = Vecd::Zero(pref.cols());
    if (!factor.is_zero()) {
      for (std::size_t k = 0; k < cols.size(); ++k) {
        bc.v_hat[cols[k]] = factor.v[static_cast<Index>(k)];
      }
      const Matd block_residual = pc - factor.u * factor.v.transpose();
      diag.min_margin = block_residual.minCoeff();
      diag.nmu_relative_residual = block_residual.norm() / std::max(pc.norm(), 1e-300);
    }

    if (factor.is_zero()) {
      bc.discard_reason = "degenerate_factor";
    } else {
      try {
        bc.theta_hat = refit_from_factor(bc.u_hat, data, family);
        bc.memberships = memberships(bc.theta_hat, data, cfg.sigma);
        const Vecd res = residuals(bc.theta_hat, data);
        bc.refit_objective = (bc.u_hat.array() * res.array().square()).sum();
        for (Index i = 0; i < m; ++i) bc.support_size += (bc.memberships[i] > 0.0);
        const StatTest t = test_membership_values(bc.memberships, m, b, cfg);
        bc.d_minus = t.d_minus;
        bc.p_value = t.p_value;
        bc.kept = t.keep;
        if (!bc.kept) bc.discard_reason = "failed_test";
      } catch (const InsufficientSupport&) {
        bc.discard_reason = "insufficient_support";
      } catch (const SingularModel&) {
        bc.discard_reason = "singular_model";
      }
    }
    diag.kept = bc.kept;
    diag.reason = bc.discard_reason;

    // Column-zeroing deflation; the anchor column is deactivated regardless
    // so that every round strictly shrinks the active set.
    pref = deflate_columns(pref, bc.v_hat);
    if (pref.active[static_cast<std::size_t>(init.j_star)]) {
      pref.deactivate(init.j_star);
    }
    diag.active_after = pref.active_count();

    result.all_candidates.push_back(std::move(bc));
    result.diagnostics.iterations.push_back(std::move(diag));
  }

  std::vector<Bicluster> kept;
  std::vector<int> kept_idx;
  for (std::size_t i = 0; i < result.all_candidates.size(); ++i) {
    if (result.all_candidates[i].kept) {
      kept.push_back(result.all_candidates[i]);
      kept_idx.push_back(static_cast<int>(i));
    }
  }
  if (!kept.empty()) {
    const std::vector<int> chosen = select_mis(kept, cfg.corr_threshold);
    for (int c : chosen) result.selected.push_back(kept_idx[static_cast<std::size_t>(c)]);
    if (cfg.exclusive_assignment) {
      result.assignment = assign_exclusive(result.all_candidates, result.selected, data);
    }
  }
  UNDERFIT_LOG_INFO("fit_models: " << result.selected.size() << " of "
                                   << result.all_candidates.size()
                                   << " candidates selected");
  return result;
}

}  // namespace underfit
