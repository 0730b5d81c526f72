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

#include "underfit/preference.hpp"

#include <algorithm>

#include "underfit/errors.hpp"
#include "underfit/rng.hpp"

namespace underfit {

Index PreferenceMatrix::active_count() const {
  Index n = 0;
  for (char a : active) n += (a != 0);
  return n;
}

void PreferenceMatrix::deactivate(Index j) {
  if (j < 0 || j >= cols()) throw InvalidParams("deactivate: column out of range");
  active[static_cast<std::size_t>(j)] = 0;
  P.col(j).setZero();
}

std::vector<Hypothesis> sample_pool(const Matd& data, ModelFamily family, Index n,
                                    std::uint64_t seed) {
  const Index m = data.rows();
  const int b = minimal_sample_size(family);
  if (m < b) throw InvalidParams("sample_pool: need at least b data");
  if (n < 1) throw InvalidParams("sample_pool: pool size must be >= 1");

  std::vector<Hypothesis> pool;
  pool.reserve(static_cast<std::size_t>(n));
  const std::int64_t budget = 100 * static_cast<std::int64_t>(n);
  std::int64_t attempts = 0;

  Matd sample(b, data.cols());
  for (Index j = 0; j < n; ++j) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(j));
    for (;;) {
      if (++attempts > budget) {
        throw PoolExhausted("sample_pool: redraw budget exhausted, data look degenerate");
      }
      std::vector<Index> idx;
      idx.reserve(static_cast<std::size_t>(b));
      while (static_cast<int>(idx.size()) < b) {
        const Index candidate = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(m)));
        if (std::find(idx.begin(), idx.end(), candidate) == idx.end()) {
          idx.push_back(candidate);
        }
      }
      std::sort(idx.begin(), idx.end());
      for (int r = 0; r < b; ++r) sample.row(r) = data.row(idx[static_cast<std::size_t>(r)]);
      try {
        Hypothesis h;
        h.params = fit_minimal(family, sample);
        h.sample_indices = std::move(idx);
        pool.push_back(std::move(h));
        break;
      } catch (const DegenerateSample&) {
        // redraw
      }
    }
  }
  return pool;
}

PreferenceMatrix build_preference(const Matd& data, std::vector<Hypothesis> pool,
                                  double sigma) {
  if (!(sigma > 0.0)) throw InvalidParams("build_preference: sigma must be > 0");
  PreferenceMatrix pref;
  pref.sigma = sigma;
  pref.P.resize(data.rows(), static_cast<Index>(pool.size()));
  for (Index j = 0; j < pref.P.cols(); ++j) {
    pref.P.col(j) = memberships(pool[static_cast<std::size_t>(j)].params, data, sigma);
  }
  pref.hypotheses = std::move(pool);
  pref.active.assign(pref.hypotheses.size(), 1);
  return pref;
}

ConsensusInit consensus_init(const PreferenceMatrix& pref) {
  Index j_star = -1;
  double best = 0.0;
  for (Index j = 0; j < pref.cols(); ++j) {
    if (!pref.active[static_cast<std::size_t>(j)]) continue;
    const double l1 = pref.P.col(j).sum();  // entries are nonnegative
    if (l1 > best) {
      best = l1;
      j_star = j;
    }
  }
  if (j_star < 0) throw EmptyPreference("consensus_init: all active columns are zero");

  ConsensusInit init;
  init.j_star = j_star;
  const Vecd col = pref.P.col(j_star);
  const double cinf = col.maxCoeff();
  init.u0 = col / cinf;
  const double utu = init.u0.squaredNorm();
  init.v0 = cinf * (pref.P.transpose() * init.u0) / utu;
  for (Index j = 0; j < init.v0.size(); ++j) {
    if (init.v0[j] < 1e-14) init.v0[j] = 0.0;
  }
  return init;
}

PreferenceMatrix deflate_columns(const PreferenceMatrix& pref, const Vecd& v) {
  if (v.size() != pref.cols()) throw LengthMismatch("deflate_columns: v length mismatch");
  PreferenceMatrix out = pref;
  const double vmax = v.maxCoeff();
  if (vmax <= 0.0) return out;
  const double load_floor = 1e-9 * vmax;
  for (Index j = 0; j < out.cols(); ++j) {
    if (v[j] > load_floor) {
      out.active[static_cast<std::size_t>(j)] = 0;
      out.P.col(j).setZero();
    }
  }
  return out;
}

}  // namespace underfit
