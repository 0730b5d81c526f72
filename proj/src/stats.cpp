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

#include "underfit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "underfit/errors.hpp"

namespace underfit {

double kuiper_d_minus(std::vector<double> values) {
  if (values.empty()) throw InvalidParams("kuiper_d_minus: empty sample");
  std::sort(values.begin(), values.end());
  const double m = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    d = std::max(d, values[i] - static_cast<double>(i) / m);
  }
  return std::min(d, 1.0);
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double total = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    total += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * total, 0.0, 1.0);
}

double p_value(double d_minus, Index m) {
  if (m < 1) throw InvalidParams("p_value: m must be >= 1");
  return kolmogorov_q(std::sqrt(static_cast<double>(m)) * d_minus);
}

double p_value_one_sided(double d_minus, Index m) {
  if (m < 1) throw InvalidParams("p_value: m must be >= 1");
  const double md = static_cast<double>(m);
  return std::clamp(std::exp(-2.0 * md * d_minus * d_minus), 0.0, 1.0);
}

double log_binomial(Index m, int b) {
  if (b < 0 || static_cast<Index>(b) > m) throw InvalidParams("log_binomial: b out of range");
  return std::lgamma(static_cast<double>(m) + 1.0) -
         std::lgamma(static_cast<double>(b) + 1.0) -
         std::lgamma(static_cast<double>(m - b) + 1.0);
}

double alpha_for(Index m, int b) {
  return std::max(std::exp(-log_binomial(m, b)), 1e-300);
}

std::vector<int> hungarian(const Matd& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n) throw InvalidParams("hungarian: cost matrix must be square");
  if (n == 0) return {};
  // Potentials formulation, O(n^3); rows/columns are 1-based internally.
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // column -> row
  for (Index i = 1; i <= n; ++i) {
    match[0] = static_cast<int>(i);
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (match[static_cast<std::size_t>(j)] > 0) {
      row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] = j - 1;
    }
  }
  return row_to_col;
}

namespace {

void bron_kerbosch(const std::vector<std::vector<char>>& adj, std::vector<int>& r,
                   std::vector<int> p, std::vector<int> x,
                   std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  // Pivot: vertex of P u X with most neighbours in P.
  int pivot = -1;
  std::size_t best = 0;
  auto degree_in_p = [&](int v) {
    std::size_t d = 0;
    for (int w : p) d += (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] != 0);
    return d;
  };
  for (int v : p) {
    const std::size_t d = degree_in_p(v);
    if (pivot < 0 || d > best) { pivot = v; best = d; }
  }
  for (int v : x) {
    const std::size_t d = degree_in_p(v);
    if (pivot < 0 || d > best) { pivot = v; best = d; }
  }
  std::vector<int> expand;
  for (int v : p) {
    if (pivot < 0 || !adj[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(v)]) {
      expand.push_back(v);
    }
  }
  for (int v : expand) {
    std::vector<int> pv, xv;
    for (int w : p) {
      if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)]) pv.push_back(w);
    }
    for (int w : x) {
      if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)]) xv.push_back(w);
    }
    r.push_back(v);
    bron_kerbosch(adj, r, std::move(pv), std::move(xv), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

}  // namespace

std::vector<std::vector<int>> maximal_independent_sets(
    const std::vector<std::vector<char>>& adjacency) {
  const int n = static_cast<int>(adjacency.size());
  // Maximal independent sets = maximal cliques of the complement.
  std::vector<std::vector<char>> comp(adjacency.size(),
                                      std::vector<char>(adjacency.size(), 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          (i != j && !adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::vector<std::vector<int>> out;
  std::vector<int> r;
  bron_kerbosch(comp, r, std::move(p), {}, out);
  for (auto& s : out) std::sort(s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace underfit
