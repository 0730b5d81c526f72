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

#ifndef UNDERFIT_STATS_HPP_
#define UNDERFIT_STATS_HPP_

#include <cstdint>
#include <vector>

#include "underfit/types.hpp"

namespace underfit {

// One-sided supremum of F_U - F_t over [0, 1] for a sample of values in
// [0, 1]: with sorted s_1 <= ... <= s_m, D- = max_i max(s_i - (i-1)/m, 0).
double kuiper_d_minus(std::vector<double> values);

// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1}
// exp(-2 k^2 lambda^2), truncated when a term drops below 1e-12 and clamped
// to [0, 1].
double kolmogorov_q(double lambda);

// p-value of D- for sample size m under the Kolmogorov null transform,
// Q(sqrt(m) d). The strictly one-sided Smirnov tail exp(-2 m d^2) is
// available as an alternative.
double p_value(double d_minus, Index m);
double p_value_one_sided(double d_minus, Index m);

// log C(m, b) via log-gamma (no overflow for large m).
double log_binomial(Index m, int b);

// alpha = 1 / C(m, b), floored at 1e-300.
double alpha_for(Index m, int b);

// Hungarian algorithm: minimum-cost perfect assignment on a square cost
// matrix; returns the column assigned to each row.
std::vector<int> hungarian(const Matd& cost);

// All maximal independent sets of the graph with the given adjacency,
// via Bron-Kerbosch with pivoting on the complement. Deterministic order.
std::vector<std::vector<int>> maximal_independent_sets(
    const std::vector<std::vector<char>>& adjacency);

}  // namespace underfit

#endif  // UNDERFIT_STATS_HPP_
