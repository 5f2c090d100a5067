/*
 * Copyright 2026 The ocrf Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Reference implementations used only by tests. They are written for
// clarity, in long double where it matters, and share no code with the
// library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Real = long double;

// n * m / (n + m), zero when both are zero.
inline Real gini_pair(Real n, Real m) {
  if (n + m == 0) return 0;
  return n * m / (n + m);
}

inline Real two_class(Real nl, Real ml, Real nr, Real mr) {
  return gini_pair(nl, ml) + gini_pair(nr, mr);
}

// Expected outliers per child are gamma*n_t*lambda.
inline Real oc_gini(Real n_t, Real n_left, Real lambda, Real gamma) {
  const Real ml = gamma * n_t * lambda;
  const Real mr = gamma * n_t * (1 - lambda);
  return gini_pair(n_left, ml) + gini_pair(n_t - n_left, mr);
}

inline Real oc_shannon(Real n_t, Real n_left, Real lambda, Real gamma) {
  auto term = [](Real n, Real m) -> Real {
    if (n == 0) return 0;
    return n * std::log2((n + m) / n);
  };
  return term(n_left, gamma * n_t * lambda) +
         term(n_t - n_left, gamma * n_t * (1 - lambda));
}

// Harmonic-based average path length, summing from the small terms up.
inline Real path_c(std::size_t n) {
  if (n <= 1) return 0;
  Real h = 0;
  for (std::size_t k = n - 1; k >= 1; --k) h += Real(1) / Real(k);
  return 2 * h - 2 * Real(n - 1) / Real(n);
}

// P(s_pos > s_neg) + P(s_pos == s_neg) / 2 by enumerating all pairs.
inline Real pairwise_auc(const std::vector<double>& s,
                         const std::vector<std::uint8_t>& y) {
  Real wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1;
      if (s[i] > s[j]) wins += 1;
      else if (s[i] == s[j]) wins += Real(0.5);
    }
  }
  return wins / pairs;
}

// Average precision: for each distinct score t, from the highest down,
// count predictions with score >= t from scratch and accumulate
// (recall_k - recall_{k-1}) * precision_k.
inline Real step_average_precision(const std::vector<double>& s,
                                   const std::vector<std::uint8_t>& y) {
  std::set<double, std::greater<>> thresholds(s.begin(), s.end());
  Real positives = 0;
  for (auto v : y) positives += v;
  Real ap = 0, prev_recall = 0;
  for (const double t : thresholds) {
    Real tp = 0, predicted = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) {
        predicted += 1;
        tp += y[i];
      }
    }
    const Real recall = tp / positives;
    ap += (recall - prev_recall) * (tp / predicted);
    prev_recall = recall;
  }
  return ap;
}

struct BruteSplit {
  std::size_t feature = 0;
  double threshold = 0;
  std::size_t n_left = 0;
  Real proxy = 0;
};

// Scans every midpoint between distinct values of every listed feature,
// counting the left side point by point. Ties prefer lower feature, then
// lower threshold. `proxy(n_t, n_left, lambda)` is the objective.
template <typename Proxy>
std::optional<BruteSplit> brute_best_split(
    const std::vector<std::vector<double>>& points,
    const std::vector<double>& lower, const std::vector<double>& upper,
    const std::vector<std::size_t>& features, Proxy proxy) {
  std::optional<BruteSplit> best;
  const std::size_t n = points.size();
  for (const auto f : features) {
    std::set<double> distinct;
    for (const auto& p : points) distinct.insert(p[f]);
    std::vector<double> v(distinct.begin(), distinct.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double thr = v[i] + 0.5 * (v[i + 1] - v[i]);
      std::size_t left = 0;
      for (const auto& p : points) left += p[f] < thr ? 1 : 0;
      const Real lambda = (Real(thr) - lower[f]) / (Real(upper[f]) - lower[f]);
      const Real value = proxy(Real(n), Real(left), lambda);
      // Candidates arrive in (feature, threshold) order, so strict
      // improvement implements the tie rule.
      if (!best || value < best->proxy) best = BruteSplit{f, thr, left, value};
    }
  }
  return best;
}

inline Real relative_error(Real got, Real want) {
  const Real scale = std::max<Real>(std::fabs(want), 1e-300L);
  return std::fabs(got - want) / scale;
}

}  // namespace oracle
