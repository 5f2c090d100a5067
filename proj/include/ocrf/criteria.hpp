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

// Impurity-decrease proxies. Every proxy here is minimized by the split
// search; smaller is a better split.
//
// Notation in comments: n_L, n_R inlier counts of the children, n_t = n_L +
// n_R, lambda_L, lambda_R the child-to-parent volume fractions, L_* volume
// fractions of the root cell.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "ocrf/cell.hpp"
#include "ocrf/dataset.hpp"
#include "ocrf/error.hpp"
#include "ocrf/model.hpp"

namespace ocrf {

namespace detail {

// n*m/(n+m) with 0/0 := 0. Evaluated as m * (n/(n+m)) so that the rounded
// result never exceeds m.
inline double gini_term(double n, double m) noexcept {
  const double s = n + m;
  return s > 0 ? m * (n / s) : 0.0;
}

// n*log2((n+m)/n) with the empty child contributing 0.
inline double shannon_term(double n, double m) noexcept {
  return n > 0 ? n * std::log2((n + m) / n) : 0.0;
}

inline void check_one_class_args(double n_t, double n_left, double lambda_left,
                                 double gamma) {
  require(lambda_left > 0.0 && lambda_left < 1.0,
          "lambda_left must lie in the open interval (0,1)");
  require(n_t >= 1, "n_t must be >= 1");
  require(n_left >= 0 && n_left <= n_t, "n_left must lie in [0, n_t]");
  require(gamma > 0, "gamma must be > 0");
}

}  // namespace detail

/// Two-class Gini proxy
///   n_L n'_L / (n_L + n'_L) + n_R n'_R / (n_R + n'_R),
/// with primed counts the second-class (outlier) counts.
inline double two_class_gini_proxy(double n_left, double n_left_outliers,
                                   double n_right, double n_right_outliers) {
  return detail::gini_term(n_left, n_left_outliers) +
         detail::gini_term(n_right, n_right_outliers);
}

/// One-class adaptive Gini proxy: the two-class proxy with the outlier child
/// counts replaced by their expectations gamma*n_t*lambda under n_t' =
/// gamma*n_t outliers uniform on the node cell.
inline double oc_gini_proxy(double n_t, double n_left, double lambda_left,
                            double gamma) {
  detail::check_one_class_args(n_t, n_left, lambda_left, gamma);
  const double outliers = gamma * n_t;
  return detail::gini_term(n_left, outliers * lambda_left) +
         detail::gini_term(n_t - n_left, outliers * (1.0 - lambda_left));
}

/// One-class adaptive Shannon proxy
///   n_L log2((n_L + gamma n_t lambda_L) / n_L) + (same for R).
inline double oc_shannon_proxy(double n_t, double n_left, double lambda_left,
                               double gamma) {
  detail::check_one_class_args(n_t, n_left, lambda_left, gamma);
  const double outliers = gamma * n_t;
  return detail::shannon_term(n_left, outliers * lambda_left) +
         detail::shannon_term(n_t - n_left, outliers * (1.0 - lambda_left));
}

/// Naive one-class Gini proxy: a fixed global budget alpha*n of uniform
/// outliers on the root cell, so child outlier counts are alpha*n*L_child.
inline double naive_oc_gini_proxy(double alpha_n, double n_left, double n_right,
                                  double root_fraction_left,
                                  double root_fraction_right) {
  return detail::gini_term(n_left, alpha_n * root_fraction_left) +
         detail::gini_term(n_right, alpha_n * root_fraction_right);
}

/// Class ratio of the naive model in a node: alpha*n*L_t / n_t. Vanishes
/// with the node volume, which is what degrades the naive criterion.
inline double class_ratio_naive(double alpha_n, double root_fraction,
                                double n_t) {
  detail::require(n_t >= 1, "class_ratio_naive: n_t must be >= 1");
  return alpha_n * root_fraction / n_t;
}

/// Node-local model (alpha(L_t), n(L_t)) of the adaptive approach. It keeps
/// the expected inlier count (1-alpha)*n and pins the node class ratio to
/// gamma:
///   (1 - alpha(L_t)) n(L_t) = (1 - alpha) n
///   alpha(L_t) n(L_t) L_t   = n_t' = gamma n_t
struct AdaptiveModelParams {
  double alpha_of_Lt = 0.0;
  double n_of_Lt = 0.0;
  double one_minus_alpha_of_Lt = 1.0;  // computed directly, not as 1 - alpha
};

inline AdaptiveModelParams adaptive_model_params(double alpha, double n,
                                                 double root_fraction,
                                                 double n_t_prime) {
  detail::require(alpha > 0 && alpha < 1, "alpha must lie in (0,1)");
  detail::require(root_fraction > 0, "L_t must be > 0");
  detail::require(n_t_prime > 0, "n_t' must be > 0");
  const double inlier_mass = (1.0 - alpha) * n * root_fraction;
  const double total = inlier_mass + n_t_prime;
  return {n_t_prime / total, total / root_fraction, inlier_mass / total};
}

/// Adaptive proxy written in root-volume fractions:
///   sum_child n_c a(L_t) n(L_t) L_c / (n_c + a(L_t) n(L_t) L_c).
/// Algebraically identical to oc_gini_proxy(n_t, n_L, L_L / L_t, gamma).
inline double oc_adaptive_proxy_general(double n_left, double n_right,
                                        const AdaptiveModelParams& params,
                                        double root_fraction_left,
                                        double root_fraction_right) {
  const double scale = params.alpha_of_Lt * params.n_of_Lt;
  return detail::gini_term(n_left, scale * root_fraction_left) +
         detail::gini_term(n_right, scale * root_fraction_right);
}

/// A scored candidate split.
struct SplitEvaluation {
  std::size_t feature = 0;  // column of the node data / cell dimension
  double threshold = 0.0;
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  double lambda_left = 0.0;
  double lambda_right = 0.0;
  double proxy_value = 0.0;
};

/// What the split search minimizes, plus the node context it needs.
struct SplitSearch {
  Criterion criterion = Criterion::OcGini;
  double gamma = 1.0;
  double naive_alpha_n = 1.0;  // alpha*n, NaiveOcGini only
  double root_fraction = 1.0;  // L_t of the node, NaiveOcGini only
};

/// Proxy of splitting a node of `n_t` points into `n_left` / rest with left
/// volume fraction `lambda_left`.
inline double evaluate_split(const SplitSearch& search, std::size_t n_t,
                             std::size_t n_left, double lambda_left) {
  const auto nt = static_cast<double>(n_t);
  const auto nl = static_cast<double>(n_left);
  switch (search.criterion) {
    case Criterion::OcGini:
      return oc_gini_proxy(nt, nl, lambda_left, search.gamma);
    case Criterion::OcShannon:
      return oc_shannon_proxy(nt, nl, lambda_left, search.gamma);
    case Criterion::NaiveOcGini:
      return naive_oc_gini_proxy(search.naive_alpha_n, nl, nt - nl,
                                 search.root_fraction * lambda_left,
                                 search.root_fraction * (1.0 - lambda_left));
  }
  return 0.0;
}

/// True when `a` should be preferred to `b`: smaller proxy, then lower
/// feature index, then lower threshold.
inline bool better_split(const SplitEvaluation& a, const SplitEvaluation& b) {
  if (a.proxy_value != b.proxy_value) return a.proxy_value < b.proxy_value;
  if (a.feature != b.feature) return a.feature < b.feature;
  return a.threshold < b.threshold;
}

/// Exhaustive search over the midpoints between consecutive distinct values
/// of each candidate feature among `rows` of `data`. Returns nullopt when no
/// candidate feature admits a threshold (constant features, < 2 points).
inline std::optional<SplitEvaluation> find_best_split(
    const Matrix& data, std::span<const std::uint32_t> rows, const Cell& cell,
    std::span<const std::size_t> candidate_features,
    const SplitSearch& search) {
  detail::require(cell.dims() == data.cols(),
                  "find_best_split: cell and data dimensions differ");
  std::optional<SplitEvaluation> best;
  const std::size_t n_t = rows.size();
  if (n_t < 2) return best;

  std::vector<double> values(n_t);
  for (const std::size_t f : candidate_features) {
    detail::require(f < data.cols(), "find_best_split: feature out of range");
    for (std::size_t i = 0; i < n_t; ++i) values[i] = data(rows[i], f);
    std::sort(values.begin(), values.end());
    if (!(values.front() < values.back())) continue;

    const double lo = cell.lower[f];
    const double width = cell.width(f);
    for (std::size_t i = 0; i + 1 < n_t; ++i) {
      const double a = values[i];
      const double b = values[i + 1];
      if (!(a < b)) continue;
      const double threshold = a + 0.5 * (b - a);
      // Adjacent doubles: the midpoint rounds onto an endpoint.
      if (!(a < threshold && threshold < b)) continue;

      SplitEvaluation cand;
      cand.feature = f;
      cand.threshold = threshold;
      cand.n_left = i + 1;
      cand.n_right = n_t - cand.n_left;
      cand.lambda_left = (threshold - lo) / width;
      if (!(cand.lambda_left > 0.0 && cand.lambda_left < 1.0)) continue;
      cand.lambda_right = 1.0 - cand.lambda_left;
      cand.proxy_value =
          evaluate_split(search, n_t, cand.n_left, cand.lambda_left);
      if (!best || better_split(cand, *best)) best = cand;
    }
  }
  return best;
}

/// Convenience overload: every row of `node_data` belongs to the node.
inline std::optional<SplitEvaluation> find_best_split(
    const Matrix& node_data, const Cell& cell,
    std::span<const std::size_t> candidate_features,
    const SplitSearch& search) {
  std::vector<std::uint32_t> rows(node_data.rows());
  std::iota(rows.begin(), rows.end(), 0u);
  return find_best_split(node_data, rows, cell, candidate_features, search);
}

}  // namespace ocrf
