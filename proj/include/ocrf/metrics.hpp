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

// Ranking metrics. Scores follow the "higher = more abnormal" orientation and
// label 1 marks the positive (outlier) class.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ranges>
#include <span>
#include <vector>

#include "ocrf/error.hpp"

namespace ocrf {

namespace detail {

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

template <typename Labels>
ClassCounts check_binary(std::span<const double> scores, const Labels& labels) {
  require(scores.size() == std::ranges::size(labels),
          "metric: scores and labels differ in length");
  ClassCounts c;
  for (const auto l : labels) {
    require(l == 0 || l == 1, "metric: labels must be 0 or 1");
    (l == 1 ? c.positives : c.negatives) += 1;
  }
  require(c.positives > 0 && c.negatives > 0,
          "metric: labels must contain both classes");
  return c;
}

inline std::vector<std::size_t> order_descending(std::span<const double> s) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  return order;
}

}  // namespace detail

/// Mann-Whitney statistic P(s_pos > s_neg) + P(s_pos = s_neg)/2, via the rank
/// sum with average ranks for ties.
template <std::ranges::random_access_range Labels>
double roc_auc(std::span<const double> scores, const Labels& labels) {
  const auto counts = detail::check_binary(scores, labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1 .. j share their average.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += avg_rank;
    }
    i = j;
  }
  const auto np = static_cast<double>(counts.positives);
  const auto nn = static_cast<double>(counts.negatives);
  const double u = positive_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

/// Average precision: sum over descending-score blocks of
/// (R_k - R_{k-1}) * P_k, where a block groups equal scores.
template <std::ranges::random_access_range Labels>
double pr_auc(std::span<const double> scores, const Labels& labels) {
  const auto counts = detail::check_binary(scores, labels);
  const auto order = detail::order_descending(scores);
  const auto np = static_cast<double>(counts.positives);
  double ap = 0.0;
  std::size_t tp = 0, fp = 0, i = 0;
  double prev_recall = 0.0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    const double recall = static_cast<double>(tp) / np;
    const double precision =
        static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

/// (fpr, tpr) after each descending-score block, starting at (0, 0).
template <std::ranges::random_access_range Labels>
std::vector<CurvePoint> roc_curve(std::span<const double> scores,
                                  const Labels& labels) {
  const auto counts = detail::check_binary(scores, labels);
  const auto order = detail::order_descending(scores);
  std::vector<CurvePoint> pts{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    pts.push_back({static_cast<double>(fp) / static_cast<double>(counts.negatives),
                   static_cast<double>(tp) / static_cast<double>(counts.positives)});
    i = j;
  }
  return pts;
}

/// (recall, precision) after each descending-score block.
template <std::ranges::random_access_range Labels>
std::vector<CurvePoint> pr_curve(std::span<const double> scores,
                                 const Labels& labels) {
  const auto counts = detail::check_binary(scores, labels);
  const auto order = detail::order_descending(scores);
  std::vector<CurvePoint> pts;
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? tp : fp) += 1;
      ++j;
    }
    pts.push_back({static_cast<double>(tp) / static_cast<double>(counts.positives),
                   static_cast<double>(tp) / static_cast<double>(tp + fp)});
    i = j;
  }
  return pts;
}

}  // namespace ocrf
