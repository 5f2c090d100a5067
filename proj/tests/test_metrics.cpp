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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ocrf/metrics.hpp"
#include "oracles.hpp"

namespace ocrf {
namespace {

using Labels = std::vector<std::uint8_t>;
using Scores = std::vector<double>;

TEST(RocAuc, HandValues) {
  EXPECT_EQ(roc_auc(Scores{0.9, 0.8, 0.2, 0.1}, Labels{1, 1, 0, 0}), 1.0);
  EXPECT_EQ(roc_auc(Scores{0.9, 0.8, 0.2, 0.1}, Labels{0, 0, 1, 1}), 0.0);
  EXPECT_EQ(roc_auc(Scores{0.5, 0.5, 0.5, 0.5}, Labels{1, 0, 1, 0}), 0.5);
}

TEST(RocAuc, SingleClassRejected) {
  EXPECT_THROW(roc_auc(Scores{1, 2}, Labels{1, 1}), PreconditionError);
  EXPECT_THROW(pr_auc(Scores{1, 2}, Labels{0, 0}), PreconditionError);
  EXPECT_THROW(roc_auc(Scores{1, 2}, Labels{1}), PreconditionError);
  EXPECT_THROW(roc_auc(Scores{1, 2}, Labels{1, 3}), PreconditionError);
}

TEST(PrAuc, HandValues) {
  EXPECT_EQ(pr_auc(Scores{4, 3, 2, 1}, Labels{1, 1, 0, 0}), 1.0);
  EXPECT_NEAR(pr_auc(Scores{3, 2, 1}, Labels{1, 0, 1}), 0.5 * (1.0 + 2.0 / 3.0), 1e-15);
}

TEST(PrAuc, ConstantScoresGivePrevalence) {
  const Labels y{1, 0, 0, 1, 0, 0, 0, 0, 1, 0};
  EXPECT_NEAR(pr_auc(Scores(10, 0.3), y), 0.3, 1e-15);
}

Labels random_labels(std::mt19937_64& gen, std::size_t n) {
  std::bernoulli_distribution b(std::uniform_real_distribution<double>(0.05, 0.6)(gen));
  Labels y(n);
  bool pos = false, neg = false;
  for (auto& v : y) {
    v = b(gen);
    (v ? pos : neg) = true;
  }
  if (!pos) y[0] = 1;
  if (!neg) y[n - 1] = 0;
  return y;
}

Scores random_scores(std::mt19937_64& gen, std::size_t n) {
  // Coarse grid to force ties.
  std::uniform_int_distribution<int> coarse(0, static_cast<int>(n / 3 + 1));
  Scores s(n);
  for (auto& v : s) v = coarse(gen) * 0.25;
  return s;
}

TEST(RocAuc, MatchesPairwiseOracle) {
  std::mt19937_64 gen(123);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 199;
    const auto y = random_labels(gen, n);
    const auto s = random_scores(gen, n);
    EXPECT_NEAR(roc_auc(s, y), static_cast<double>(oracle::pairwise_auc(s, y)), 1e-12);
  }
}

TEST(PrAuc, MatchesStepSumOracle) {
  std::mt19937_64 gen(321);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) % 49;
    const auto y = random_labels(gen, n);
    const auto s = random_scores(gen, n);
    EXPECT_NEAR(pr_auc(s, y), static_cast<double>(oracle::step_average_precision(s, y)),
                1e-12);
  }
}

TEST(Metrics, NegationGivesComplementAuc) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto y = random_labels(gen, 60);
    const auto s = random_scores(gen, 60);
    Scores neg;
    for (double v : s) neg.push_back(-v);
    EXPECT_NEAR(roc_auc(neg, y), 1.0 - roc_auc(s, y), 1e-12);
  }
}

TEST(Metrics, StrictlyIncreasingTransformInvariance) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto y = random_labels(gen, 80);
    const auto s = random_scores(gen, 80);
    Scores t;
    for (double v : s) t.push_back(std::exp(3 * v) - 7);
    EXPECT_NEAR(roc_auc(t, y), roc_auc(s, y), 1e-12);
    EXPECT_NEAR(pr_auc(t, y), pr_auc(s, y), 1e-12);
  }
}

TEST(Curves, RocEndpointsAndMonotone) {
  const Scores s{0.9, 0.8, 0.8, 0.3, 0.1};
  const Labels y{1, 0, 1, 0, 0};
  const auto roc = roc_curve(s, y);
  ASSERT_EQ(roc.size(), 5u);  // origin + 4 distinct scores
  EXPECT_EQ(roc.front().x, 0.0);
  EXPECT_EQ(roc.front().y, 0.0);
  EXPECT_EQ(roc.back().x, 1.0);
  EXPECT_EQ(roc.back().y, 1.0);
  for (std::size_t i = 1; i < roc.size(); ++i) {
    EXPECT_GE(roc[i].x, roc[i - 1].x);
    EXPECT_GE(roc[i].y, roc[i - 1].y);
  }
  // Trapezoid area under the step-with-ties curve equals the rank AUC.
  double area = 0;
  for (std::size_t i = 1; i < roc.size(); ++i)
    area += (roc[i].x - roc[i - 1].x) * 0.5 * (roc[i].y + roc[i - 1].y);
  EXPECT_NEAR(area, roc_auc(s, y), 1e-15);
}

TEST(Curves, PrCurvePoints) {
  const auto pr = pr_curve(Scores{3, 2, 1}, Labels{1, 0, 1});
  ASSERT_EQ(pr.size(), 3u);
  EXPECT_EQ(pr[0].x, 0.5);
  EXPECT_EQ(pr[0].y, 1.0);
  EXPECT_EQ(pr[1].x, 0.5);
  EXPECT_EQ(pr[1].y, 0.5);
  EXPECT_EQ(pr[2].x, 1.0);
  EXPECT_NEAR(pr[2].y, 2.0 / 3, 1e-15);
}

}  // namespace
}  // namespace ocrf
