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

// Benchmark protocol: repeated random train/test splits in the novelty
// detection (train on inliers only) or outlier detection (train on polluted
// data) setting, scored by ROC-AUC and average precision.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocrf/dataset.hpp"
#include "ocrf/error.hpp"
#include "ocrf/forest_trainer.hpp"
#include "ocrf/iforest.hpp"
#include "ocrf/metrics.hpp"
#include "ocrf/model.hpp"
#include "ocrf/random.hpp"
#include "ocrf/scoring.hpp"

namespace ocrf {

enum class DetectionMode { NoveltyDetection, OutlierDetection };

inline std::string_view to_string(DetectionMode m) {
  return m == DetectionMode::NoveltyDetection ? "novelty" : "outlier";
}

inline DetectionMode parse_mode(std::string_view s) {
  if (s == "novelty") return DetectionMode::NoveltyDetection;
  if (s == "outlier") return DetectionMode::OutlierDetection;
  throw PreconditionError("unknown mode '" + std::string(s) + "'");
}

struct Protocol {
  DetectionMode mode = DetectionMode::NoveltyDetection;
  double test_fraction = 0.5;
  double anomaly_cap = 0.10;  // OutlierDetection only
  std::size_t n_repeats = 10;
  std::uint64_t base_seed = 0;
  std::optional<double> timeout_seconds = 1800.0;

  void validate() const {
    detail::require(test_fraction > 0 && test_fraction < 1,
                    "test_fraction must lie in (0,1)");
    detail::require(anomaly_cap > 0 && anomaly_cap < 1,
                    "anomaly_cap must lie in (0,1)");
    detail::require(n_repeats >= 1, "n_repeats must be >= 1");
    detail::require(!timeout_seconds || *timeout_seconds > 0,
                    "timeout_seconds must be > 0");
  }
};

enum class Algorithm { OneClassRF, IsolationForest };

inline std::string_view to_string(Algorithm a) {
  return a == Algorithm::OneClassRF ? "ocrf" : "iforest";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "ocrf") return Algorithm::OneClassRF;
  if (s == "iforest") return Algorithm::IsolationForest;
  throw PreconditionError("unknown algorithm '" + std::string(s) + "'");
}

struct ModelConfig {
  Algorithm algorithm = Algorithm::OneClassRF;
  HyperParams ocrf;
  IForestParams iforest;
  ScoreKind score = ScoreKind::DepthScore;
  unsigned threads = 0;
};

/// Trains the configured model with `seed`. The protocol overrides the seed
/// stored in the config.
inline Forest fit(const Dataset& train_set, const ModelConfig& config,
                  std::uint64_t seed, const TrainOptions& options = {}) {
  if (config.algorithm == Algorithm::OneClassRF) {
    HyperParams p = config.ocrf;
    p.seed = seed;
    return train(train_set, p, options);
  }
  IForestParams p = config.iforest;
  p.seed = seed;
  return train_iforest(train_set, p, options);
}

struct RepeatRecord {
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  bool timed_out = false;
  double roc_auc = 0.0;
  double pr_auc = 0.0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
  std::size_t n_train = 0;
  std::size_t n_train_outliers = 0;
  std::size_t n_test = 0;
  std::size_t n_test_outliers = 0;

  double train_anomaly_rate() const {
    return n_train == 0 ? 0.0
                        : static_cast<double>(n_train_outliers) /
                              static_cast<double>(n_train);
  }
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
};

inline MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (const double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

struct EvalReport {
  std::string dataset;
  ModelConfig model;
  Protocol protocol;
  std::vector<RepeatRecord> repeats;
  // False when any repeat hit the training time limit; aggregates are then
  // reported as NA.
  bool complete = true;
  MeanStd roc_auc;
  MeanStd pr_auc;
  MeanStd train_seconds;
  MeanStd test_seconds;
  // Curves of repeat 0.
  std::vector<CurvePoint> roc_curve;
  std::vector<CurvePoint> pr_curve;
};

/// Row indices of one repeat's train and test sets.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Builds the train/test split of one repeat.
///
/// OutlierDetection first keeps at most floor(cap * n_in / (1 - cap))
/// outliers, drawn uniformly without replacement. Both modes then split
/// each class separately: the test set takes ceil(f * n_out) outliers and
/// floor(f * n_in) inliers, so the training anomaly rate never exceeds the
/// pre-split rate. NoveltyDetection finally drops outliers from training.
inline SplitIndices split_for_repeat(std::span<const std::uint8_t> labels,
                                     const Protocol& protocol, Rng& rng) {
  std::vector<std::size_t> inliers, outliers;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] ? outliers : inliers).push_back(i);
  if (outliers.empty()) throw PreconditionError("protocol: dataset has no outliers");
  if (inliers.empty()) throw PreconditionError("protocol: dataset has no inliers");

  if (protocol.mode == DetectionMode::OutlierDetection) {
    const auto cap = static_cast<std::size_t>(
        std::floor(protocol.anomaly_cap * static_cast<double>(inliers.size()) /
                       (1.0 - protocol.anomaly_cap) +
                   1e-9));
    if (cap == 0)
      throw PreconditionError("protocol: too few inliers for the anomaly cap");
    if (outliers.size() > cap) {
      outliers = rng.sample_from(std::move(outliers), cap);
      std::sort(outliers.begin(), outliers.end());
    }
  }

  const double f = protocol.test_fraction;
  const auto n_in = inliers.size();
  const auto n_out = outliers.size();
  const auto test_in = static_cast<std::size_t>(
      std::floor(f * static_cast<double>(n_in) + 1e-9));
  const auto test_out = std::min(
      n_out, static_cast<std::size_t>(std::ceil(f * static_cast<double>(n_out) - 1e-9)));
  if (test_in == 0 || test_out == 0)
    throw PreconditionError("protocol: test split would miss a class");
  if (n_in - test_in < 2)
    throw PreconditionError("protocol: fewer than 2 training inliers");

  inliers = rng.sample_from(std::move(inliers), n_in);
  outliers = rng.sample_from(std::move(outliers), n_out);

  SplitIndices split;
  split.test.assign(inliers.begin(), inliers.begin() + test_in);
  split.test.insert(split.test.end(), outliers.begin(),
                    outliers.begin() + test_out);
  split.train.assign(inliers.begin() + test_in, inliers.end());
  if (protocol.mode == DetectionMode::OutlierDetection) {
    split.train.insert(split.train.end(), outliers.begin() + test_out,
                       outliers.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

/// Runs protocol.n_repeats repeats with seeds base_seed + r. Repeats run one
/// after another; each one trains with config.threads workers.
inline EvalReport run_protocol(const Dataset& dataset, const ModelConfig& config,
                               const Protocol& protocol) {
  protocol.validate();
  dataset.validate();
  if (!dataset.labels) throw PreconditionError("protocol: dataset needs labels");
  const auto& labels = *dataset.labels;

  EvalReport report;
  report.model = config;
  report.protocol = protocol;

  using Clock = std::chrono::steady_clock;
  for (std::size_t r = 0; r < protocol.n_repeats; ++r) {
    RepeatRecord rec;
    rec.repeat = r;
    rec.seed = protocol.base_seed + r;

    Rng split_rng(rec.seed);
    const SplitIndices split = split_for_repeat(labels, protocol, split_rng);
    const Dataset train_set = dataset.select_rows(split.train);
    const Dataset test_set = dataset.select_rows(split.test);
    rec.n_train = train_set.n_rows();
    rec.n_test = test_set.n_rows();
    for (const auto l : *train_set.labels) rec.n_train_outliers += l;
    for (const auto l : *test_set.labels) rec.n_test_outliers += l;

    TrainOptions options;
    options.threads = config.threads;
    const auto t0 = Clock::now();
    if (protocol.timeout_seconds) {
      options.deadline =
          t0 + std::chrono::duration_cast<Clock::duration>(
                   std::chrono::duration<double>(*protocol.timeout_seconds));
    }
    std::optional<Forest> forest;
    try {
      forest = fit(train_set.without_labels(), config, rec.seed, options);
    } catch (const TimeoutError&) {
      rec.timed_out = true;
    }
    const auto t1 = Clock::now();
    rec.train_seconds = std::chrono::duration<double>(t1 - t0).count();
    if (rec.timed_out) {
      report.complete = false;
      report.repeats.push_back(rec);
      continue;
    }

    const auto raw =
        score_rows(*forest, config.score, test_set.features, config.threads);
    const auto scores = abnormality(config.score, raw);
    rec.test_seconds =
        std::chrono::duration<double>(Clock::now() - t1).count();
    rec.roc_auc = roc_auc(scores, *test_set.labels);
    rec.pr_auc = pr_auc(scores, *test_set.labels);
    if (r == 0) {
      report.roc_curve = ocrf::roc_curve(scores, *test_set.labels);
      report.pr_curve = ocrf::pr_curve(scores, *test_set.labels);
    }
    report.repeats.push_back(rec);
  }

  if (report.complete) {
    std::vector<double> roc, pr, tr, te;
    for (const auto& rec : report.repeats) {
      roc.push_back(rec.roc_auc);
      pr.push_back(rec.pr_auc);
      tr.push_back(rec.train_seconds);
      te.push_back(rec.test_seconds);
    }
    report.roc_auc = mean_std(roc);
    report.pr_auc = mean_std(pr);
    report.train_seconds = mean_std(tr);
    report.test_seconds = mean_std(te);
  }
  return report;
}

}  // namespace ocrf
