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

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <vector>

#include "ocrf/dataset.hpp"
#include "ocrf/error.hpp"
#include "ocrf/model.hpp"
#include "ocrf/parallel.hpp"
#include "ocrf/random.hpp"
#include "ocrf/tree_builder.hpp"

namespace ocrf {

struct TrainOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

namespace detail {

inline void check_deadline(const TrainOptions& options) {
  if (options.deadline && std::chrono::steady_clock::now() > *options.deadline)
    throw TimeoutError("training exceeded its time limit");
}

inline Matrix gather(const Matrix& features, std::span<const std::size_t> rows,
                     std::span<const std::size_t> cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = features.row(rows[i]);
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = src[cols[j]];
  }
  return out;
}

}  // namespace detail

/// Trains a one-class random forest. Labels, if any, are ignored.
///
/// Tree k uses Rng(stream_seed(params.seed, k)) for, in order: its rows
/// (without replacement), its features (without replacement), then the
/// node-level draws of grow_tree. Output is independent of `threads`.
inline Forest train(const Dataset& dataset, const HyperParams& params,
                    const TrainOptions& options = {}) {
  params.validate();
  dataset.validate();
  const std::size_t n = dataset.n_rows();
  const std::size_t d = dataset.n_cols();
  if (n < 2) throw PreconditionError("train: needs at least 2 rows");

  const std::size_t m = rows_per_tree(params, n);
  const std::size_t k = features_per_tree(params, d);

  GrowthConfig config;
  config.max_depth = params.max_depth.value_or(ceil_log2(m));
  config.max_features_node = params.max_features_node;
  config.criterion = params.criterion;
  config.gamma = params.gamma;
  config.naive_alpha_n = params.naive_alpha_n;
  config.min_node_points = params.min_node_points;
  config.stop_density_above = params.stop_density_above;
  config.stop_density_below = params.stop_density_below;

  Forest forest;
  forest.kind = ModelKind::OneClassForest;
  forest.hyperparams = params;
  forest.train_dims = d;
  forest.trees.resize(params.n_trees);

  parallel_for(params.n_trees, options.threads, [&](std::size_t t) {
    detail::check_deadline(options);
    Rng rng(stream_seed(params.seed, t));
    auto rows = rng.sample_without_replacement(n, m);
    auto cols = rng.sample_without_replacement(d, k);
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    const Matrix local = detail::gather(dataset.features, rows, cols);
    OneClassTree tree = grow_tree(local, config, rng);
    tree.feature_subset = std::move(cols);
    forest.trees[t] = std::move(tree);
  });
  return forest;
}

/// Per-feature sum of weighted one-class Gini decreases, averaged over trees:
///   importance[j] = (1/T) sum_trees sum_{t: m_t = j} (n_t / subsample) gain(t).
/// Requires a forest grown with the one-class Gini criterion.
inline std::vector<double> variable_importance(const Forest& forest) {
  if (forest.kind != ModelKind::OneClassForest ||
      forest.hyperparams.criterion != Criterion::OcGini) {
    throw PreconditionError(
        "variable_importance: needs a one-class forest grown with oc-gini");
  }
  std::vector<double> importance(forest.train_dims, 0.0);
  if (forest.trees.empty()) return importance;
  const double gamma = forest.hyperparams.gamma;
  for (const auto& tree : forest.trees) {
    const auto sub = static_cast<double>(tree.subsample_size);
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      importance[tree.global_feature(node)] +=
          static_cast<double>(node.n_inliers) / sub *
          node_gain(tree, node, gamma);
    }
  }
  for (auto& v : importance) v /= static_cast<double>(forest.trees.size());
  return importance;
}

}  // namespace ocrf
