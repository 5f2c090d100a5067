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

// Isolation forest baseline: completely random splits on observed ranges,
// stored in the same tree types so it shares scoring and serialization.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ocrf/cell.hpp"
#include "ocrf/dataset.hpp"
#include "ocrf/error.hpp"
#include "ocrf/forest_trainer.hpp"
#include "ocrf/model.hpp"
#include "ocrf/parallel.hpp"
#include "ocrf/random.hpp"

namespace ocrf {

struct IForestParams {
  std::size_t n_trees = 100;
  std::size_t max_samples = 256;  // capped at n
  std::uint64_t seed = 0;
};

namespace detail {

class IsolationTreeGrower {
 public:
  IsolationTreeGrower(const Matrix& data, std::size_t max_depth, Rng& rng)
      : data_(data), max_depth_(max_depth), rng_(rng) {}

  OneClassTree grow() {
    OneClassTree tree;
    tree.subsample_size = data_.rows();
    tree.feature_subset.resize(data_.cols());
    std::iota(tree.feature_subset.begin(), tree.feature_subset.end(),
              std::size_t{0});
    std::vector<std::uint32_t> rows(data_.rows());
    std::iota(rows.begin(), rows.end(), 0u);
    nodes_ = &tree.nodes;
    build(bounding_box(data_), rows, 0);
    tree.finalize();
    return tree;
  }

 private:
  std::uint32_t build(Cell cell, std::span<std::uint32_t> rows,
                      std::uint32_t depth) {
    const auto index = static_cast<std::uint32_t>(nodes_->size());
    TreeNode node;
    node.cell = std::move(cell);
    node.depth = depth;
    node.n_inliers = rows.size();
    nodes_->push_back(std::move(node));
    if (depth >= max_depth_ || rows.size() < 2) return index;

    // Observed range of every feature in the node.
    std::vector<std::size_t> splittable;
    std::vector<double> lo(data_.cols()), hi(data_.cols());
    for (std::size_t j = 0; j < data_.cols(); ++j) {
      double a = data_(rows[0], j), b = a;
      for (const auto r : rows) {
        a = std::min(a, data_(r, j));
        b = std::max(b, data_(r, j));
      }
      lo[j] = a;
      hi[j] = b;
      if (a < b) splittable.push_back(j);
    }
    if (splittable.empty()) return index;

    const std::size_t f = splittable[rng_.uniform_index(splittable.size())];
    double threshold = lo[f];
    while (!(lo[f] < threshold && threshold < hi[f])) {
      threshold = lo[f] + rng_.uniform01() * (hi[f] - lo[f]);
    }

    const auto mid = std::partition(rows.begin(), rows.end(), [&](auto r) {
      return data_(r, f) < threshold;
    });
    const auto n_left = static_cast<std::size_t>(mid - rows.begin());
    auto [left_cell, right_cell] =
        split_cell((*nodes_)[index].cell, f, threshold);
    (*nodes_)[index].split_feature = static_cast<std::int32_t>(f);
    (*nodes_)[index].split_threshold = threshold;
    const auto left =
        build(std::move(left_cell), rows.subspan(0, n_left), depth + 1);
    (*nodes_)[index].left = left;
    const auto right =
        build(std::move(right_cell), rows.subspan(n_left), depth + 1);
    (*nodes_)[index].right = right;
    return index;
  }

  const Matrix& data_;
  std::size_t max_depth_;
  Rng& rng_;
  std::vector<TreeNode>* nodes_ = nullptr;
};

}  // namespace detail

/// Isolation forest on all features. Each tree sub-samples
/// min(max_samples, n) rows without replacement and is capped at depth
/// ceil(log2(that size)). At each node a feature is drawn uniformly among
/// those non-constant in the node and the threshold uniformly in the open
/// interval of its observed values.
inline Forest train_iforest(const Dataset& dataset, const IForestParams& params,
                            const TrainOptions& options = {}) {
  dataset.validate();
  const std::size_t n = dataset.n_rows();
  const std::size_t d = dataset.n_cols();
  if (n < 2) throw PreconditionError("train_iforest: needs at least 2 rows");
  detail::require(params.n_trees >= 1, "train_iforest: n_trees must be >= 1");
  detail::require(params.max_samples >= 2,
                  "train_iforest: max_samples must be >= 2");

  const std::size_t m = std::min(params.max_samples, n);
  const std::size_t max_depth = ceil_log2(m);

  Forest forest;
  forest.kind = ModelKind::IsolationForest;
  forest.hyperparams.n_trees = params.n_trees;
  forest.hyperparams.seed = params.seed;
  forest.hyperparams.max_depth = max_depth;
  forest.hyperparams.max_samples_floor = params.max_samples;
  forest.hyperparams.max_samples_fraction = 1.0;
  forest.hyperparams.max_features_tree_fraction = 1.0;
  forest.hyperparams.max_features_tree_floor = d;
  forest.hyperparams.max_features_node = 1;
  forest.train_dims = d;
  forest.trees.resize(params.n_trees);

  std::vector<std::size_t> all_cols(d);
  std::iota(all_cols.begin(), all_cols.end(), std::size_t{0});

  parallel_for(params.n_trees, options.threads, [&](std::size_t t) {
    detail::check_deadline(options);
    Rng rng(stream_seed(params.seed, t));
    auto rows = rng.sample_without_replacement(n, m);
    std::sort(rows.begin(), rows.end());
    const Matrix local = detail::gather(dataset.features, rows, all_cols);
    forest.trees[t] = detail::IsolationTreeGrower(local, max_depth, rng).grow();
  });
  return forest;
}

}  // namespace ocrf
