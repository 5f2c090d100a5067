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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "ocrf/cell.hpp"
#include "ocrf/criteria.hpp"
#include "ocrf/dataset.hpp"
#include "ocrf/error.hpp"
#include "ocrf/model.hpp"
#include "ocrf/random.hpp"

namespace ocrf {

struct GrowthConfig {
  std::size_t max_depth = 1;
  std::size_t max_features_node = 5;
  Criterion criterion = Criterion::OcGini;
  double gamma = 1.0;
  double naive_alpha_n = 1.0;
  std::size_t min_node_points = 2;
  std::optional<double> stop_density_above;
  std::optional<double> stop_density_below;
};

namespace detail {

class TreeGrower {
 public:
  TreeGrower(const Matrix& data, const GrowthConfig& config, Rng& rng)
      : data_(data), config_(config), rng_(rng) {}

  OneClassTree grow() {
    OneClassTree tree;
    tree.subsample_size = data_.rows();
    tree.feature_subset.resize(data_.cols());
    std::iota(tree.feature_subset.begin(), tree.feature_subset.end(),
              std::size_t{0});

    Cell root = bounding_box(data_);
    for (std::size_t j = 0; j < root.dims(); ++j) {
      if (root.width(j) > 0) measured_.push_back(j);
    }
    root_log_volume_ = measured_.empty() ? 0.0 : cell_log_volume(root, measured_);

    std::vector<std::uint32_t> rows(data_.rows());
    std::iota(rows.begin(), rows.end(), 0u);
    all_features_.resize(data_.cols());
    std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});

    nodes_ = &tree.nodes;
    build(std::move(root), rows, 0);
    tree.finalize();
    return tree;
  }

 private:
  // Pre-order: a node draws its candidate features before either child is
  // built, and the left subtree is built before the right one.
  std::uint32_t build(Cell cell, std::span<std::uint32_t> rows,
                      std::uint32_t depth) {
    const auto index = static_cast<std::uint32_t>(nodes_->size());
    {
      TreeNode node;
      node.cell = std::move(cell);
      node.depth = depth;
      node.n_inliers = rows.size();
      nodes_->push_back(std::move(node));
    }
    if (should_stop(index)) return index;

    const std::size_t k =
        std::min(config_.max_features_node, all_features_.size());
    std::vector<std::size_t> candidates =
        k == all_features_.size() ? all_features_
                                  : rng_.sample_from(all_features_, k);
    std::sort(candidates.begin(), candidates.end());

    SplitSearch search{config_.criterion, config_.gamma, config_.naive_alpha_n,
                       root_fraction(index)};
    const auto best = find_best_split(data_, rows, (*nodes_)[index].cell,
                                      candidates, search);
    if (!best) return index;

    const auto mid = std::partition(rows.begin(), rows.end(), [&](auto r) {
      return data_(r, best->feature) < best->threshold;
    });
    detail::require(static_cast<std::size_t>(mid - rows.begin()) == best->n_left,
                    "grow_tree: partition disagrees with split counts");

    auto [left_cell, right_cell] =
        split_cell((*nodes_)[index].cell, best->feature, best->threshold);
    (*nodes_)[index].split_feature = static_cast<std::int32_t>(best->feature);
    (*nodes_)[index].split_threshold = best->threshold;

    const auto left = build(std::move(left_cell),
                            rows.subspan(0, best->n_left), depth + 1);
    (*nodes_)[index].left = left;
    const auto right =
        build(std::move(right_cell), rows.subspan(best->n_left), depth + 1);
    (*nodes_)[index].right = right;
    return index;
  }

  bool should_stop(std::uint32_t index) const {
    const TreeNode& n = (*nodes_)[index];
    if (n.depth >= config_.max_depth) return true;
    if (n.n_inliers < config_.min_node_points) return true;
    if (config_.stop_density_above || config_.stop_density_below) {
      const double log_vol =
          measured_.empty() ? 0.0 : cell_log_volume(n.cell, measured_);
      const double density =
          static_cast<double>(n.n_inliers) * std::exp(-log_vol);
      if (config_.stop_density_above && density >= *config_.stop_density_above)
        return true;
      if (config_.stop_density_below && density <= *config_.stop_density_below)
        return true;
    }
    return false;
  }

  double root_fraction(std::uint32_t index) const {
    if (config_.criterion != Criterion::NaiveOcGini || measured_.empty())
      return 1.0;
    const double log_vol = cell_log_volume((*nodes_)[index].cell, measured_);
    return std::exp(log_vol - root_log_volume_);
  }

  const Matrix& data_;
  const GrowthConfig& config_;
  Rng& rng_;
  std::vector<TreeNode>* nodes_ = nullptr;
  std::vector<std::size_t> measured_;
  std::vector<std::size_t> all_features_;
  double root_log_volume_ = 0.0;
};

}  // namespace detail

/// Grows one tree on `rows` (the sub-sample, restricted to the tree's
/// features). The root cell is the bounding box of `rows`. A node becomes a
/// leaf at max_depth, below min_node_points points, when an enabled density
/// stop fires, or when none of its drawn candidate features can be split.
///
/// `rng` is consumed in pre-order: each internal-node candidate draws
/// min(max_features_node, cols) features without replacement (no draw when
/// that is every feature), then the left subtree, then the right subtree.
inline OneClassTree grow_tree(const Matrix& rows, const GrowthConfig& config,
                              Rng& rng) {
  if (rows.rows() == 0) throw PreconditionError("grow_tree: no rows");
  detail::require(rows.cols() >= 1, "grow_tree: no features");
  detail::require(config.min_node_points >= 1,
                  "grow_tree: min_node_points must be >= 1");
  return detail::TreeGrower(rows, config, rng).grow();
}

/// Impurity decrease of a chosen split relative to the proportional-split
/// baseline gamma*n_t/(1+gamma), clamped at zero.
inline double node_gain(std::size_t n_t, const SplitEvaluation& best,
                        double gamma) {
  const double baseline = gamma * static_cast<double>(n_t) / (1.0 + gamma);
  return std::max(0.0, baseline - best.proxy_value);
}

/// node_gain of a stored node under the one-class Gini proxy; 0 for leaves.
inline double node_gain(const OneClassTree& tree, const TreeNode& node,
                        double gamma) {
  if (node.is_leaf()) return 0.0;
  const auto f = static_cast<std::size_t>(node.split_feature);
  SplitEvaluation eval;
  eval.feature = f;
  eval.threshold = node.split_threshold;
  eval.n_left = tree.nodes[node.left].n_inliers;
  eval.n_right = tree.nodes[node.right].n_inliers;
  eval.lambda_left = left_volume_fraction(node.cell, f, node.split_threshold);
  eval.lambda_right = 1.0 - eval.lambda_left;
  eval.proxy_value =
      oc_gini_proxy(static_cast<double>(node.n_inliers),
                    static_cast<double>(eval.n_left), eval.lambda_left, gamma);
  return node_gain(node.n_inliers, eval, gamma);
}

}  // namespace ocrf
