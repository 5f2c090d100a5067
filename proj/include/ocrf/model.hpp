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

// Tree and forest data model shared by the one-class builder, the isolation
// forest baseline, scoring and serialization.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocrf/cell.hpp"
#include "ocrf/error.hpp"

namespace ocrf {

enum class Criterion : std::uint8_t { OcGini = 0, OcShannon = 1, NaiveOcGini = 2 };

enum class ModelKind : std::uint8_t { OneClassForest = 0, IsolationForest = 1 };

inline std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::OcGini: return "oc-gini";
    case Criterion::OcShannon: return "oc-shannon";
    case Criterion::NaiveOcGini: return "naive";
  }
  return "?";
}

inline Criterion parse_criterion(std::string_view s) {
  if (s == "oc-gini") return Criterion::OcGini;
  if (s == "oc-shannon") return Criterion::OcShannon;
  if (s == "naive") return Criterion::NaiveOcGini;
  throw PreconditionError("unknown criterion '" + std::string(s) + "'");
}

inline std::string_view to_string(ModelKind k) {
  return k == ModelKind::OneClassForest ? "ocrf" : "iforest";
}

/// Forest hyperparameters.
///
/// Rows per tree: max(ceil(max_samples_fraction * n), min(max_samples_floor, n)).
/// Features per tree: max(ceil(max_features_tree_fraction * d),
///                        min(max_features_tree_floor, d)).
/// max_depth, when unset, is ceil(log2(rows per tree)).
struct HyperParams {
  double max_samples_fraction = 0.20;
  std::size_t max_samples_floor = 100;
  double max_features_tree_fraction = 0.50;
  std::size_t max_features_tree_floor = 5;
  std::size_t max_features_node = 5;
  double gamma = 1.0;
  std::optional<std::size_t> max_depth;
  std::size_t n_trees = 100;
  Criterion criterion = Criterion::OcGini;
  double naive_alpha_n = 1.0;  // only read by Criterion::NaiveOcGini
  std::uint64_t seed = 0;

  // Optional stopping rules, all off by default.
  std::size_t min_node_points = 2;
  std::optional<double> stop_density_above;  // leaf when n_t/Leb(X_t) >= value
  std::optional<double> stop_density_below;  // leaf when n_t/Leb(X_t) <= value

  void validate() const {
    detail::require(max_samples_fraction > 0 && max_samples_fraction <= 1,
                    "max_samples_fraction must be in (0,1]");
    detail::require(max_samples_floor >= 1, "max_samples_floor must be >= 1");
    detail::require(
        max_features_tree_fraction > 0 && max_features_tree_fraction <= 1,
        "max_features_tree_fraction must be in (0,1]");
    detail::require(max_features_tree_floor >= 1,
                    "max_features_tree_floor must be >= 1");
    detail::require(max_features_node >= 1, "max_features_node must be >= 1");
    detail::require(gamma > 0 && std::isfinite(gamma), "gamma must be > 0");
    detail::require(!max_depth || *max_depth >= 1, "max_depth must be >= 1");
    detail::require(n_trees >= 1, "n_trees must be >= 1");
    detail::require(naive_alpha_n > 0, "naive_alpha_n must be > 0");
    detail::require(min_node_points >= 1, "min_node_points must be >= 1");
  }

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// ceil(log2(n)) for n >= 1, as an integer (0 for n = 1).
constexpr std::size_t ceil_log2(std::size_t n) noexcept {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

/// ceil(fraction * n) with a small guard against 0.2 * 1000 = 200.00000001.
inline std::size_t ceil_fraction(double fraction, std::size_t n) {
  return static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

inline std::size_t rows_per_tree(const HyperParams& p, std::size_t n) {
  return std::min(n, std::max(ceil_fraction(p.max_samples_fraction, n),
                              std::min(p.max_samples_floor, n)));
}

inline std::size_t features_per_tree(const HyperParams& p, std::size_t d) {
  return std::min(d, std::max(ceil_fraction(p.max_features_tree_fraction, d),
                              std::min(p.max_features_tree_floor, d)));
}

inline constexpr std::uint32_t kNoChild = 0xFFFFFFFFu;

/// One node of a tree. Feature indices are positions in the owning tree's
/// feature_subset; the cell has one dimension per entry of that subset.
struct TreeNode {
  Cell cell;
  std::uint32_t depth = 0;
  std::uint64_t n_inliers = 0;
  std::int32_t split_feature = -1;  // -1 for leaves
  double split_threshold = 0.0;
  std::uint32_t left = kNoChild;
  std::uint32_t right = kNoChild;
  // log Leb(cell) over the tree's measured features. Derived; see
  // OneClassTree::finalize.
  double log_volume = 0.0;

  bool is_leaf() const noexcept { return split_feature < 0; }

  friend bool operator==(const TreeNode& a, const TreeNode& b) {
    return a.cell == b.cell && a.depth == b.depth &&
           a.n_inliers == b.n_inliers && a.split_feature == b.split_feature &&
           a.split_threshold == b.split_threshold && a.left == b.left &&
           a.right == b.right;
  }
};

/// A trained tree. Nodes are stored in pre-order; nodes[0] is the root.
struct OneClassTree {
  std::vector<TreeNode> nodes;
  std::size_t subsample_size = 0;
  std::vector<std::size_t> feature_subset;  // ascending global indices

  const TreeNode& root() const { return nodes.front(); }

  /// Index of the leaf reached by `x` (a point in the full feature space).
  /// Routing uses threshold comparisons only, so points outside the root
  /// cell still land in a boundary leaf.
  std::uint32_t leaf_index(std::span<const double> x) const noexcept {
    std::uint32_t i = 0;
    while (!nodes[i].is_leaf()) {
      const auto& n = nodes[i];
      const double v =
          x[feature_subset[static_cast<std::size_t>(n.split_feature)]];
      i = v < n.split_threshold ? n.left : n.right;
    }
    return i;
  }

  const TreeNode& leaf(std::span<const double> x) const noexcept {
    return nodes[leaf_index(x)];
  }

  std::size_t global_feature(const TreeNode& n) const {
    return feature_subset.at(static_cast<std::size_t>(n.split_feature));
  }

  /// Local features of positive root width. A zero-width root feature carries
  /// no volume; Lebesgue measures are taken over the remaining features so
  /// that leaf densities stay finite.
  std::vector<std::size_t> measured_features() const {
    std::vector<std::size_t> out;
    const Cell& c = root().cell;
    for (std::size_t j = 0; j < c.dims(); ++j) {
      if (c.width(j) > 0) out.push_back(j);
    }
    return out;
  }

  /// Recomputes the derived per-node log volumes.
  void finalize() {
    const auto measured = measured_features();
    for (auto& n : nodes) {
      n.log_volume = measured.empty() ? 0.0 : cell_log_volume(n.cell, measured);
    }
  }

  std::size_t depth() const noexcept {
    std::uint32_t d = 0;
    for (const auto& n : nodes) d = std::max(d, n.depth);
    return d;
  }

  friend bool operator==(const OneClassTree&, const OneClassTree&) = default;
};

/// Trained ensemble. Immutable after training; safe to share across threads.
struct Forest {
  ModelKind kind = ModelKind::OneClassForest;
  HyperParams hyperparams;
  std::size_t train_dims = 0;
  std::vector<OneClassTree> trees;

  friend bool operator==(const Forest&, const Forest&) = default;
};

}  // namespace ocrf
