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
#include <cstdio>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ocrf/cell.hpp"
#include "ocrf/dataset.hpp"
#include "ocrf/error.hpp"
#include "ocrf/model.hpp"
#include "ocrf/parallel.hpp"

namespace ocrf {

/// DepthScore: higher is more abnormal. Both density kinds: lower is more
/// abnormal.
enum class ScoreKind { DepthScore, StepwiseDensity, TypicalCellDensity };

constexpr bool higher_is_abnormal(ScoreKind kind) noexcept {
  return kind == ScoreKind::DepthScore;
}

inline std::string_view to_string(ScoreKind k) {
  switch (k) {
    case ScoreKind::DepthScore: return "depth";
    case ScoreKind::StepwiseDensity: return "stepwise-density";
    case ScoreKind::TypicalCellDensity: return "typical-cell";
  }
  return "?";
}

inline ScoreKind parse_score_kind(std::string_view s) {
  if (s == "depth") return ScoreKind::DepthScore;
  if (s == "stepwise-density") return ScoreKind::StepwiseDensity;
  if (s == "typical-cell") return ScoreKind::TypicalCellDensity;
  throw PreconditionError("unknown score kind '" + std::string(s) + "'");
}

namespace detail {

// Exact partial sums H(i) = sum_{k=1..i} 1/k, accumulated in increasing k.
inline const std::vector<double>& harmonic_table() {
  static const std::vector<double> table = [] {
    constexpr std::size_t kSize = 1u << 16;
    std::vector<double> h(kSize);
    h[0] = 0.0;
    for (std::size_t i = 1; i < kSize; ++i)
      h[i] = h[i - 1] + 1.0 / static_cast<double>(i);
    return h;
  }();
  return table;
}

inline double harmonic_number(std::size_t i) {
  const auto& table = harmonic_table();
  if (i < table.size()) return table[i];
  double h = table.back();
  for (std::size_t k = table.size(); k <= i; ++k)
    h += 1.0 / static_cast<double>(k);
  return h;
}

inline void check_point(const Forest& forest, std::span<const double> x) {
  if (x.size() != forest.train_dims) {
    throw PreconditionError("point has " + std::to_string(x.size()) +
                            " features, model expects " +
                            std::to_string(forest.train_dims));
  }
}

}  // namespace detail

/// Average path length of an unsuccessful search in a random binary tree on
/// n points: c(n) = 2 H(n-1) - 2 (n-1)/n, c(1) = 0.
inline double harmonic_c(std::size_t n) {
  detail::require(n >= 1, "harmonic_c: n must be >= 1");
  if (n == 1) return 0.0;
  const auto nd = static_cast<double>(n);
  return 2.0 * detail::harmonic_number(n - 1) - 2.0 * (nd - 1.0) / nd;
}

/// d_leaf + c(n_leaf) for the leaf reached by x.
inline double tree_path_measure(const OneClassTree& tree,
                                std::span<const double> x) {
  const TreeNode& leaf = tree.leaf(x);
  return static_cast<double>(leaf.depth) +
         harmonic_c(std::max<std::uint64_t>(leaf.n_inliers, 1));
}

/// s(x) = 2^(-mean_trees(d_leaf + c(n_leaf)) / c(subsample size)), in (0, 1].
inline double depth_score(const Forest& forest, std::span<const double> x) {
  detail::require(!forest.trees.empty(), "depth_score: empty forest");
  detail::check_point(forest, x);
  double total = 0.0;
  for (const auto& tree : forest.trees) total += tree_path_measure(tree, x);
  const double mean = total / static_cast<double>(forest.trees.size());
  const double norm = harmonic_c(forest.trees.front().subsample_size);
  detail::require(norm > 0, "depth_score: trees were grown on a single row");
  return std::exp2(-mean / norm);
}

/// Mean over trees of n_leaf / Leb(leaf). A point outside a tree's root cell
/// takes the density of the boundary leaf it is routed to (extrapolation).
inline double stepwise_density(const Forest& forest, std::span<const double> x) {
  detail::require(!forest.trees.empty(), "stepwise_density: empty forest");
  detail::check_point(forest, x);
  double total = 0.0;
  for (const auto& tree : forest.trees) {
    const TreeNode& leaf = tree.leaf(x);
    total += static_cast<double>(leaf.n_inliers) * std::exp(-leaf.log_volume);
  }
  return total / static_cast<double>(forest.trees.size());
}

/// (sum_trees n_leaf) / (sum_trees Leb(leaf)); the volume sum is taken in
/// log space.
inline double typical_cell_density(const Forest& forest,
                                   std::span<const double> x) {
  detail::require(!forest.trees.empty(), "typical_cell_density: empty forest");
  detail::check_point(forest, x);
  double count = 0.0;
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> log_vols;
  log_vols.reserve(forest.trees.size());
  for (const auto& tree : forest.trees) {
    const TreeNode& leaf = tree.leaf(x);
    count += static_cast<double>(leaf.n_inliers);
    log_vols.push_back(leaf.log_volume);
    max_log = std::max(max_log, leaf.log_volume);
  }
  if (!std::isfinite(max_log))
    throw PreconditionError("typical_cell_density: zero total volume");
  if (count == 0.0) return 0.0;
  double acc = 0.0;
  for (const double lv : log_vols) acc += std::exp(lv - max_log);
  return std::exp(std::log(count) - (max_log + std::log(acc)));
}

inline double score_point(const Forest& forest, ScoreKind kind,
                          std::span<const double> x) {
  switch (kind) {
    case ScoreKind::DepthScore: return depth_score(forest, x);
    case ScoreKind::StepwiseDensity: return stepwise_density(forest, x);
    case ScoreKind::TypicalCellDensity: return typical_cell_density(forest, x);
  }
  return 0.0;
}

/// Raw scores of every row of `points`.
inline std::vector<double> score_rows(const Forest& forest, ScoreKind kind,
                                      const Matrix& points,
                                      unsigned threads = 1) {
  if (points.cols() != forest.train_dims) {
    throw PreconditionError("data has " + std::to_string(points.cols()) +
                            " features, model expects " +
                            std::to_string(forest.train_dims));
  }
  std::vector<double> out(points.rows());
  parallel_for(points.rows(), threads, [&](std::size_t i) {
    out[i] = score_point(forest, kind, points.row(i));
  });
  return out;
}

/// Scores oriented so that higher always means more abnormal.
inline std::vector<double> abnormality(ScoreKind kind,
                                       std::vector<double> raw) {
  if (!higher_is_abnormal(kind)) {
    for (auto& v : raw) v = -v;
  }
  return raw;
}

struct ScoreGrid {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> x;  // row-major: y varies slowest
  std::vector<double> y;
  std::vector<double> score;
};

/// Scores at the centers of an nx-by-ny regular grid over `bounds`. Rows are
/// emitted with x varying fastest.
inline ScoreGrid score_grid(const Forest& forest, ScoreKind kind,
                            const Cell& bounds, std::size_t nx,
                            std::size_t ny) {
  if (forest.train_dims != 2)
    throw PreconditionError("score grid requires d=2, model has d=" +
                            std::to_string(forest.train_dims));
  detail::require(bounds.dims() == 2, "score_grid: bounds must be 2-D");
  detail::require(nx >= 1 && ny >= 1, "score_grid: resolution must be >= 1");
  ScoreGrid grid;
  grid.nx = nx;
  grid.ny = ny;
  const double dx = bounds.width(0) / static_cast<double>(nx);
  const double dy = bounds.width(1) / static_cast<double>(ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double p[2] = {bounds.lower[0] + (static_cast<double>(ix) + 0.5) * dx,
                           bounds.lower[1] + (static_cast<double>(iy) + 0.5) * dy};
      grid.x.push_back(p[0]);
      grid.y.push_back(p[1]);
      grid.score.push_back(score_point(forest, kind, p));
    }
  }
  return grid;
}

/// `x,y,score` CSV with 9 significant digits.
inline void write_grid_csv(std::ostream& out, const ScoreGrid& grid) {
  out << "x,y,score\n";
  char buf[96];
  for (std::size_t i = 0; i < grid.score.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", grid.x[i], grid.y[i],
                  grid.score[i]);
    out << buf;
  }
}

/// Union of the trees' root cells, mapped back to the full feature space.
/// Features no tree has seen are left as [0, 0].
inline Cell model_bounds(const Forest& forest) {
  std::vector<double> lo(forest.train_dims,
                         std::numeric_limits<double>::infinity());
  std::vector<double> hi(forest.train_dims,
                         -std::numeric_limits<double>::infinity());
  for (const auto& tree : forest.trees) {
    const Cell& c = tree.root().cell;
    for (std::size_t j = 0; j < tree.feature_subset.size(); ++j) {
      const auto g = tree.feature_subset[j];
      lo[g] = std::min(lo[g], c.lower[j]);
      hi[g] = std::max(hi[g], c.upper[j]);
    }
  }
  for (std::size_t g = 0; g < forest.train_dims; ++g) {
    if (lo[g] > hi[g]) lo[g] = hi[g] = 0.0;
  }
  return Cell(std::move(lo), std::move(hi));
}

}  // namespace ocrf
