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
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ocrf/dataset.hpp"
#include "ocrf/error.hpp"

namespace ocrf {

/// Axis-aligned hyper-rectangle [lower_0, upper_0] x ... x [lower_d, upper_d].
struct Cell {
  std::vector<double> lower;
  std::vector<double> upper;

  Cell() = default;
  Cell(std::vector<double> lo, std::vector<double> hi)
      : lower(std::move(lo)), upper(std::move(hi)) {
    detail::require(lower.size() == upper.size(),
                    "Cell: bound vectors differ in length");
    for (std::size_t j = 0; j < lower.size(); ++j) {
      detail::require(lower[j] <= upper[j], "Cell: lower > upper");
    }
  }

  std::size_t dims() const noexcept { return lower.size(); }
  double width(std::size_t j) const noexcept { return upper[j] - lower[j]; }

  bool contains(std::span<const double> x) const noexcept {
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (x[j] < lower[j] || x[j] > upper[j]) return false;
    }
    return true;
  }

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Lebesgue measure of the cell: product of widths.
inline double cell_volume(const Cell& cell) noexcept {
  double v = 1.0;
  for (std::size_t j = 0; j < cell.dims(); ++j) v *= cell.width(j);
  return v;
}

/// Sum of log widths over the features in `active` (all features when
/// empty). Stays finite where cell_volume underflows.
inline double cell_log_volume(const Cell& cell,
                              std::span<const std::size_t> active = {}) {
  double acc = 0.0;
  if (active.empty()) {
    for (std::size_t j = 0; j < cell.dims(); ++j) acc += std::log(cell.width(j));
  } else {
    for (const auto j : active) acc += std::log(cell.width(j));
  }
  return acc;
}

/// Splits `cell` along `feature`: left keeps x[feature] < threshold.
inline std::pair<Cell, Cell> split_cell(const Cell& cell, std::size_t feature,
                                        double threshold) {
  detail::require(feature < cell.dims(), "split_cell: feature out of range");
  if (!(cell.lower[feature] < threshold && threshold < cell.upper[feature])) {
    throw PreconditionError(
        "split_cell: threshold must lie strictly inside (lower, upper) of "
        "feature " +
        std::to_string(feature));
  }
  Cell left = cell;
  Cell right = cell;
  left.upper[feature] = threshold;
  right.lower[feature] = threshold;
  return {std::move(left), std::move(right)};
}

/// Volume fraction of the left child, from the single changed coordinate.
inline double left_volume_fraction(const Cell& cell, std::size_t feature,
                                   double threshold) noexcept {
  return (threshold - cell.lower[feature]) / cell.width(feature);
}

/// Smallest cell containing every row of `data`.
inline Cell bounding_box(const Matrix& data) {
  detail::require(data.rows() > 0, "bounding_box: empty data");
  std::vector<double> lo(data.cols(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(data.cols(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto r = data.row(i);
    for (std::size_t j = 0; j < data.cols(); ++j) {
      lo[j] = std::min(lo[j], r[j]);
      hi[j] = std::max(hi[j], r[j]);
    }
  }
  return Cell(std::move(lo), std::move(hi));
}

}  // namespace ocrf
