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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ocrf/error.hpp"

namespace ocrf {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    detail::require(data_.size() == rows_ * cols_,
                    "Matrix: data size does not match shape");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<const double> values() const noexcept { return data_; }

  /// Rows picked by index, in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t r = 0; r < indices.size(); ++r) {
      const auto src = row(indices[r]);
      std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Numeric feature matrix with optional binary labels (0 inlier, 1 outlier).
struct Dataset {
  Matrix features;
  std::optional<std::vector<std::uint8_t>> labels;
  std::vector<std::string> feature_names;

  std::size_t n_rows() const noexcept { return features.rows(); }
  std::size_t n_cols() const noexcept { return features.cols(); }
  bool has_labels() const noexcept { return labels.has_value(); }

  /// Throws PreconditionError when an invariant is broken.
  void validate() const {
    detail::require(n_rows() >= 1, "Dataset: needs at least one row");
    detail::require(n_cols() >= 1, "Dataset: needs at least one column");
    for (const double v : features.values()) {
      detail::require(std::isfinite(v), "Dataset: non-finite feature value");
    }
    if (labels) {
      detail::require(labels->size() == n_rows(),
                      "Dataset: label count does not match row count");
      for (const auto l : *labels) {
        detail::require(l == 0 || l == 1, "Dataset: labels must be 0 or 1");
      }
    }
    detail::require(feature_names.empty() || feature_names.size() == n_cols(),
                    "Dataset: feature name count does not match columns");
  }

  Dataset select_rows(std::span<const std::size_t> indices) const {
    Dataset out;
    out.features = features.select_rows(indices);
    out.feature_names = feature_names;
    if (labels) {
      std::vector<std::uint8_t> picked;
      picked.reserve(indices.size());
      for (const auto i : indices) picked.push_back((*labels)[i]);
      out.labels = std::move(picked);
    }
    return out;
  }

  Dataset without_labels() const {
    Dataset out{features, std::nullopt, feature_names};
    return out;
  }
};

}  // namespace ocrf
