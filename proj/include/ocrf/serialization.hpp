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

// Binary model file. All integers are little-endian, doubles are stored as
// their IEEE-754 bit patterns. The byte layout is in docs/model_format.md.

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ocrf/error.hpp"
#include "ocrf/model.hpp"

namespace ocrf {

inline constexpr char kModelMagic[4] = {'O', 'C', 'R', 'F'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

namespace detail {

class ByteWriter {
 public:
  explicit ByteWriter(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const char* p, std::size_t n) {
    out_.write(p, static_cast<std::streamsize>(n));
  }

 private:
  void le(std::uint64_t v, int n) {
    char buf[8];
    for (int i = 0; i < n; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out_.write(buf, n);
  }
  std::ostream& out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::istream& in) : in_(in) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  void bytes(char* p, std::size_t n) {
    if (!in_.read(p, static_cast<std::streamsize>(n)))
      throw DataError("model file: unexpected end of data");
  }

  /// u64 that must not exceed `limit`; guards allocations on corrupt input.
  std::size_t count(std::uint64_t limit, const char* what) {
    const std::uint64_t v = u64();
    if (v > limit) throw DataError(std::string("model file: implausible ") + what);
    return static_cast<std::size_t>(v);
  }

 private:
  std::uint64_t le(int n) {
    unsigned char buf[8];
    if (!in_.read(reinterpret_cast<char*>(buf), n))
      throw DataError("model file: unexpected end of data");
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
  }
  std::istream& in_;
};

inline constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 32;

// Rebuilds child links from a pre-order sequence of leaf/split records and
// checks that the sequence encodes exactly one binary tree.
inline void link_preorder(std::vector<TreeNode>& nodes) {
  std::vector<std::uint32_t> open;  // split nodes still waiting for a child
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) {
      if (open.empty()) throw DataError("model file: trailing nodes in tree");
      TreeNode& parent = nodes[open.back()];
      if (parent.left == kNoChild) {
        parent.left = i;
      } else {
        parent.right = i;
        open.pop_back();
      }
    }
    if (!nodes[i].is_leaf()) open.push_back(i);
  }
  if (!open.empty()) throw DataError("model file: truncated tree");
}

}  // namespace detail

inline void save_forest(std::ostream& out, const Forest& forest) {
  detail::ByteWriter w(out);
  w.bytes(kModelMagic, 4);
  w.u32(kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(forest.kind));
  const HyperParams& p = forest.hyperparams;
  w.u8(static_cast<std::uint8_t>(p.criterion));
  w.u64(forest.train_dims);
  w.f64(p.max_samples_fraction);
  w.u64(p.max_samples_floor);
  w.f64(p.max_features_tree_fraction);
  w.u64(p.max_features_tree_floor);
  w.u64(p.max_features_node);
  w.f64(p.gamma);
  w.u64(p.max_depth.value_or(0));
  w.u64(p.n_trees);
  w.f64(p.naive_alpha_n);
  w.u64(p.seed);
  w.u64(p.min_node_points);
  w.u8(static_cast<std::uint8_t>((p.stop_density_above ? 1 : 0) |
                                 (p.stop_density_below ? 2 : 0)));
  w.f64(p.stop_density_above.value_or(0.0));
  w.f64(p.stop_density_below.value_or(0.0));

  w.u64(forest.trees.size());
  for (const auto& tree : forest.trees) {
    w.u64(tree.subsample_size);
    w.u64(tree.feature_subset.size());
    for (const auto f : tree.feature_subset) w.u64(f);
    w.u64(tree.nodes.size());
    for (const auto& n : tree.nodes) {
      w.u8(n.is_leaf() ? 0 : 1);
      w.i32(n.split_feature);
      w.f64(n.split_threshold);
      w.u64(n.n_inliers);
      w.u32(n.depth);
      for (const double v : n.cell.lower) w.f64(v);
      for (const double v : n.cell.upper) w.f64(v);
    }
  }
  if (!out) throw DataError("model file: write failed");
}

inline Forest load_forest(std::istream& in) {
  detail::ByteReader r(in);
  char magic[4];
  r.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kModelMagic))
    throw DataError("model file: bad magic");
  const auto version = r.u32();
  if (version != kModelFormatVersion)
    throw DataError("model file: unsupported version " + std::to_string(version));

  Forest forest;
  const auto kind = r.u8();
  if (kind > 1) throw DataError("model file: unknown model kind");
  forest.kind = static_cast<ModelKind>(kind);
  HyperParams& p = forest.hyperparams;
  const auto criterion = r.u8();
  if (criterion > 2) throw DataError("model file: unknown criterion");
  p.criterion = static_cast<Criterion>(criterion);
  forest.train_dims = r.count(detail::kMaxCount, "dimension");
  p.max_samples_fraction = r.f64();
  p.max_samples_floor = r.u64();
  p.max_features_tree_fraction = r.f64();
  p.max_features_tree_floor = r.u64();
  p.max_features_node = r.u64();
  p.gamma = r.f64();
  if (const auto md = r.u64(); md != 0) p.max_depth = md;
  p.n_trees = r.u64();
  p.naive_alpha_n = r.f64();
  p.seed = r.u64();
  p.min_node_points = r.u64();
  const auto flags = r.u8();
  const double above = r.f64();
  const double below = r.f64();
  if (flags & 1) p.stop_density_above = above;
  if (flags & 2) p.stop_density_below = below;

  const auto n_trees = r.count(detail::kMaxCount, "tree count");
  forest.trees.resize(n_trees);
  for (auto& tree : forest.trees) {
    tree.subsample_size = r.u64();
    const auto k = r.count(forest.train_dims, "feature subset size");
    tree.feature_subset.resize(k);
    for (auto& f : tree.feature_subset) {
      f = r.u64();
      if (f >= forest.train_dims)
        throw DataError("model file: feature index out of range");
    }
    const auto n_nodes = r.count(detail::kMaxCount, "node count");
    if (n_nodes == 0) throw DataError("model file: empty tree");
    tree.nodes.resize(n_nodes);
    for (auto& n : tree.nodes) {
      const auto is_split = r.u8();
      n.split_feature = r.i32();
      n.split_threshold = r.f64();
      n.n_inliers = r.u64();
      n.depth = r.u32();
      std::vector<double> lo(k), hi(k);
      for (auto& v : lo) v = r.f64();
      for (auto& v : hi) v = r.f64();
      n.cell = Cell(std::move(lo), std::move(hi));
      if ((is_split != 0) != (n.split_feature >= 0) ||
          (n.split_feature >= 0 && static_cast<std::size_t>(n.split_feature) >= k))
        throw DataError("model file: inconsistent node record");
    }
    detail::link_preorder(tree.nodes);
    tree.finalize();
  }
  return forest;
}

inline void save_forest(const std::filesystem::path& file, const Forest& forest) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot create " + file.string());
  save_forest(out, forest);
}

inline Forest load_forest(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("cannot open " + file.string());
  return load_forest(in);
}

}  // namespace ocrf
