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

// CSV ingestion and declarative dataset specs.
//
// A spec file holds `key = value` lines; `#` starts a comment. Keys:
//   path               CSV file, relative to the spec file
//   label_column       name of the label column (optional)
//   anomaly_values     comma-separated label strings mapped to 1
//   inlier_values      comma-separated label strings mapped to 0; any other
//                      value is an error when this key is present
//   drop_label_values  rows with these label strings are discarded
//   drop_columns       comma-separated feature columns to discard

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ocrf/dataset.hpp"
#include "ocrf/error.hpp"

namespace ocrf {

struct DatasetSpec {
  std::filesystem::path path;
  std::optional<std::string> label_column;
  std::set<std::string> anomaly_values;
  std::set<std::string> inlier_values;
  std::set<std::string> drop_label_values;
  std::vector<std::string> drop_columns;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits one CSV record. Fields may be wrapped in double quotes, with "" as
// an escaped quote; embedded newlines are not supported.
inline std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.emplace_back(trim(cur));
  return fields;
}

inline std::set<std::string> split_list(std::string_view s) {
  std::set<std::string> out;
  for (auto& f : split_record(s)) {
    if (!f.empty()) out.insert(std::move(f));
  }
  return out;
}

inline std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses spec-file text. Relative `path` values resolve against `base_dir`.
inline DatasetSpec parse_dataset_spec(std::istream& in,
                                      const std::filesystem::path& base_dir = {}) {
  DatasetSpec spec;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos)
      v = v.substr(0, hash);
    v = detail::trim(v);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw DataError("spec line " + std::to_string(line_no) +
                      ": expected key = value");
    const std::string key(detail::trim(v.substr(0, eq)));
    const std::string_view value = detail::trim(v.substr(eq + 1));
    if (key == "path") {
      std::filesystem::path p{std::string(value)};
      spec.path = p.is_relative() ? base_dir / p : p;
    } else if (key == "label_column") {
      spec.label_column = std::string(value);
    } else if (key == "anomaly_values") {
      spec.anomaly_values = detail::split_list(value);
    } else if (key == "inlier_values") {
      spec.inlier_values = detail::split_list(value);
    } else if (key == "drop_label_values") {
      spec.drop_label_values = detail::split_list(value);
    } else if (key == "drop_columns") {
      const auto cols = detail::split_list(value);
      spec.drop_columns.assign(cols.begin(), cols.end());
    } else {
      throw DataError("spec line " + std::to_string(line_no) +
                      ": unknown key '" + key + "'");
    }
  }
  if (spec.path.empty()) throw DataError("spec: missing 'path'");
  return spec;
}

inline DatasetSpec load_dataset_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open spec file " + file.string());
  return parse_dataset_spec(in, file.parent_path());
}

/// Reads CSV text with a header row. Every retained column must parse as a
/// finite decimal number. Label mapping, when label_column is set:
/// drop_label_values drops the row, anomaly_values gives 1, inlier_values
/// (or, when absent, anything else) gives 0. Without anomaly_values the
/// label column must already hold 0/1.
inline Dataset parse_csv(std::istream& in, const DatasetSpec& spec) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);
  const auto header = detail::split_record(line);

  std::optional<std::size_t> label_idx;
  if (spec.label_column) {
    const auto it = std::find(header.begin(), header.end(), *spec.label_column);
    if (it == header.end())
      throw DataError("csv: label column '" + *spec.label_column +
                      "' not in header");
    label_idx = static_cast<std::size_t>(it - header.begin());
  }
  for (const auto& c : spec.drop_columns) {
    if (std::find(header.begin(), header.end(), c) == header.end())
      throw DataError("csv: drop column '" + c + "' not in header");
  }

  std::vector<std::size_t> keep;
  Dataset out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (label_idx && j == *label_idx) continue;
    if (std::find(spec.drop_columns.begin(), spec.drop_columns.end(),
                  header[j]) != spec.drop_columns.end())
      continue;
    keep.push_back(j);
    out.feature_names.push_back(header[j]);
  }
  if (keep.empty()) throw DataError("csv: no feature columns");

  std::vector<double> values;
  std::vector<std::uint8_t> labels;
  std::size_t row = 0;  // 1-based data row number, header excluded
  std::size_t kept_rows = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const auto fields = detail::split_record(line);
    if (fields.size() != header.size()) {
      throw DataError("csv: row " + std::to_string(row) + " has " +
                      std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(header.size()));
    }
    if (label_idx) {
      const std::string& lab = fields[*label_idx];
      if (spec.drop_label_values.count(lab)) continue;
      std::uint8_t y = 0;
      if (!spec.anomaly_values.empty()) {
        if (spec.anomaly_values.count(lab)) {
          y = 1;
        } else if (!spec.inlier_values.empty() && !spec.inlier_values.count(lab)) {
          throw DataError("csv: row " + std::to_string(row) +
                          ": unknown label value '" + lab + "'");
        }
      } else if (lab == "1") {
        y = 1;
      } else if (lab != "0") {
        throw DataError("csv: row " + std::to_string(row) +
                        ": label must be 0 or 1 without anomaly_values, got '" +
                        lab + "'");
      }
      labels.push_back(y);
    }
    for (const auto j : keep) {
      const auto v = detail::parse_number(fields[j]);
      if (!v) {
        throw DataError("csv: row " + std::to_string(row) + ", column '" +
                        header[j] + "': not a finite number: '" + fields[j] +
                        "'");
      }
      values.push_back(*v);
    }
    ++kept_rows;
  }
  if (kept_rows == 0) throw DataError("csv: no data rows");
  out.features = Matrix(kept_rows, keep.size(), std::move(values));
  if (label_idx) out.labels = std::move(labels);
  return out;
}

inline Dataset load_csv(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw DataError("cannot open " + spec.path.string());
  return parse_csv(in, spec);
}

}  // namespace ocrf
