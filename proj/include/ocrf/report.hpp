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

// Report writers for EvalReport. The JSON layout is described in
// docs/report_format.md.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocrf/metrics.hpp"
#include "ocrf/protocol.hpp"

namespace ocrf {

inline constexpr int kReportSchemaVersion = 1;

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json model_json(const ModelConfig& m) {
  ordered_json j;
  j["algorithm"] = std::string(to_string(m.algorithm));
  j["score"] = std::string(to_string(m.score));
  if (m.algorithm == Algorithm::OneClassRF) {
    const HyperParams& p = m.ocrf;
    j["criterion"] = std::string(to_string(p.criterion));
    j["gamma"] = p.gamma;
    j["n_trees"] = p.n_trees;
    j["max_samples_fraction"] = p.max_samples_fraction;
    j["max_samples_floor"] = p.max_samples_floor;
    j["max_features_tree_fraction"] = p.max_features_tree_fraction;
    j["max_features_tree_floor"] = p.max_features_tree_floor;
    j["max_features_node"] = p.max_features_node;
    j["max_depth"] = p.max_depth ? ordered_json(*p.max_depth) : ordered_json();
    if (p.criterion == Criterion::NaiveOcGini) j["naive_alpha_n"] = p.naive_alpha_n;
    j["min_node_points"] = p.min_node_points;
    j["stop_density_above"] = p.stop_density_above
                                  ? ordered_json(*p.stop_density_above)
                                  : ordered_json();
    j["stop_density_below"] = p.stop_density_below
                                  ? ordered_json(*p.stop_density_below)
                                  : ordered_json();
  } else {
    j["n_trees"] = m.iforest.n_trees;
    j["max_samples"] = m.iforest.max_samples;
  }
  return j;
}

inline ordered_json curve_json(const std::vector<CurvePoint>& pts) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

inline void put_mean_std(ordered_json& j, const std::string& key,
                         const EvalReport& r, const MeanStd& v) {
  j[key + "_mean"] = r.complete ? ordered_json(v.mean) : ordered_json();
  j[key + "_std"] = r.complete ? ordered_json(v.std) : ordered_json();
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  using detail::ordered_json;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["dataset"] = r.dataset;
  j["algorithm"] = std::string(to_string(r.model.algorithm));
  j["status"] = r.complete ? "ok" : "NA";
  j["model"] = detail::model_json(r.model);

  const Protocol& p = r.protocol;
  j["protocol"] = {
      {"mode", std::string(to_string(p.mode))},
      {"test_fraction", p.test_fraction},
      {"anomaly_cap", p.mode == DetectionMode::OutlierDetection
                          ? ordered_json(p.anomaly_cap)
                          : ordered_json()},
      {"n_repeats", p.n_repeats},
      {"base_seed", p.base_seed},
      {"timeout_seconds",
       p.timeout_seconds ? ordered_json(*p.timeout_seconds) : ordered_json()},
  };

  ordered_json reps = ordered_json::array();
  for (const auto& rec : r.repeats) {
    ordered_json e;
    e["repeat"] = rec.repeat;
    e["seed"] = rec.seed;
    e["status"] = rec.timed_out ? "timeout" : "ok";
    e["n_train"] = rec.n_train;
    e["n_train_outliers"] = rec.n_train_outliers;
    e["train_anomaly_rate"] = rec.train_anomaly_rate();
    e["n_test"] = rec.n_test;
    e["n_test_outliers"] = rec.n_test_outliers;
    e["roc_auc"] = rec.timed_out ? ordered_json() : ordered_json(rec.roc_auc);
    e["pr_auc"] = rec.timed_out ? ordered_json() : ordered_json(rec.pr_auc);
    e["train_seconds"] = rec.train_seconds;
    e["test_seconds"] = rec.timed_out ? ordered_json() : ordered_json(rec.test_seconds);
    reps.push_back(std::move(e));
  }
  j["repeats"] = std::move(reps);

  ordered_json agg = ordered_json::object();
  detail::put_mean_std(agg, "roc_auc", r, r.roc_auc);
  detail::put_mean_std(agg, "pr_auc", r, r.pr_auc);
  detail::put_mean_std(agg, "train_seconds", r, r.train_seconds);
  detail::put_mean_std(agg, "test_seconds", r, r.test_seconds);
  j["aggregate"] = std::move(agg);
  j["curves"] = {
      {"repeat", 0},
      {"roc", detail::curve_json(r.roc_curve)},
      {"pr", detail::curve_json(r.pr_curve)},
  };
  return j;
}

inline void write_report_json(std::ostream& out, const EvalReport& r) {
  out << report_to_json(r).dump(2) << '\n';
}

inline constexpr const char* kAggregateCsvHeader =
    "dataset,algorithm,mode,roc_auc,pr_auc,roc_auc_std,pr_auc_std,"
    "train_seconds,test_seconds";

/// One aggregate row; NA cells when the report is incomplete.
inline std::string aggregate_csv_row(const EvalReport& r) {
  std::string row = r.dataset + "," + std::string(to_string(r.model.algorithm)) +
                    "," + std::string(to_string(r.protocol.mode));
  const double vals[] = {r.roc_auc.mean,       r.pr_auc.mean,
                         r.roc_auc.std,        r.pr_auc.std,
                         r.train_seconds.mean, r.test_seconds.mean};
  for (const double v : vals)
    row += "," + (r.complete ? detail::format_g17(v) : std::string("NA"));
  return row;
}

inline void write_aggregate_csv(std::ostream& out,
                                const std::vector<EvalReport>& reports) {
  out << kAggregateCsvHeader << '\n';
  for (const auto& r : reports) out << aggregate_csv_row(r) << '\n';
}

/// `fpr,tpr` or `recall,precision` curve CSV.
inline void write_curve_csv(std::ostream& out, const char* header,
                            const std::vector<CurvePoint>& pts) {
  out << header << '\n';
  for (const auto& p : pts)
    out << detail::format_g17(p.x) << ',' << detail::format_g17(p.y) << '\n';
}

}  // namespace ocrf
