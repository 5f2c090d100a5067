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

// ocrf command-line tool: train, score, eval, grid, importances.
//
// Options are shared by all subcommands and may also come from an INI/TOML
// config file given with --config (keys are the long option names without
// dashes, e.g. `n-trees = 50`). Command-line values override the file, which
// overrides the built-in defaults.
//
// Failures print a single line `error: <code>: <message>` to stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ocrf/ocrf.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kPrecondition = 3,
  kData = 4,
  kTimeout = 5,
};

struct Options {
  std::string data;
  std::string spec;
  std::optional<std::string> label_column;
  std::vector<std::string> anomaly_values;
  std::vector<std::string> drop_columns;
  std::string name;

  std::string algo = "ocrf";
  std::string criterion = "oc-gini";
  double gamma = 1.0;
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;
  std::optional<double> max_samples;
  std::optional<std::size_t> max_samples_floor;
  std::optional<double> max_features_tree;
  std::optional<std::size_t> max_features_tree_floor;
  std::size_t max_features_node = 5;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  std::string score = "depth";
  std::string mode = "novelty";
  std::size_t repeats = 10;
  double test_fraction = 0.5;
  double anomaly_cap = 0.10;
  double timeout_seconds = 1800.0;

  std::string model;
  std::string out;
  std::size_t nx = 100;
  std::size_t ny = 100;
  std::vector<double> bounds;
};

// Resolves the dataset spec. With --data alone, a `<stem>.spec` file next
// to the CSV is used when it exists; --label-column, --anomaly-values and
// --drop-columns override its fields.
ocrf::DatasetSpec resolve_spec(const Options& o) {
  ocrf::DatasetSpec spec;
  if (!o.spec.empty()) {
    spec = ocrf::load_dataset_spec(o.spec);
  } else if (!o.data.empty()) {
    fs::path sibling = fs::path(o.data).replace_extension(".spec");
    if (fs::exists(sibling)) spec = ocrf::load_dataset_spec(sibling);
  } else {
    throw ocrf::PreconditionError("one of --data or --spec is required");
  }
  if (!o.data.empty()) spec.path = o.data;
  if (o.label_column) spec.label_column = *o.label_column;
  if (!o.anomaly_values.empty()) {
    spec.anomaly_values = {o.anomaly_values.begin(), o.anomaly_values.end()};
    spec.inlier_values.clear();
  }
  if (!o.drop_columns.empty()) spec.drop_columns = o.drop_columns;
  return spec;
}

std::string dataset_name(const Options& o, const ocrf::DatasetSpec& spec) {
  if (!o.name.empty()) return o.name;
  return spec.path.stem().string();
}

ocrf::ModelConfig model_config(const Options& o) {
  ocrf::ModelConfig mc;
  mc.algorithm = ocrf::parse_algorithm(o.algo);
  mc.score = ocrf::parse_score_kind(o.score);
  mc.threads = o.threads;
  if (mc.algorithm == ocrf::Algorithm::OneClassRF) {
    ocrf::HyperParams& p = mc.ocrf;
    p.criterion = ocrf::parse_criterion(o.criterion);
    p.gamma = o.gamma;
    p.n_trees = o.n_trees;
    p.max_depth = o.max_depth;
    if (o.max_samples) p.max_samples_fraction = *o.max_samples;
    if (o.max_samples_floor) p.max_samples_floor = *o.max_samples_floor;
    if (o.max_features_tree) p.max_features_tree_fraction = *o.max_features_tree;
    if (o.max_features_tree_floor)
      p.max_features_tree_floor = *o.max_features_tree_floor;
    p.max_features_node = o.max_features_node;
    p.seed = o.seed;
    p.validate();
  } else {
    mc.iforest.n_trees = o.n_trees;
    if (o.max_samples) {
      const double m = *o.max_samples;
      if (m < 2 || m != static_cast<double>(static_cast<std::size_t>(m)))
        throw ocrf::PreconditionError(
            "--max-samples for iforest is a row count >= 2");
      mc.iforest.max_samples = static_cast<std::size_t>(m);
    }
    mc.iforest.seed = o.seed;
  }
  return mc;
}

// Opens --out, or stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ocrf::DataError("cannot create " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ocrf::DataError("cannot create " + path);
  return f;
}

int cmd_train(const Options& o) {
  if (o.out.empty()) throw ocrf::PreconditionError("train needs --out");
  const auto ds = ocrf::load_csv(resolve_spec(o)).without_labels();
  const auto mc = model_config(o);
  ocrf::TrainOptions options;
  options.threads = o.threads;
  const auto forest = ocrf::fit(ds, mc, o.seed, options);
  ocrf::save_forest(fs::path(o.out), forest);
  return kOk;
}

int cmd_score(const Options& o) {
  if (o.model.empty()) throw ocrf::PreconditionError("score needs --model");
  const auto forest = ocrf::load_forest(fs::path(o.model));
  const auto ds = ocrf::load_csv(resolve_spec(o));
  const auto scores = ocrf::score_rows(forest, ocrf::parse_score_kind(o.score),
                                       ds.features, o.threads);
  Output out(o.out);
  auto& s = out.stream();
  s << "row_index,score\n";
  char buf[64];
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, scores[i]);
    s << buf;
  }
  return kOk;
}

int cmd_eval(const Options& o) {
  const auto spec = resolve_spec(o);
  const auto ds = ocrf::load_csv(spec);
  if (!ds.labels)
    throw ocrf::PreconditionError(
        "eval needs labels: give --label-column or a dataset spec");
  ocrf::Protocol protocol;
  protocol.mode = ocrf::parse_mode(o.mode);
  protocol.test_fraction = o.test_fraction;
  protocol.anomaly_cap = o.anomaly_cap;
  protocol.n_repeats = o.repeats;
  protocol.base_seed = o.seed;
  if (o.timeout_seconds > 0) protocol.timeout_seconds = o.timeout_seconds;
  else protocol.timeout_seconds.reset();

  auto report = ocrf::run_protocol(ds, model_config(o), protocol);
  report.dataset = dataset_name(o, spec);

  const std::string prefix = o.out.empty() ? "report" : o.out;
  {
    auto f = open_file(prefix + ".json");
    ocrf::write_report_json(f, report);
  }
  {
    auto f = open_file(prefix + ".csv");
    ocrf::write_aggregate_csv(f, {report});
  }
  if (report.complete) {
    auto roc = open_file(prefix + "_roc.csv");
    ocrf::write_curve_csv(roc, "fpr,tpr", report.roc_curve);
    auto pr = open_file(prefix + "_pr.csv");
    ocrf::write_curve_csv(pr, "recall,precision", report.pr_curve);
  }
  std::cout << ocrf::kAggregateCsvHeader << '\n'
            << ocrf::aggregate_csv_row(report) << '\n';
  return kOk;
}

int cmd_grid(const Options& o) {
  if (o.model.empty()) throw ocrf::PreconditionError("grid needs --model");
  const auto forest = ocrf::load_forest(fs::path(o.model));
  if (forest.train_dims != 2)
    throw ocrf::PreconditionError("score grid requires d=2, model has d=" +
                                  std::to_string(forest.train_dims));
  ocrf::Cell bounds = ocrf::model_bounds(forest);
  if (!o.bounds.empty()) {
    if (o.bounds.size() != 4 || !(o.bounds[0] < o.bounds[1]) ||
        !(o.bounds[2] < o.bounds[3]))
      throw ocrf::PreconditionError("--bounds takes xmin xmax ymin ymax");
    bounds = ocrf::Cell({o.bounds[0], o.bounds[2]}, {o.bounds[1], o.bounds[3]});
  }
  const auto grid = ocrf::score_grid(forest, ocrf::parse_score_kind(o.score),
                                     bounds, o.nx, o.ny);
  Output out(o.out);
  ocrf::write_grid_csv(out.stream(), grid);
  return kOk;
}

int cmd_importances(const Options& o) {
  if (o.model.empty()) throw ocrf::PreconditionError("importances needs --model");
  const auto forest = ocrf::load_forest(fs::path(o.model));
  const auto imp = ocrf::variable_importance(forest);
  Output out(o.out);
  auto& s = out.stream();
  s << "feature,importance\n";
  char buf[64];
  for (std::size_t j = 0; j < imp.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", j, imp[j]);
    s << buf;
  }
  return kOk;
}

int fail(const char* code, const std::string& message, int exit_code) {
  std::string line = message;
  for (auto& c : line) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  std::cerr << "error: " << code << ": " << line << '\n';
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-class random forests for outlier and novelty detection"};
  app.set_config("--config", "", "INI/TOML file with option defaults");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--data", o.data, "Input CSV (header row required)");
  app.add_option("--spec", o.spec, "Dataset spec file");
  app.add_option("--label-column", o.label_column, "Label column name");
  app.add_option("--anomaly-values", o.anomaly_values,
                 "Label values marking outliers")->delimiter(',');
  app.add_option("--drop-columns", o.drop_columns, "Columns to ignore")
      ->delimiter(',');
  app.add_option("--name", o.name, "Dataset name in reports");
  app.add_option("--algo", o.algo, "Algorithm")
      ->check(CLI::IsMember({"ocrf", "iforest"}))->capture_default_str();
  app.add_option("--criterion", o.criterion, "Split criterion")
      ->check(CLI::IsMember({"oc-gini", "oc-shannon", "naive"}))
      ->capture_default_str();
  app.add_option("--gamma", o.gamma, "Outlier-to-inlier ratio in each node")
      ->capture_default_str();
  app.add_option("--n-trees", o.n_trees, "Number of trees")->capture_default_str();
  app.add_option("--max-depth", o.max_depth, "Depth cap (default ceil(log2 rows))");
  app.add_option("--max-samples", o.max_samples,
                 "Rows per tree: fraction for ocrf (0.2), count for iforest (256)");
  app.add_option("--max-samples-floor", o.max_samples_floor,
                 "ocrf: minimum rows per tree (100)");
  app.add_option("--max-features-tree", o.max_features_tree,
                 "ocrf: fraction of features per tree (0.5)");
  app.add_option("--max-features-tree-floor", o.max_features_tree_floor,
                 "ocrf: minimum features per tree (5)");
  app.add_option("--max-features-node", o.max_features_node,
                 "ocrf: candidate features per node")->capture_default_str();
  app.add_option("--seed", o.seed, "Random seed (eval: base seed)")
      ->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();
  app.add_option("--score", o.score, "Scoring function")
      ->check(CLI::IsMember({"depth", "stepwise-density", "typical-cell"}))
      ->capture_default_str();
  app.add_option("--mode", o.mode, "Evaluation setting")
      ->check(CLI::IsMember({"novelty", "outlier"}))->capture_default_str();
  app.add_option("--repeats", o.repeats, "Evaluation repeats")->capture_default_str();
  app.add_option("--test-fraction", o.test_fraction, "Test share of each class")
      ->capture_default_str();
  app.add_option("--anomaly-cap", o.anomaly_cap,
                 "Outlier mode: maximum anomaly rate")->capture_default_str();
  app.add_option("--timeout-seconds", o.timeout_seconds,
                 "Training time limit per repeat, 0 = none")->capture_default_str();
  app.add_option("--model", o.model, "Model file");
  app.add_option("--out", o.out,
                 "Output file (eval: path prefix of the report files)");
  app.add_option("--nx", o.nx, "Grid columns")->capture_default_str();
  app.add_option("--ny", o.ny, "Grid rows")->capture_default_str();
  app.add_option("--bounds", o.bounds, "Grid bounds: xmin xmax ymin ymax")
      ->expected(4)->delimiter(',');

  auto* train = app.add_subcommand("train", "Train a model and write it to --out");
  auto* score = app.add_subcommand("score", "Score the rows of a CSV with --model");
  auto* eval = app.add_subcommand("eval", "Run the benchmark protocol");
  auto* grid = app.add_subcommand("grid", "Score a regular grid (2-D models)");
  auto* importances =
      app.add_subcommand("importances", "Per-feature importances of --model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kUsage);
  }

  try {
    if (*train) return cmd_train(o);
    if (*score) return cmd_score(o);
    if (*eval) return cmd_eval(o);
    if (*grid) return cmd_grid(o);
    if (*importances) return cmd_importances(o);
  } catch (const ocrf::PreconditionError& e) {
    return fail("precondition", e.what(), kPrecondition);
  } catch (const ocrf::DataError& e) {
    return fail("data", e.what(), kData);
  } catch (const ocrf::TimeoutError& e) {
    return fail("timeout", e.what(), kTimeout);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kInternal);
  }
  return kInternal;
}
