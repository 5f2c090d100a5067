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

// Trains a one-class forest on 2-D Gaussian data and ranks a few probes.
//
//   ./quickstart

#include <cstdio>
#include <random>
#include <vector>

#include "ocrf/ocrf.hpp"

int main() {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> normal(0.0, 1.0);

  const std::size_t n = 1000;
  ocrf::Dataset train;
  train.features = ocrf::Matrix(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    train.features(i, 0) = normal(gen);
    train.features(i, 1) = 0.5 * normal(gen);
  }

  ocrf::HyperParams params;  // library defaults
  params.seed = 1;
  const ocrf::Forest forest = ocrf::train(train, params);

  const double probes[][2] = {{0.0, 0.0}, {1.0, 0.5}, {2.5, 0.0}, {0.0, 2.0},
                              {5.0, 5.0}};
  std::printf("%8s %8s %12s %14s\n", "x", "y", "depth score", "density");
  for (const auto& p : probes) {
    std::printf("%8.2f %8.2f %12.4f %14.6g\n", p[0], p[1],
                ocrf::depth_score(forest, p),
                ocrf::typical_cell_density(forest, p));
  }

  const auto imp = ocrf::variable_importance(forest);
  std::printf("importance: x=%.4f y=%.4f\n", imp[0], imp[1]);
  return 0;
}
