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

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "ocrf/error.hpp"

namespace ocrf {

/// SplitMix64 finalizer. Used to decorrelate seeds before they reach the
/// Mersenne twister, and to derive per-tree streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the independent stream number `index` under `master_seed`.
///
/// stream_seed(s, k) = splitmix64(splitmix64(s) ^ splitmix64(k + 1)).
/// Tree k of a forest draws its rows, its features and every node-level
/// feature selection from `Rng(stream_seed(seed, k))`, so the result never
/// depends on which thread grows which tree.
constexpr std::uint64_t stream_seed(std::uint64_t master_seed,
                                    std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 1));
}

/// Pseudo-random stream with platform-independent output.
///
/// mt19937_64's output sequence is fixed by the standard, but the standard
/// distributions are not, so bounded integers and unit reals are derived
/// here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t uniform_index(std::uint64_t bound) {
    detail::require(bound > 0, "uniform_index: bound must be positive");
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// `k` distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    detail::require(k <= n, "sample_without_replacement: k > n");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_index(n - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

  /// Same as above, drawing from an explicit population.
  template <typename T>
  std::vector<T> sample_from(std::vector<T> population, std::size_t k) {
    detail::require(k <= population.size(), "sample_from: k > population");
    for (std::size_t i = 0; i < k; ++i) {
      const auto j =
          i + static_cast<std::size_t>(uniform_index(population.size() - i));
      std::swap(population[i], population[j]);
    }
    population.resize(k);
    return population;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ocrf
