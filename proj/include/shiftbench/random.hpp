/*
 * Copyright 2026 The shiftbench Authors.
 *
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

#ifndef SHIFTBENCH_RANDOM_HPP_
#define SHIFTBENCH_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "shiftbench/common.hpp"

namespace shiftbench {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Folds a sequence of integer tags into a child seed. Order matters:
// derive_seed(s, {1, 2}) != derive_seed(s, {2, 1}).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t tag : tags) h = splitmix64(h ^ splitmix64(tag + 0x632BE59BD9B4E019ULL));
  return h;
}

// Partial Fisher-Yates over a scratch permutation. The scratch buffer is
// restored to its input order before returning, so the draw depends only on
// the scratch contents and the generator state.
std::vector<Index> draw_without_replacement(std::vector<Index>& scratch, Index k, Rng& rng);

// Convenience overload that works on a private copy of the population.
std::vector<Index> draw_without_replacement(std::span<const Index> population, Index k,
                                            Rng& rng);

}  // namespace shiftbench

#endif  // SHIFTBENCH_RANDOM_HPP_
