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

#include "shiftbench/random.hpp"

#include <utility>

namespace shiftbench {

std::vector<Index> draw_without_replacement(std::vector<Index>& scratch, Index k, Rng& rng) {
  const auto n = static_cast<Index>(scratch.size());
  if (k < 0 || k > n) throw ExhaustionError("cannot draw " + std::to_string(k) +
                                            " items from a population of " + std::to_string(n));
  std::vector<Index> swaps(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    const Index j = pick(rng);
    swaps[i] = j;
    std::swap(scratch[i], scratch[j]);
  }
  std::vector<Index> out(scratch.begin(), scratch.begin() + k);
  for (Index i = k - 1; i >= 0; --i) std::swap(scratch[i], scratch[swaps[i]]);
  return out;
}

std::vector<Index> draw_without_replacement(std::span<const Index> population, Index k,
                                            Rng& rng) {
  std::vector<Index> scratch(population.begin(), population.end());
  return draw_without_replacement(scratch, k, rng);
}

}  // namespace shiftbench
