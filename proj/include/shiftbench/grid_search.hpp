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

#ifndef SHIFTBENCH_GRID_SEARCH_HPP_
#define SHIFTBENCH_GRID_SEARCH_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "shiftbench/classifier.hpp"
#include "shiftbench/core_data.hpp"
#include "shiftbench/quantifiers.hpp"

namespace shiftbench {

/// C in {0.1, 1, 10, 100, 1000} x {Balanced, None}.
std::vector<LogisticParams> default_grid();

struct GridSearchOptions {
  double validation_fraction = 0.4;
  std::vector<double> prevalences{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int samples_per_prevalence = 10;
  Index sample_size = 500;
  // A prevalence whose largest feasible validation sample is smaller than
  // this is skipped.
  Index min_sample_size = 10;
};

struct GridSearchResult {
  LogisticParams best;
  std::vector<double> scores;  // validation MAE per grid point, +inf if it failed
  int skipped_prevalences = 0;
};

using QuantifierFactory = std::function<std::unique_ptr<Quantifier>(const LogisticParams&)>;

/// Largest n <= cap such that round(p*n) positives and the remaining
/// negatives fit in the given class counts.
Index feasible_sample_size(double prevalence, Index cap, Index positives, Index negatives);

/// Picks the grid point whose quantifier, fitted on a stratified training
/// split of `train`, has the lowest MAE over APP samples from the held-out
/// split. Only `train` is ever read.
GridSearchResult grid_search(const BinaryDataset& train, const QuantifierFactory& factory,
                             const std::vector<LogisticParams>& grid, std::uint64_t seed,
                             const GridSearchOptions& options = {});

/// Turns a training pool into a fitted quantifier.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::unique_ptr<Quantifier> learn(Method method, const BinaryDataset& train,
                                            std::uint64_t seed) const = 0;
};

/// Fits with fixed hyperparameters.
class FixedLearner final : public Learner {
 public:
  explicit FixedLearner(QuantifierConfig config = {}) : config_(std::move(config)) {}
  std::unique_ptr<Quantifier> learn(Method method, const BinaryDataset& train,
                                    std::uint64_t seed) const override;

 private:
  QuantifierConfig config_;
};

/// Model selection on the training pool, then a refit on all of it.
class GridSearchLearner final : public Learner {
 public:
  explicit GridSearchLearner(QuantifierConfig base = {}, std::vector<LogisticParams> grid = default_grid(),
                             GridSearchOptions options = {});
  std::unique_ptr<Quantifier> learn(Method method, const BinaryDataset& train,
                                    std::uint64_t seed) const override;

 private:
  QuantifierConfig base_;
  std::vector<LogisticParams> grid_;
  GridSearchOptions options_;
};

}  // namespace shiftbench

#endif  // SHIFTBENCH_GRID_SEARCH_HPP_
