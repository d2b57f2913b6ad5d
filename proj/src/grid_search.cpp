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

#include "shiftbench/grid_search.hpp"

#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

namespace shiftbench {

std::vector<LogisticParams> default_grid() {
  std::vector<LogisticParams> grid;
  for (double c : {0.1, 1.0, 10.0, 100.0, 1000.0})
    for (ClassWeight w : {ClassWeight::Balanced, ClassWeight::None}) grid.push_back({c, w});
  return grid;
}

Index feasible_sample_size(double prevalence, Index cap, Index positives, Index negatives) {
  for (Index n = std::min(cap, positives + negatives); n >= 1; --n) {
    const Index pos = positive_count_for(prevalence, n);
    if (pos <= positives && n - pos <= negatives) return n;
  }
  return 0;
}

GridSearchResult grid_search(const BinaryDataset& train, const QuantifierFactory& factory,
                             const std::vector<LogisticParams>& grid, std::uint64_t seed,
                             const GridSearchOptions& options) {
  if (grid.empty()) throw ValidationError("grid search over an empty grid");
  GridSearchResult result;
  result.best = grid.front();
  if (grid.size() == 1) {
    result.scores.assign(1, 0.0);
    return result;
  }

  const auto [fit_pool, val_pool] =
      split_stratified(train, 1.0 - options.validation_fraction, derive_seed(seed, {1}));

  // Validation samples are drawn once and shared by every grid point.
  PoolSampler sampler(val_pool);
  const auto npos = static_cast<Index>(val_pool.positive_index().size());
  const auto nneg = static_cast<Index>(val_pool.negative_index().size());
  std::vector<Sample> validation;
  for (std::size_t pi = 0; pi < options.prevalences.size(); ++pi) {
    const double p = options.prevalences[pi];
    const Index n = feasible_sample_size(p, options.sample_size, npos, nneg);
    if (n < options.min_sample_size) {
      spdlog::warn("grid search: skipping validation prevalence {:.2f} ({} positives, {} negatives)",
                   p, npos, nneg);
      ++result.skipped_prevalences;
      continue;
    }
    for (int s = 0; s < options.samples_per_prevalence; ++s)
      validation.push_back(sampler.at_prevalence(p, n, derive_seed(seed, {2, pi, static_cast<std::uint64_t>(s)})));
  }
  if (validation.empty()) throw ValidationError("grid search: every validation prevalence was skipped");

  double best_score = std::numeric_limits<double>::infinity();
  const std::uint64_t fit_seed = derive_seed(seed, {3});
  for (const LogisticParams& params : grid) {
    double score = std::numeric_limits<double>::infinity();
    try {
      auto q = factory(params);
      q->fit(fit_pool.data(), fit_seed);
      double sum = 0.0;
      for (const Sample& s : validation) sum += std::abs(s.true_prevalence - q->quantify(s));
      score = sum / static_cast<double>(validation.size());
    } catch (const Error& e) {
      spdlog::warn("grid search: {} failed: {}", to_string(params), e.what());
    }
    result.scores.push_back(score);
    if (score < best_score) {
      best_score = score;
      result.best = params;
    }
  }
  if (!std::isfinite(best_score)) throw Error("grid search: every grid point failed");
  return result;
}

std::unique_ptr<Quantifier> FixedLearner::learn(Method method, const BinaryDataset& train,
                                                std::uint64_t seed) const {
  auto q = make_quantifier(method, config_);
  q->fit(train, seed);
  return q;
}

GridSearchLearner::GridSearchLearner(QuantifierConfig base, std::vector<LogisticParams> grid,
                                     GridSearchOptions options)
    : base_(std::move(base)), grid_(std::move(grid)), options_(std::move(options)) {
  if (grid_.empty()) throw ValidationError("grid search over an empty grid");
}

std::unique_ptr<Quantifier> GridSearchLearner::learn(Method method, const BinaryDataset& train,
                                                     std::uint64_t seed) const {
  QuantifierConfig config = base_;
  if (uses_classifier(method)) {
    const QuantifierFactory factory = [&](const LogisticParams& params) {
      QuantifierConfig c = base_;
      c.classifier = params;
      return make_quantifier(method, c);
    };
    config.classifier = grid_search(train, factory, grid_, derive_seed(seed, {7}), options_).best;
    spdlog::debug("grid search: {} at training prevalence {:.3f} picked {}", to_string(method),
                 train.prevalence(), to_string(config.classifier));
  }
  auto q = make_quantifier(method, config);
  q->fit(train, seed);
  return q;
}

}  // namespace shiftbench
