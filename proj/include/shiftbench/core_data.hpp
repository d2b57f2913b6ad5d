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

#ifndef SHIFTBENCH_CORE_DATA_HPP_
#define SHIFTBENCH_CORE_DATA_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shiftbench/common.hpp"
#include "shiftbench/random.hpp"

namespace shiftbench {

/// Star-rated datapoints stored column-wise: row i of `features`, `stars[i]`,
/// `categories[i]` and (for text corpora) `texts[i]` describe one datapoint.
/// Text corpora carry an empty feature matrix until they are vectorised.
struct StarDataset {
  FeatureMatrix features;
  LabelVector stars;
  std::vector<Category> categories;
  std::vector<std::string> texts;

  Index size() const { return stars.size(); }
  Index dim() const { return features.cols(); }
  bool has_text() const { return !texts.empty(); }

  StarDataset subset(std::span<const Index> rows) const;
  StarDataset select(Category category) const;

  /// Throws ValidationError if column lengths disagree or a star is outside 1..5.
  void validate() const;
};

/// Binary-labelled datapoints; label 1 is the positive class.
struct BinaryDataset {
  FeatureMatrix features;
  LabelVector labels;
  std::vector<Category> categories;
  std::vector<std::string> texts;

  Index size() const { return labels.size(); }
  Index dim() const { return features.cols(); }
  bool has_text() const { return !texts.empty(); }
  Index positive_count() const { return labels.sum(); }
  double prevalence() const;

  BinaryDataset subset(std::span<const Index> rows) const;
};

/// An immutable labelled pool with per-class index lists.
class Pool {
 public:
  Pool() = default;
  explicit Pool(BinaryDataset data);

  const BinaryDataset& data() const { return data_; }
  std::span<const Index> positive_index() const { return positives_; }
  std::span<const Index> negative_index() const { return negatives_; }
  Index size() const { return data_.size(); }
  double prevalence() const { return data_.prevalence(); }

 private:
  BinaryDataset data_;
  std::vector<Index> positives_;
  std::vector<Index> negatives_;
};

/// A drawn sample. Labels are kept for scoring; quantifiers only see features.
struct Sample {
  FeatureMatrix features;
  LabelVector labels;
  double true_prevalence = 0.0;

  Index size() const { return labels.size(); }
  BinaryDataset as_dataset() const;
};

double prevalence_of(const LabelVector& labels);

FeatureMatrix gather_rows(const FeatureMatrix& source, std::span<const Index> rows);
FeatureMatrix vstack(std::span<const FeatureMatrix* const> blocks);

Sample make_sample(const BinaryDataset& data, std::span<const Index> rows);
Sample concat_samples(std::span<const Sample* const> parts);

/// Labels stars > cut_point as 1, stars < cut_point as 0 and drops ties.
BinaryDataset binarise_dataset(const StarDataset& data, double cut_point);

/// Splits per stratum: stratum s contributes round(fraction * n_s) members to
/// the first part (clamped so both parts receive at least one). Returns row
/// indices in ascending order.
std::pair<std::vector<Index>, std::vector<Index>> stratified_partition(
    std::span<const int> strata, double fraction, std::uint64_t seed);

std::pair<Pool, Pool> split_stratified(const BinaryDataset& data, double fraction,
                                       std::uint64_t seed);
std::pair<StarDataset, StarDataset> split_stratified_by_stars(const StarDataset& data,
                                                              double fraction,
                                                              std::uint64_t seed);

/// round(prevalence * size), half up.
Index positive_count_for(double prevalence, Index size);

/// Draws samples from one pool. Holds scratch copies of the pool's index
/// lists so repeated draws cost O(sample size); results depend only on
/// (pool, arguments).
class PoolSampler {
 public:
  explicit PoolSampler(const Pool& pool);

  std::vector<Index> indices_at_prevalence(double prevalence, Index size, Rng& rng);
  std::vector<Index> indices_by_counts(Index positives, Index negatives, Rng& rng);
  std::vector<Index> indices_uniform(Index size, Rng& rng);

  Sample at_prevalence(double prevalence, Index size, std::uint64_t seed);
  Sample by_counts(Index positives, Index negatives, std::uint64_t seed);
  Sample uniform(Index size, std::uint64_t seed);

  const Pool& pool() const { return *pool_; }

 private:
  const Pool* pool_;
  std::vector<Index> positives_;
  std::vector<Index> negatives_;
  std::vector<Index> all_;
};

Sample sample_at_prevalence(const Pool& pool, double prevalence, Index size,
                            std::uint64_t seed);
Sample sample_uniform(const Pool& pool, Index size, std::uint64_t seed);

}  // namespace shiftbench

#endif  // SHIFTBENCH_CORE_DATA_HPP_
