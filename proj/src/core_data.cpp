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

#include "shiftbench/core_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace shiftbench {

std::string_view to_string(Category category) { return category == Category::A ? "A" : "B"; }

Category parse_category(std::string_view text) {
  if (text == "A" || text == "a") return Category::A;
  if (text == "B" || text == "b") return Category::B;
  throw ValidationError("unknown category '" + std::string(text) + "' (expected A or B)");
}

namespace {

template <typename T>
std::vector<T> pick(const std::vector<T>& values, std::span<const Index> rows) {
  if (values.empty()) return {};
  std::vector<T> out;
  out.reserve(rows.size());
  for (Index r : rows) out.push_back(values[static_cast<std::size_t>(r)]);
  return out;
}

LabelVector pick(const LabelVector& values, std::span<const Index> rows) {
  LabelVector out(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Index>(i)] = values[rows[i]];
  return out;
}

FeatureMatrix pick_features(const FeatureMatrix& features, std::span<const Index> rows) {
  if (features.rows() == 0) return FeatureMatrix(0, features.cols());
  return gather_rows(features, rows);
}

}  // namespace

StarDataset StarDataset::subset(std::span<const Index> rows) const {
  return StarDataset{pick_features(features, rows), pick(stars, rows), pick(categories, rows),
                     pick(texts, rows)};
}

StarDataset StarDataset::select(Category category) const {
  std::vector<Index> rows;
  for (Index i = 0; i < size(); ++i)
    if (categories[static_cast<std::size_t>(i)] == category) rows.push_back(i);
  return subset(rows);
}

void StarDataset::validate() const {
  const Index n = size();
  if (static_cast<Index>(categories.size()) != n)
    throw ValidationError("category column length does not match star column");
  if (!texts.empty() && static_cast<Index>(texts.size()) != n)
    throw ValidationError("text column length does not match star column");
  if (features.rows() != n && !(features.rows() == 0 && has_text()))
    throw ValidationError("feature matrix has " + std::to_string(features.rows()) +
                          " rows for " + std::to_string(n) + " datapoints");
  for (Index i = 0; i < n; ++i)
    if (stars[i] < 1 || stars[i] > 5)
      throw ValidationError("star rating " + std::to_string(stars[i]) + " outside 1..5");
}

double prevalence_of(const LabelVector& labels) {
  if (labels.size() == 0) throw EmptyDatasetError("prevalence of an empty label vector");
  return static_cast<double>(labels.sum()) / static_cast<double>(labels.size());
}

double BinaryDataset::prevalence() const { return prevalence_of(labels); }

BinaryDataset BinaryDataset::subset(std::span<const Index> rows) const {
  return BinaryDataset{pick_features(features, rows), pick(labels, rows), pick(categories, rows),
                       pick(texts, rows)};
}

BinaryDataset Sample::as_dataset() const { return BinaryDataset{features, labels, {}, {}}; }

Pool::Pool(BinaryDataset data) : data_(std::move(data)) {
  for (Index i = 0; i < data_.size(); ++i) {
    const int y = data_.labels[i];
    if (y == 1)
      positives_.push_back(i);
    else if (y == 0)
      negatives_.push_back(i);
    else
      throw ValidationError("binary label " + std::to_string(y) + " outside {0,1}");
  }
}

FeatureMatrix gather_rows(const FeatureMatrix& source, std::span<const Index> rows) {
  if (!source.isCompressed())
    throw Error("gather_rows expects a compressed sparse matrix");
  FeatureMatrix out(static_cast<Index>(rows.size()), source.cols());
  const Index* outer = source.outerIndexPtr();
  Index nnz = 0;
  for (Index r : rows) {
    if (r < 0 || r >= source.rows()) throw Error("row index out of range");
    nnz += outer[r + 1] - outer[r];
  }
  out.resizeNonZeros(nnz);
  Index* out_outer = out.outerIndexPtr();
  out_outer[0] = 0;
  Index pos = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Index begin = outer[rows[i]];
    const Index end = outer[rows[i] + 1];
    std::copy(source.valuePtr() + begin, source.valuePtr() + end, out.valuePtr() + pos);
    std::copy(source.innerIndexPtr() + begin, source.innerIndexPtr() + end,
              out.innerIndexPtr() + pos);
    pos += end - begin;
    out_outer[i + 1] = pos;
  }
  return out;
}

FeatureMatrix vstack(std::span<const FeatureMatrix* const> blocks) {
  if (blocks.empty()) return {};
  const Index cols = blocks.front()->cols();
  Index rows = 0;
  Index nnz = 0;
  for (const FeatureMatrix* b : blocks) {
    if (b->cols() != cols) throw DimensionMismatchError("vstack: column counts differ");
    if (!b->isCompressed()) throw Error("vstack expects compressed sparse matrices");
    rows += b->rows();
    nnz += b->nonZeros();
  }
  FeatureMatrix out(rows, cols);
  out.resizeNonZeros(nnz);
  Index* out_outer = out.outerIndexPtr();
  out_outer[0] = 0;
  Index row = 0;
  Index pos = 0;
  for (const FeatureMatrix* b : blocks) {
    std::copy(b->valuePtr(), b->valuePtr() + b->nonZeros(), out.valuePtr() + pos);
    std::copy(b->innerIndexPtr(), b->innerIndexPtr() + b->nonZeros(), out.innerIndexPtr() + pos);
    for (Index r = 0; r < b->rows(); ++r) out_outer[row + r + 1] = pos + b->outerIndexPtr()[r + 1];
    row += b->rows();
    pos += b->nonZeros();
  }
  return out;
}

Sample make_sample(const BinaryDataset& data, std::span<const Index> rows) {
  if (rows.empty()) throw EmptyDatasetError("a sample needs at least one datapoint");
  Sample s;
  s.features = pick_features(data.features, rows);
  s.labels = pick(data.labels, rows);
  s.true_prevalence = prevalence_of(s.labels);
  return s;
}

Sample concat_samples(std::span<const Sample* const> parts) {
  std::vector<const FeatureMatrix*> blocks;
  Index n = 0;
  for (const Sample* p : parts) {
    if (p->size() == 0) continue;
    blocks.push_back(&p->features);
    n += p->size();
  }
  if (n == 0) throw EmptyDatasetError("concatenation of empty samples");
  Sample out;
  out.features = vstack(blocks);
  out.labels.resize(n);
  Index at = 0;
  for (const Sample* p : parts) {
    out.labels.segment(at, p->size()) = p->labels;
    at += p->size();
  }
  out.true_prevalence = prevalence_of(out.labels);
  return out;
}

BinaryDataset binarise_dataset(const StarDataset& data, double cut_point) {
  std::vector<Index> kept;
  kept.reserve(static_cast<std::size_t>(data.size()));
  for (Index i = 0; i < data.size(); ++i)
    if (static_cast<double>(data.stars[i]) != cut_point) kept.push_back(i);
  if (kept.empty())
    throw EmptyDatasetError("binarising at cut point " + std::to_string(cut_point) +
                            " left no datapoints");
  BinaryDataset out;
  out.features = pick_features(data.features, kept);
  out.labels.resize(static_cast<Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i)
    out.labels[static_cast<Index>(i)] = static_cast<double>(data.stars[kept[i]]) > cut_point ? 1 : 0;
  out.categories = pick(data.categories, kept);
  out.texts = pick(data.texts, kept);
  return out;
}

std::pair<std::vector<Index>, std::vector<Index>> stratified_partition(
    std::span<const int> strata, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ValidationError("split fraction must lie strictly inside (0,1)");
  std::map<int, std::vector<Index>> groups;
  for (std::size_t i = 0; i < strata.size(); ++i)
    groups[strata[i]].push_back(static_cast<Index>(i));

  Rng rng(seed);
  std::vector<Index> first;
  std::vector<Index> second;
  for (auto& [stratum, members] : groups) {
    const auto n = static_cast<Index>(members.size());
    if (n < 2)
      throw StratificationError("stratum " + std::to_string(stratum) + " has " +
                                std::to_string(n) + " member(s); stratification needs 2");
    const Index take =
        std::clamp<Index>(static_cast<Index>(std::floor(fraction * n + 0.5)), 1, n - 1);
    std::vector<Index> chosen = draw_without_replacement(members, take, rng);
    std::sort(chosen.begin(), chosen.end());
    std::vector<Index> rest;
    std::set_difference(members.begin(), members.end(), chosen.begin(), chosen.end(),
                        std::back_inserter(rest));
    first.insert(first.end(), chosen.begin(), chosen.end());
    second.insert(second.end(), rest.begin(), rest.end());
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {std::move(first), std::move(second)};
}

std::pair<Pool, Pool> split_stratified(const BinaryDataset& data, double fraction,
                                       std::uint64_t seed) {
  std::vector<int> strata(data.labels.data(), data.labels.data() + data.labels.size());
  auto [a, b] = stratified_partition(strata, fraction, seed);
  return {Pool(data.subset(a)), Pool(data.subset(b))};
}

std::pair<StarDataset, StarDataset> split_stratified_by_stars(const StarDataset& data,
                                                              double fraction,
                                                              std::uint64_t seed) {
  std::vector<int> strata(data.stars.data(), data.stars.data() + data.stars.size());
  auto [a, b] = stratified_partition(strata, fraction, seed);
  return {data.subset(a), data.subset(b)};
}

Index positive_count_for(double prevalence, Index size) {
  if (!(prevalence >= 0.0 && prevalence <= 1.0))
    throw ValidationError("prevalence " + std::to_string(prevalence) + " outside [0,1]");
  // The small offset absorbs representation error such as 0.3 * 500 = 150.00000000000003.
  return static_cast<Index>(std::floor(prevalence * static_cast<double>(size) + 0.5 + 1e-9));
}

PoolSampler::PoolSampler(const Pool& pool)
    : pool_(&pool),
      positives_(pool.positive_index().begin(), pool.positive_index().end()),
      negatives_(pool.negative_index().begin(), pool.negative_index().end()) {
  all_.resize(static_cast<std::size_t>(pool.size()));
  for (Index i = 0; i < pool.size(); ++i) all_[static_cast<std::size_t>(i)] = i;
}

std::vector<Index> PoolSampler::indices_by_counts(Index positives, Index negatives, Rng& rng) {
  if (positives < 0 || negatives < 0) throw ValidationError("negative class count requested");
  if (positives > static_cast<Index>(positives_.size()))
    throw ExhaustionError("pool exhausted for the positive class: need " +
                          std::to_string(positives) + ", have " +
                          std::to_string(positives_.size()));
  if (negatives > static_cast<Index>(negatives_.size()))
    throw ExhaustionError("pool exhausted for the negative class: need " +
                          std::to_string(negatives) + ", have " +
                          std::to_string(negatives_.size()));
  std::vector<Index> rows = draw_without_replacement(positives_, positives, rng);
  std::vector<Index> neg = draw_without_replacement(negatives_, negatives, rng);
  rows.insert(rows.end(), neg.begin(), neg.end());
  return rows;
}

std::vector<Index> PoolSampler::indices_at_prevalence(double prevalence, Index size, Rng& rng) {
  if (size < 1) throw ValidationError("sample size must be at least 1");
  const Index pos = positive_count_for(prevalence, size);
  return indices_by_counts(pos, size - pos, rng);
}

std::vector<Index> PoolSampler::indices_uniform(Index size, Rng& rng) {
  if (size < 1) throw ValidationError("sample size must be at least 1");
  if (size > pool_->size())
    throw ExhaustionError("uniform draw of " + std::to_string(size) + " from a pool of " +
                          std::to_string(pool_->size()));
  return draw_without_replacement(all_, size, rng);
}

Sample PoolSampler::at_prevalence(double prevalence, Index size, std::uint64_t seed) {
  Rng rng(seed);
  return make_sample(pool_->data(), indices_at_prevalence(prevalence, size, rng));
}

Sample PoolSampler::by_counts(Index positives, Index negatives, std::uint64_t seed) {
  Rng rng(seed);
  return make_sample(pool_->data(), indices_by_counts(positives, negatives, rng));
}

Sample PoolSampler::uniform(Index size, std::uint64_t seed) {
  Rng rng(seed);
  return make_sample(pool_->data(), indices_uniform(size, rng));
}

Sample sample_at_prevalence(const Pool& pool, double prevalence, Index size,
                            std::uint64_t seed) {
  return PoolSampler(pool).at_prevalence(prevalence, size, seed);
}

Sample sample_uniform(const Pool& pool, Index size, std::uint64_t seed) {
  return PoolSampler(pool).uniform(size, seed);
}

}  // namespace shiftbench
