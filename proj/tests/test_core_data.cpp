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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "shiftbench/core_data.hpp"
#include "shiftbench/random.hpp"

using namespace shiftbench;
using testutil::labelled_line;
using testutil::stars_dataset;

namespace {

std::vector<int> labels_with(int n, int positives) {
  std::vector<int> y(static_cast<std::size_t>(n), 0);
  std::fill(y.begin(), y.begin() + positives, 1);
  return y;
}

std::set<double> feature_values(const FeatureMatrix& X) {
  std::set<double> out;
  for (Index r = 0; r < X.rows(); ++r) out.insert(X.coeff(r, 0));
  return out;
}

// Feature equals the row id, so pools can be compared by row identity.
BinaryDataset indexed(const std::vector<int>& y) {
  Eigen::MatrixXd X(static_cast<Index>(y.size()), 1);
  for (Index i = 0; i < X.rows(); ++i) X(i, 0) = static_cast<double>(i + 1);
  return testutil::binary(X, y);
}

}  // namespace

TEST(Binarise, CutAtThreeDropsTies) {
  const BinaryDataset b = binarise_dataset(stars_dataset({1, 2, 3, 4, 5}), 3.0);
  ASSERT_EQ(b.size(), 4);
  EXPECT_EQ(std::vector<int>(b.labels.begin(), b.labels.end()), (std::vector<int>{0, 0, 1, 1}));
  // the star-3 row (feature 2) is the one removed
  EXPECT_EQ(feature_values(b.features), (std::set<double>{0, 1, 3, 4}));
}

TEST(Binarise, HalfIntegerCutKeepsEverything) {
  const BinaryDataset b = binarise_dataset(stars_dataset({1, 2, 3, 4, 5}), 2.5);
  EXPECT_EQ(std::vector<int>(b.labels.begin(), b.labels.end()), (std::vector<int>{0, 0, 1, 1, 1}));
}

TEST(Binarise, AllAboveThreshold) {
  const BinaryDataset b = binarise_dataset(stars_dataset({5, 5}), 4.5);
  EXPECT_EQ(b.positive_count(), 2);
}

TEST(Binarise, EmptyOutputIsAnError) {
  EXPECT_THROW(binarise_dataset(stars_dataset({3, 3}), 3.0), EmptyDatasetError);
  EXPECT_THROW(binarise_dataset(stars_dataset({}), 3.0), EmptyDatasetError);
}

TEST(Binarise, SizeIdentityAndCategoriesPreserved) {
  std::vector<int> stars;
  std::vector<Category> cats;
  for (int i = 0; i < 60; ++i) {
    stars.push_back(1 + i % 5);
    cats.push_back(i % 3 ? Category::A : Category::B);
  }
  const StarDataset d = stars_dataset(stars, cats);
  const BinaryDataset b = binarise_dataset(d, 3.0);
  EXPECT_EQ(b.size(), 60 - 12);
  const BinaryDataset c = binarise_dataset(d, 3.5);
  EXPECT_EQ(c.size(), 60);
  for (Index i = 0; i < c.size(); ++i) EXPECT_EQ(c.categories[i], cats[i]);
}

TEST(SplitStratified, ExactDivisibility) {
  const auto [a, b] = split_stratified(indexed(labels_with(100, 40)), 0.5, 7);
  EXPECT_EQ(a.size(), 50);
  EXPECT_EQ(b.size(), 50);
  EXPECT_EQ(a.data().positive_count(), 20);
  EXPECT_EQ(b.data().positive_count(), 20);
}

TEST(SplitStratified, OddSizeKeepsPrevalenceWithinOneOverSize) {
  // 101 points, 50 positives; derived integer allocation gives 25/25 and 26/25
  const auto [a, b] = split_stratified(indexed(labels_with(101, 50)), 0.5, 11);
  EXPECT_EQ(a.size() + b.size(), 101);
  EXPECT_LE(std::abs(a.prevalence() - 50.0 / 101.0), 1.0 / 50.0);
  EXPECT_LE(std::abs(b.prevalence() - 50.0 / 101.0), 1.0 / 50.0);
}

TEST(SplitStratified, DisjointExhaustiveAndDeterministic) {
  const BinaryDataset d = indexed(labels_with(237, 91));
  const auto [a, b] = split_stratified(d, 0.3, 99);
  const auto [a2, b2] = split_stratified(d, 0.3, 99);
  auto fa = feature_values(a.data().features);
  auto fb = feature_values(b.data().features);
  EXPECT_EQ(fa, feature_values(a2.data().features));
  EXPECT_EQ(fb, feature_values(b2.data().features));
  std::vector<double> inter;
  std::set_intersection(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(inter));
  EXPECT_TRUE(inter.empty());
  EXPECT_EQ(fa.size() + fb.size(), 237u);
  const auto [a3, b3] = split_stratified(d, 0.3, 100);
  EXPECT_NE(fa, feature_values(a3.data().features));
}

TEST(SplitStratified, TinyClassIsAnError) {
  EXPECT_THROW(split_stratified(indexed(labels_with(10, 1)), 0.5, 1), StratificationError);
  EXPECT_THROW(split_stratified(indexed(labels_with(10, 5)), 1.0, 1), ValidationError);
}

TEST(Pool, IndexListsPartitionByLabel) {
  const Pool pool(indexed({1, 0, 0, 1, 1, 0, 0}));
  std::vector<Index> pos(pool.positive_index().begin(), pool.positive_index().end());
  std::vector<Index> neg(pool.negative_index().begin(), pool.negative_index().end());
  EXPECT_EQ(pos, (std::vector<Index>{0, 3, 4}));
  EXPECT_EQ(neg, (std::vector<Index>{1, 2, 5, 6}));
}

TEST(SampleAtPrevalence, Boundaries) {
  const Pool pool(indexed(labels_with(2000, 800)));
  const Sample s0 = sample_at_prevalence(pool, 0.0, 500, 1);
  EXPECT_EQ(s0.labels.sum(), 0);
  EXPECT_EQ(s0.size(), 500);
  const Sample s5 = sample_at_prevalence(pool, 0.5, 500, 1);
  EXPECT_EQ(s5.labels.sum(), 250);
  EXPECT_EQ(s5.true_prevalence, 0.5);
}

TEST(SampleAtPrevalence, Deterministic) {
  const Pool pool(indexed(labels_with(2000, 800)));
  const Sample a = sample_at_prevalence(pool, 0.25, 500, 42);
  const Sample b = sample_at_prevalence(pool, 0.25, 500, 42);
  EXPECT_EQ(feature_values(a.features), feature_values(b.features));
  EXPECT_EQ(a.labels.sum(), 125);
  const Sample c = sample_at_prevalence(pool, 0.25, 500, 43);
  EXPECT_NE(feature_values(a.features), feature_values(c.features));
}

TEST(SampleAtPrevalence, RoundHalfUpAndWithinHalfOverN) {
  const Pool pool(indexed(labels_with(400, 200)));
  for (int n : {3, 7, 10, 33, 101}) {
    for (int k = 0; k <= 20; ++k) {
      // k*n/20 rounded half up, in exact integer arithmetic
      const double p = k / 20.0;
      const Sample s = sample_at_prevalence(pool, p, n, 5);
      EXPECT_EQ(s.labels.sum(), (2 * k * n + 20) / 40) << "k=" << k << " n=" << n;
      EXPECT_LE(std::abs(s.true_prevalence - p), 0.5 / n + 1e-12);
    }
  }
  EXPECT_EQ(positive_count_for(0.5, 5), 3);
  EXPECT_EQ(positive_count_for(0.25, 10), 3);
}

TEST(SampleAtPrevalence, PrevalenceRecomputesBitExactly) {
  const Pool pool(indexed(labels_with(300, 120)));
  for (int n : {7, 13, 99}) {
    const Sample s = sample_at_prevalence(pool, 0.3, n, static_cast<std::uint64_t>(n));
    EXPECT_EQ(s.true_prevalence, static_cast<double>(s.labels.sum()) / static_cast<double>(n));
    EXPECT_EQ(s.true_prevalence, prevalence_of(s.labels));
  }
}

TEST(SampleAtPrevalence, NoDuplicatesWithinSample) {
  const Pool pool(indexed(labels_with(600, 300)));
  const Sample s = sample_at_prevalence(pool, 0.5, 600, 3);
  EXPECT_EQ(feature_values(s.features).size(), 600u);
}

TEST(SampleAtPrevalence, ExhaustionNamesTheClass) {
  const Pool pool(indexed(labels_with(100, 10)));
  try {
    sample_at_prevalence(pool, 0.5, 50, 1);
    FAIL() << "expected exhaustion";
  } catch (const ExhaustionError& e) {
    EXPECT_NE(std::string(e.what()).find("positive"), std::string::npos);
  }
  try {
    sample_at_prevalence(pool, 0.0, 95, 1);
    FAIL() << "expected exhaustion";
  } catch (const ExhaustionError& e) {
    EXPECT_NE(std::string(e.what()).find("negative"), std::string::npos);
  }
}

TEST(SampleUniform, WholePool) {
  const Pool pool(indexed(labels_with(120, 30)));
  const Sample s = sample_uniform(pool, 120, 9);
  EXPECT_EQ(s.true_prevalence, 0.25);
  EXPECT_EQ(feature_values(s.features).size(), 120u);
}

TEST(SampleUniform, PositivesOnly) {
  const Pool pool(indexed(labels_with(5, 5)));
  EXPECT_EQ(sample_uniform(pool, 1, 2).true_prevalence, 1.0);
}

TEST(SampleUniform, TooLargeIsAnError) {
  const Pool pool(indexed(labels_with(5, 2)));
  EXPECT_THROW(sample_uniform(pool, 6, 2), ExhaustionError);
}

TEST(SampleUniform, MeanPrevalenceWithinThreeStandardErrors) {
  const Pool pool(indexed(labels_with(1000, 300)));
  const int draws = 1000;
  const Index n = 50;
  double total = 0;
  for (int i = 0; i < draws; ++i) total += sample_uniform(pool, n, derive_seed(77, {static_cast<std::uint64_t>(i)})).true_prevalence;
  const double mean = total / draws;
  // hypergeometric variance of one draw's prevalence
  const double var = 0.3 * 0.7 / n * (1000.0 - n) / (1000.0 - 1.0);
  EXPECT_LE(std::abs(mean - 0.3), 3.0 * std::sqrt(var / draws));
}

TEST(Sampler, ScratchIsRestoredBetweenDraws) {
  const Pool pool(indexed(labels_with(500, 200)));
  PoolSampler sampler(pool);
  Rng r1(5);
  sampler.indices_at_prevalence(0.4, 100, r1);
  Rng r2(6);
  const auto second = sampler.indices_at_prevalence(0.4, 100, r2);
  PoolSampler fresh(pool);
  Rng r3(6);
  EXPECT_EQ(fresh.indices_at_prevalence(0.4, 100, r3), second);
}

TEST(DrawWithoutReplacement, UniformOverPositions) {
  std::vector<Index> pop(10);
  std::iota(pop.begin(), pop.end(), 0);
  std::vector<int> hits(10, 0);
  Rng rng(123);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t)
    for (Index i : draw_without_replacement(pop, 3, rng)) ++hits[static_cast<std::size_t>(i)];
  // each element is picked with probability 0.3
  const double sd = std::sqrt(trials * 0.3 * 0.7);
  for (int h : hits) EXPECT_LE(std::abs(h - trials * 0.3), 4.0 * sd);
  std::vector<Index> expect(10);
  std::iota(expect.begin(), expect.end(), 0);
  EXPECT_EQ(pop, expect);
}

TEST(DeriveSeed, OrderMatters) {
  EXPECT_NE(derive_seed(1, {1, 2}), derive_seed(1, {2, 1}));
  EXPECT_EQ(derive_seed(1, {1, 2}), derive_seed(1, {1, 2}));
  EXPECT_NE(derive_seed(1, {}), derive_seed(2, {}));
}

TEST(StarDataset, ValidateRejectsBadStars) {
  StarDataset d = stars_dataset({1, 2, 6});
  EXPECT_THROW(d.validate(), ValidationError);
  StarDataset ok = stars_dataset({1, 2, 5});
  EXPECT_NO_THROW(ok.validate());
}

TEST(Categories, RoundTrip) {
  EXPECT_EQ(parse_category("A"), Category::A);
  EXPECT_EQ(to_string(Category::B), "B");
  EXPECT_THROW(parse_category("C"), ValidationError);
}

TEST(Sample, ConcatSumsParts) {
  const BinaryDataset d = labelled_line({1, 1, 0, 0, 0});
  const Sample a = make_sample(d, std::vector<Index>{0, 2});
  const Sample b = make_sample(d, std::vector<Index>{1, 3, 4});
  const Sample* parts[] = {&a, &b};
  const Sample c = concat_samples(parts);
  EXPECT_EQ(c.size(), 5);
  EXPECT_EQ(c.true_prevalence, 0.4);
}
