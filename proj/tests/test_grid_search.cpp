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
#include <memory>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "shiftbench/datagen.hpp"
#include "shiftbench/grid_search.hpp"

using namespace shiftbench;

namespace {

BinaryDataset train_set(Index n, double prevalence, std::uint64_t seed) {
  return generate_mixture(testutil::two_gaussians(1.0, prevalence, 2), n, seed).binary();
}

QuantifierFactory factory_for(Method m) {
  return [m](const LogisticParams& p) {
    QuantifierConfig c;
    c.classifier = p;
    return make_quantifier(m, c);
  };
}

// Wraps a quantifier and records the largest |feature| it was ever shown.
class Spy final : public Quantifier {
 public:
  Spy(std::unique_ptr<Quantifier> inner, double* seen) : inner_(std::move(inner)), seen_(seen) {}
  Method method() const override { return inner_->method(); }
  void fit(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) override {
    note(X);
    inner_->fit(X, y, seed);
  }
  using Quantifier::fit;
  double quantify(const FeatureMatrix& X) const override {
    note(X);
    return inner_->quantify(X);
  }
  using Quantifier::quantify;

 private:
  void note(const FeatureMatrix& X) const {
    for (Index k = 0; k < X.nonZeros(); ++k) *seen_ = std::max(*seen_, std::abs(X.valuePtr()[k]));
  }
  std::unique_ptr<Quantifier> inner_;
  double* seen_;
};

}  // namespace

TEST(GridSearch, DefaultGridHasTenPoints) {
  const auto g = default_grid();
  ASSERT_EQ(g.size(), 10u);
  EXPECT_EQ(g.back().C, 1000.0);
  EXPECT_EQ(std::count_if(g.begin(), g.end(), [](auto& p) { return p.class_weight == ClassWeight::Balanced; }), 5);
}

TEST(GridSearch, SinglePointIsReturned) {
  const std::vector<LogisticParams> grid{{7.0, ClassWeight::Balanced}};
  const auto r = grid_search(train_set(300, 0.4, 1), factory_for(Method::CC), grid, 3);
  EXPECT_EQ(r.best, grid[0]);
}

TEST(GridSearch, ConstantClassifierLoses) {
  // C = 1e-9 shrinks w to ~0, so CC's estimate is the constant 0 (training
  // prevalence below one half). Its MAE over the 0..1 grid is the mean
  // prevalence, 0.5.
  const std::vector<LogisticParams> grid{{1e-9, ClassWeight::None}, {1.0, ClassWeight::None}};
  const auto r = grid_search(train_set(3000, 0.4, 2), factory_for(Method::CC), grid, 5);
  EXPECT_EQ(r.best, grid[1]);
  ASSERT_EQ(r.scores.size(), 2u);
  EXPECT_NEAR(r.scores[0], 0.5, 0.005);
  EXPECT_LT(r.scores[1], r.scores[0]);
}

TEST(GridSearch, DeterministicGivenSeed) {
  const BinaryDataset d = train_set(800, 0.35, 4);
  const auto a = grid_search(d, factory_for(Method::PACC), default_grid(), 9);
  const auto b = grid_search(d, factory_for(Method::PACC), default_grid(), 9);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.scores, b.scores);
}

TEST(GridSearch, ScoresArePerPointMae) {
  const auto r = grid_search(train_set(600, 0.5, 6), factory_for(Method::PCC), default_grid(), 1);
  ASSERT_EQ(r.scores.size(), 10u);
  const auto best = std::min_element(r.scores.begin(), r.scores.end()) - r.scores.begin();
  EXPECT_EQ(r.best, default_grid()[static_cast<std::size_t>(best)]);
  for (double s : r.scores) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(GridSearch, OnlyTheTrainingPoolIsTouched) {
  // Training features stay small; held-out pool features are shifted by 1000.
  const BinaryDataset train = train_set(500, 0.4, 7);
  ASSERT_LT(Eigen::MatrixXd(train.features).cwiseAbs().maxCoeff(), 100.0);
  double seen = 0.0;
  const QuantifierFactory spy = [&](const LogisticParams& p) {
    QuantifierConfig c;
    c.classifier = p;
    return std::make_unique<Spy>(make_quantifier(Method::ACC, c), &seen);
  };
  grid_search(train, spy, default_grid(), 2);
  EXPECT_GT(seen, 0.0);
  EXPECT_LT(seen, 100.0);
}

TEST(GridSearch, SkipsInfeasiblePrevalences) {
  // 20 positives -> 8 in the validation split, so prevalences >= 0.9 cannot
  // form a sample of at least 10.
  std::vector<int> y(400, 0);
  for (int i = 0; i < 20; ++i) y[static_cast<std::size_t>(i * 20)] = 1;
  Eigen::MatrixXd X(400, 1);
  for (Index i = 0; i < 400; ++i) X(i, 0) = (y[static_cast<std::size_t>(i)] ? 1.0 : -1.0) + 0.01 * static_cast<double>(i % 7);
  const BinaryDataset d = testutil::binary(X, y);
  GridSearchOptions opt;
  opt.samples_per_prevalence = 2;
  const std::vector<LogisticParams> grid{{1.0, ClassWeight::None}, {10.0, ClassWeight::None}};
  const auto r = grid_search(d, factory_for(Method::CC), grid, 4, opt);
  EXPECT_EQ(r.skipped_prevalences, 2);
  opt.min_sample_size = 10000;
  EXPECT_THROW(grid_search(d, factory_for(Method::CC), grid, 4, opt), ValidationError);
}

TEST(GridSearch, EmptyGridIsAnError) {
  EXPECT_THROW(grid_search(train_set(100, 0.5, 1), factory_for(Method::CC), {}, 1), ValidationError);
}

TEST(FeasibleSampleSize, Examples) {
  EXPECT_EQ(feasible_sample_size(0.0, 500, 0, 300), 300);
  EXPECT_EQ(feasible_sample_size(1.0, 500, 50, 900), 50);
  EXPECT_EQ(feasible_sample_size(0.5, 500, 100, 400), 200);
  EXPECT_EQ(feasible_sample_size(0.3, 500, 400, 400), 500);
  EXPECT_EQ(feasible_sample_size(1.0, 500, 0, 10), 0);
}

TEST(Learners, MlpeSkipsModelSelection) {
  const GridSearchLearner learner;
  const auto q = learner.learn(Method::MLPE, train_set(200, 0.25, 3), 1);
  EXPECT_EQ(q->method(), Method::MLPE);
  EXPECT_NEAR(q->quantify(FeatureMatrix(Eigen::MatrixXd::Zero(2, 2).sparseView())), 0.25, 0.1);
}

TEST(Learners, GridSearchLearnerRefitsOnAllData) {
  const BinaryDataset d = train_set(600, 0.4, 5);
  const GridSearchLearner learner({}, {{1.0, ClassWeight::None}});
  const auto q = learner.learn(Method::PCC, d, 3);
  const FixedLearner fixed;
  const auto f = fixed.learn(Method::PCC, d, 3);
  const auto* a = dynamic_cast<const AggregativeQuantifier*>(q.get());
  const auto* b = dynamic_cast<const AggregativeQuantifier*>(f.get());
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->classifier().weights(), b->classifier().weights());
}
