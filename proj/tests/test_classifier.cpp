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

#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "shiftbench/classifier.hpp"
#include "shiftbench/datagen.hpp"

using namespace shiftbench;

namespace {

BinaryDataset separable_2d(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Eigen::MatrixXd X(n, 2);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double a, b;
    do {
      a = u(rng);
      b = u(rng);
    } while (std::abs(a + 0.5 * b - 0.3) < 0.5);  // margin around the line
    X(i, 0) = a;
    X(i, 1) = b;
    y[static_cast<std::size_t>(i)] = a + 0.5 * b > 0.3 ? 1 : 0;
  }
  return testutil::binary(X, y);
}

BinaryDataset duplicate(const BinaryDataset& d) {
  std::vector<Index> rows;
  for (int r = 0; r < 2; ++r)
    for (Index i = 0; i < d.size(); ++i) rows.push_back(i);
  return d.subset(rows);
}

double recall(const SoftClassifier& clf, const BinaryDataset& d) {
  const LabelVector h = clf.predict_hard(d.features);
  Index tp = 0;
  for (Index i = 0; i < d.size(); ++i) tp += d.labels[i] == 1 && h[i] == 1;
  return static_cast<double>(tp) / static_cast<double>(d.positive_count());
}

}  // namespace

TEST(Train, SeparableDataIsFitPerfectly) {
  const BinaryDataset d = separable_2d(300, 4);
  const SoftClassifier clf = train_logistic(d.features, d.labels, {100.0, ClassWeight::None});
  EXPECT_EQ(clf.predict_hard(d.features), d.labels);
}

TEST(Train, BalancedWeightingRaisesMinorityRecall) {
  const auto specs = testutil::two_gaussians(0.8, 0.1);
  const BinaryDataset d = generate_mixture(specs, 3000, 21).binary();
  const SoftClassifier plain = train_logistic(d.features, d.labels, {1.0, ClassWeight::None});
  const SoftClassifier bal = train_logistic(d.features, d.labels, {1.0, ClassWeight::Balanced});
  EXPECT_GT(recall(bal, d), recall(plain, d));
}

TEST(Train, DuplicationEqualsDoublingC) {
  // Sum-of-losses objective: duplicating every row doubles the data term, which
  // is the same problem as the original with C doubled.
  const auto specs = testutil::two_gaussians(0.7, 0.4, 3);
  const BinaryDataset d = generate_mixture(specs, 400, 8).binary();
  const BinaryDataset dd = duplicate(d);
  const SoftClassifier a = train_logistic(d.features, d.labels, {2.0, ClassWeight::None});
  const SoftClassifier b = train_logistic(dd.features, dd.labels, {1.0, ClassWeight::None});
  EXPECT_LE((a.weights() - b.weights()).norm(), 1e-6);
  EXPECT_NEAR(a.bias(), b.bias(), 1e-6);
  const SoftClassifier c = train_logistic(d.features, d.labels, {1.0, ClassWeight::Balanced});
  const SoftClassifier e = train_logistic(dd.features, dd.labels, {0.5, ClassWeight::Balanced});
  EXPECT_LE((c.weights() - e.weights()).norm(), 1e-6);
}

TEST(Train, SingleClassIsAnError) {
  const BinaryDataset d = testutil::labelled_line({1, 1, 1});
  EXPECT_THROW(train_logistic(d.features, d.labels, {}), ValidationError);
  const BinaryDataset ok = testutil::labelled_line({1, 0, 1});
  EXPECT_THROW(train_logistic(ok.features, ok.labels, {0.0, ClassWeight::None}), ValidationError);
}

TEST(Train, ConvergesToStatedTolerance) {
  const auto specs = testutil::two_gaussians(0.5, 0.5, 4);
  const BinaryDataset d = generate_mixture(specs, 500, 3).binary();
  TrainReport report;
  const SoftClassifier clf = train_logistic(d.features, d.labels, {10.0, ClassWeight::None}, {}, &report);
  EXPECT_TRUE(report.converged);
  const LogisticObjective f(d.features, d.labels, {10.0, ClassWeight::None});
  Vector theta(clf.dim() + 1);
  theta << clf.weights(), clf.bias();
  EXPECT_LE(f.gradient(theta).norm(), 1e-6);
}

TEST(Train, NewtonAndLbfgsAgree) {
  const auto specs = testutil::two_gaussians(0.6, 0.3, 5);
  const BinaryDataset d = generate_mixture(specs, 600, 12).binary();
  const LogisticParams p{1.0, ClassWeight::Balanced};
  TrainOptions newton;
  TrainOptions lbfgs;
  lbfgs.newton_max_dim = 0;
  const SoftClassifier a = train_logistic(d.features, d.labels, p, newton);
  const SoftClassifier b = train_logistic(d.features, d.labels, p, lbfgs);
  EXPECT_LE((a.weights() - b.weights()).norm(), 1e-5);
  EXPECT_NEAR(a.bias(), b.bias(), 1e-5);
}

TEST(Objective, GradientMatchesCentralDifferences) {
  Rng rng(2024);
  std::normal_distribution<double> z(0.0, 1.0);
  const auto specs = testutil::two_gaussians(0.5, 0.35, 3);
  for (int point = 0; point < 10; ++point) {
    const BinaryDataset d = generate_mixture(specs, 60, static_cast<std::uint64_t>(point + 1)).binary();
    const LogisticParams p{std::pow(10.0, point % 3 - 1.0), point % 2 ? ClassWeight::Balanced : ClassWeight::None};
    const LogisticObjective f(d.features, d.labels, p);
    Vector theta(f.dim());
    for (Index i = 0; i < theta.size(); ++i) theta[i] = z(rng);
    const Vector g = f.gradient(theta);
    Vector fd(theta.size());
    for (Index i = 0; i < theta.size(); ++i) {
      Vector up = theta, dn = theta;
      up[i] += 1e-6;
      dn[i] -= 1e-6;
      fd[i] = (f.value(up) - f.value(dn)) / 2e-6;
    }
    EXPECT_LE((g - fd).norm() / g.norm(), 1e-4);
  }
}

TEST(Objective, HessianMatchesGradientDifferences) {
  const auto specs = testutil::two_gaussians(0.5, 0.5, 2);
  const BinaryDataset d = generate_mixture(specs, 50, 5).binary();
  const LogisticObjective f(d.features, d.labels, {3.0, ClassWeight::Balanced});
  Vector theta(3);
  theta << 0.3, -0.2, 0.1;
  const Eigen::MatrixXd H = f.hessian(theta);
  for (Index i = 0; i < 3; ++i) {
    Vector up = theta, dn = theta;
    up[i] += 1e-6;
    dn[i] -= 1e-6;
    const Vector col = (f.gradient(up) - f.gradient(dn)) / 2e-6;
    EXPECT_LE((H.col(i) - col).norm(), 1e-5 * std::max(1.0, H.col(i).norm()));
  }
}

TEST(Objective, BalancedWeightsFormula) {
  const BinaryDataset d = testutil::labelled_line({1, 0, 0, 0, 0});
  const LogisticObjective f(d.features, d.labels, {1.0, ClassWeight::Balanced});
  EXPECT_DOUBLE_EQ(f.sample_weights()[0], 5.0 / 2.0);
  EXPECT_DOUBLE_EQ(f.sample_weights()[1], 5.0 / 8.0);
}

TEST(Predict, ZeroModelTiesGoPositive) {
  const SoftClassifier clf(Vector::Zero(2), 0.0);
  const Vector x = Vector::Constant(2, 3.0);
  EXPECT_EQ(clf.predict_proba(x), 0.5);
  EXPECT_EQ(clf.predict_hard(x), 1);
}

TEST(Predict, LargeBiasApproachesOne) {
  const SoftClassifier clf(Vector::Zero(1), 50.0);
  const Vector x = Vector::Zero(1);
  EXPECT_GT(clf.predict_proba(x), 1.0 - 1e-15);
  EXPECT_LT(clf.predict_proba(x), 1.0);
  const SoftClassifier neg(Vector::Zero(1), -800.0);
  EXPECT_GT(neg.predict_proba(x), 0.0);
}

TEST(Predict, SigmoidSymmetryAndMonotonicity) {
  Vector w(1);
  w << 1.0;
  const SoftClassifier clf(w, 0.25);
  const SoftClassifier flipped(-w, -0.25);
  double last = 0.0;
  for (double v = -6.0; v <= 6.0; v += 0.5) {
    Vector x(1);
    x << v;
    EXPECT_NEAR(clf.predict_proba(x) + flipped.predict_proba(x), 1.0, 1e-15);
    EXPECT_GT(clf.predict_proba(x), last);
    last = clf.predict_proba(x);
  }
}

TEST(Predict, DimensionMismatch) {
  const SoftClassifier clf(Vector::Zero(2), 0.0);
  EXPECT_THROW(clf.predict_proba(Vector(Vector::Zero(3))), DimensionMismatchError);
  FeatureMatrix X(4, 3);
  EXPECT_THROW(clf.predict_proba(X), DimensionMismatchError);
}

TEST(Folds, StratifiedDisjointExhaustive) {
  std::vector<int> y(103, 0);
  for (int i = 0; i < 37; ++i) y[static_cast<std::size_t>(i * 2)] = 1;
  const LabelVector labels = Eigen::Map<LabelVector>(y.data(), 103);
  const auto folds = stratified_folds(labels, 10, 77);
  std::set<Index> seen;
  for (const auto& f : folds) {
    Index pos = 0;
    for (Index i : f) {
      EXPECT_TRUE(seen.insert(i).second);
      pos += labels[i];
    }
    EXPECT_GE(pos, 3);
    EXPECT_LE(pos, 4);
  }
  EXPECT_EQ(seen.size(), 103u);
  EXPECT_EQ(folds, stratified_folds(labels, 10, 77));
  EXPECT_THROW(stratified_folds(labels, 1, 1), ValidationError);
  EXPECT_THROW(stratified_folds(labels, 40, 1), StratificationError);
}

TEST(Rates, SeparableDataIsPerfect) {
  const BinaryDataset d = separable_2d(200, 9);
  const ClassRates r = estimate_rates_kfold(d.features, d.labels, 10, {100.0, ClassWeight::None},
                                            RateMode::Hard, 3);
  EXPECT_GE(r.tpr, 0.97);
  EXPECT_LE(r.fpr, 0.03);
}

TEST(Rates, ConstantPositiveClassifier) {
  const LabelVector y = (LabelVector(6) << 1, 0, 1, 0, 0, 1).finished();
  const Vector post = Vector::Constant(6, 0.9);
  const ClassRates hard = rates_from_posteriors(post, y, RateMode::Hard);
  EXPECT_EQ(hard.tpr, 1.0);
  EXPECT_EQ(hard.fpr, 1.0);
  const ClassRates soft = rates_from_posteriors(post, y, RateMode::Soft);
  EXPECT_DOUBLE_EQ(soft.tpr, 0.9);
}

TEST(Rates, SoftRatesStrictlyInsideUnitInterval) {
  for (std::uint64_t s = 1; s <= 4; ++s) {
    const auto specs = testutil::two_gaussians(0.3 * static_cast<double>(s), 0.4, 2);
    const BinaryDataset d = generate_mixture(specs, 200, s).binary();
    const ClassRates r = estimate_rates_kfold(d.features, d.labels, 10, {}, RateMode::Soft, s);
    EXPECT_GT(r.tpr, 0.0);
    EXPECT_LT(r.tpr, 1.0);
    EXPECT_GT(r.fpr, 0.0);
    EXPECT_LT(r.fpr, 1.0);
  }
}

TEST(Rates, SmallClassIsAnError) {
  const BinaryDataset d = testutil::labelled_line({1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_THROW(estimate_rates_kfold(d.features, d.labels, 10, {}, RateMode::Hard, 1),
               StratificationError);
}

TEST(Rates, OutOfFoldPosteriorsCoverEveryRow) {
  const auto specs = testutil::two_gaussians(1.0, 0.5, 2);
  const BinaryDataset d = generate_mixture(specs, 150, 4).binary();
  const Vector p = out_of_fold_posteriors(d.features, d.labels, 5, {}, 11);
  EXPECT_EQ(p.size(), 150);
  EXPECT_GT(p.minCoeff(), 0.0);
  EXPECT_LT(p.maxCoeff(), 1.0);
}
