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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "shiftbench/text.hpp"

using namespace shiftbench;

namespace {

RawReview review(std::size_t length, int votes) {
  return RawReview{std::string(length, 'a'), 4, Category::A, votes};
}

}  // namespace

TEST(FilterReviews, LengthAndVotes) {
  EXPECT_TRUE(filter_reviews({review(150, 3)}).empty());
  EXPECT_TRUE(filter_reviews({review(250, 0)}).empty());
  EXPECT_EQ(filter_reviews({review(250, 1)}).size(), 1u);
  EXPECT_EQ(filter_reviews({review(200, 1)}).size(), 1u);
  EXPECT_TRUE(filter_reviews({review(199, 1)}).empty());
  EXPECT_TRUE(filter_reviews({}).empty());
}

TEST(Tokenize, LowercaseAndSplitOnNonAlphanumeric) {
  EXPECT_EQ(tokenize("Great product!! 10/10, would-buy"),
            (std::vector<std::string>{"great", "product", "10", "10", "would", "buy"}));
  EXPECT_TRUE(tokenize("  ,,, ").empty());
}

TEST(Vocabulary, MinCountFiltersRareTerms) {
  const std::vector<std::string> corpus{"a a a", "b"};
  const Vocabulary v = fit_vocabulary(corpus, 3);
  EXPECT_EQ(v.terms(), (std::vector<std::string>{"a"}));
  EXPECT_EQ(v.index_of("b"), -1);
  EXPECT_THROW(fit_vocabulary(corpus, 4), EmptyDatasetError);
  EXPECT_THROW(fit_vocabulary(std::vector<std::string>{}, 1), EmptyDatasetError);
}

TEST(Vocabulary, IdfHandComputation) {
  // "x" in all 4 documents, "y" in one document (3 times)
  const std::vector<std::string> corpus{"x y y y", "x", "x", "x"};
  const Vocabulary v = fit_vocabulary(corpus, 3);
  ASSERT_EQ(v.size(), 2);
  EXPECT_DOUBLE_EQ(v.idf(v.index_of("x")), 1.0);  // ln(5/5) + 1
  EXPECT_DOUBLE_EQ(v.idf(v.index_of("y")), std::log(5.0 / 2.0) + 1.0);
}

TEST(Vocabulary, RefitIsIdentical) {
  const std::vector<std::string> corpus{"the cat sat", "the dog sat", "the cat ran", "a dog"};
  const Vocabulary a = fit_vocabulary(corpus, 2);
  const Vocabulary b = fit_vocabulary(corpus, 2);
  EXPECT_EQ(a.terms(), b.terms());
  EXPECT_EQ(a.document_frequency(), b.document_frequency());
  EXPECT_EQ(a.terms(), (std::vector<std::string>{"cat", "dog", "sat", "the"}));
}

TEST(Vectorise, OutOfVocabularyDocumentIsZero) {
  const std::vector<std::string> corpus{"good good good"};
  const Vocabulary v = fit_vocabulary(corpus, 1);
  const FeatureMatrix X = vectorise(std::vector<std::string>{"bad awful"}, v);
  EXPECT_EQ(X.rows(), 1);
  EXPECT_EQ(X.nonZeros(), 0);
}

TEST(Vectorise, IdenticalDocumentsIdenticalRows) {
  const std::vector<std::string> corpus{"red green blue", "red red", "green"};
  const Vocabulary v = fit_vocabulary(corpus, 1);
  const FeatureMatrix X = vectorise(std::vector<std::string>{"red blue red", "red blue red"}, v);
  EXPECT_EQ(Eigen::MatrixXd(X).row(0), Eigen::MatrixXd(X).row(1));
}

TEST(Vectorise, SingleTermIsUnitOneHot) {
  const std::vector<std::string> corpus{"alpha beta", "alpha", "gamma"};
  const Vocabulary v = fit_vocabulary(corpus, 1);
  const Eigen::MatrixXd X(vectorise(std::vector<std::string>{"beta beta beta"}, v));
  EXPECT_DOUBLE_EQ(X(0, v.index_of("beta")), 1.0);
  EXPECT_DOUBLE_EQ(X.row(0).sum(), 1.0);
}

TEST(Vectorise, HandComputedTwoTermDocument) {
  const std::vector<std::string> corpus{"p q", "p", "p"};
  const Vocabulary v = fit_vocabulary(corpus, 1);
  const Eigen::MatrixXd X(vectorise(std::vector<std::string>{"p q q"}, v));
  const double wp = 1.0 * 1.0;                                   // idf(p) = ln(4/4) + 1
  const double wq = 2.0 * (std::log(4.0 / 2.0) + 1.0);          // tf 2
  const double norm = std::sqrt(wp * wp + wq * wq);
  EXPECT_NEAR(X(0, v.index_of("p")), wp / norm, 1e-15);
  EXPECT_NEAR(X(0, v.index_of("q")), wq / norm, 1e-15);
}

TEST(Vectorise, NonZeroRowsHaveUnitNorm) {
  std::vector<std::string> corpus;
  for (int i = 0; i < 40; ++i)
    corpus.push_back("w" + std::to_string(i % 7) + " w" + std::to_string(i % 3) + " common w" +
                     std::to_string(i % 11));
  const Vocabulary v = fit_vocabulary(corpus, 2);
  const Eigen::MatrixXd X(vectorise(corpus, v));
  for (Index r = 0; r < X.rows(); ++r) {
    const double n = X.row(r).norm();
    if (n > 0) EXPECT_NEAR(n, 1.0, 1e-9);
  }
}

TEST(Vectorise, TestTextsNeverChangeVocabulary) {
  const std::vector<std::string> train{"one two two", "two three", "one"};
  const Vocabulary v = fit_vocabulary(train, 1);
  const auto terms = v.terms();
  const auto df = v.document_frequency();
  const FeatureMatrix before = vectorise(train, v);
  const FeatureMatrix test = vectorise(std::vector<std::string>{"four four one", "five"}, v);
  EXPECT_EQ(v.terms(), terms);
  EXPECT_EQ(v.document_frequency(), df);
  EXPECT_EQ(test.cols(), v.size());
  EXPECT_EQ(Eigen::MatrixXd(vectorise(train, v)), Eigen::MatrixXd(before));
}
