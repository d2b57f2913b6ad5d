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

#ifndef SHIFTBENCH_TESTS_HELPERS_HPP_
#define SHIFTBENCH_TESTS_HELPERS_HPP_

#include <random>
#include <vector>

#include "shiftbench/core_data.hpp"
#include "shiftbench/datagen.hpp"

namespace testutil {

using namespace shiftbench;

inline FeatureMatrix sparse(const Eigen::MatrixXd& dense) {
  FeatureMatrix m = dense.sparseView();
  m.makeCompressed();
  return m;
}

inline BinaryDataset binary(const Eigen::MatrixXd& X, const std::vector<int>& y) {
  BinaryDataset d;
  d.features = sparse(X);
  d.labels = Eigen::Map<const LabelVector>(y.data(), static_cast<Index>(y.size()));
  d.categories.assign(y.size(), Category::A);
  return d;
}

// One-dimensional data whose feature equals the label index, for separable cases.
inline BinaryDataset labelled_line(const std::vector<int>& y) {
  Eigen::MatrixXd X(static_cast<Index>(y.size()), 1);
  for (std::size_t i = 0; i < y.size(); ++i) X(static_cast<Index>(i), 0) = y[i] ? 1.0 : -1.0;
  return binary(X, y);
}

inline StarDataset stars_dataset(const std::vector<int>& stars,
                                 const std::vector<Category>& cats = {}) {
  StarDataset d;
  const auto n = static_cast<Index>(stars.size());
  Eigen::MatrixXd X(n, 1);
  for (Index i = 0; i < n; ++i) X(i, 0) = static_cast<double>(i);
  d.features = sparse(X);
  d.stars = Eigen::Map<const LabelVector>(stars.data(), n);
  d.categories = cats.empty() ? std::vector<Category>(stars.size(), Category::A) : cats;
  return d;
}

// Two Gaussian classes on the real line (means -mu / +mu, unit variance).
inline std::vector<ClusterSpec> two_gaussians(double mu, double prevalence, int dim = 1) {
  std::vector<ClusterSpec> s(2);
  s[0].mean = Vector::Constant(dim, -mu);
  s[1].mean = Vector::Constant(dim, mu);
  s[0].variance = s[1].variance = Vector::Ones(dim);
  s[0].label = 0;
  s[1].label = 1;
  s[0].weight = 1.0 - prevalence;
  s[1].weight = prevalence;
  return s;
}

// The benchmark's synthetic two-category, five-star design.
inline std::vector<ClusterSpec> star_design() {
  std::vector<ClusterSpec> out;
  auto add = [&](Category c, double x1, double v1, double x2) {
    const double m1[5] = {-x1, -x1, 0.0, x1, x1};
    const double m2[5] = {x2 - 1, x2 + 1, x2, x2 - 1, x2 + 1};
    for (int s = 1; s <= 5; ++s) {
      ClusterSpec k;
      k.mean = Vector(2);
      k.mean << m1[s - 1], m2[s - 1];
      k.variance = Vector(2);
      k.variance << v1, 0.25;
      k.label = s >= 4 ? 1 : 0;
      k.stars = s;
      k.category = c;
      k.weight = 0.1;
      out.push_back(k);
    }
  };
  // 2 * mean / variance = 7 in both categories, so P(y=1 | x) = sigmoid(7 x1)
  add(Category::A, 2.0, 4.0 / 7.0, 0.0);
  add(Category::B, 0.875, 0.25, 4.0);
  return out;
}

}  // namespace testutil

#endif  // SHIFTBENCH_TESTS_HELPERS_HPP_
