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

#ifndef SHIFTBENCH_COMMON_HPP_
#define SHIFTBENCH_COMMON_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace shiftbench {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using LabelVector = Eigen::VectorXi;

// Rows are datapoints. Sparse storage keeps tf-idf documents cheap; dense
// synthetic features are stored the same way.
using FeatureMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;

enum class Category : std::uint8_t { A, B };

std::string_view to_string(Category category);
Category parse_category(std::string_view text);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input values or malformed configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

class StratificationError : public Error {
 public:
  using Error::Error;
};

// A pool ran out of members of one class while drawing a sample.
class ExhaustionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace shiftbench

#endif  // SHIFTBENCH_COMMON_HPP_
