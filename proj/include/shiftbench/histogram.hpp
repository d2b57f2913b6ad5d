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

#ifndef SHIFTBENCH_HISTOGRAM_HPP_
#define SHIFTBENCH_HISTOGRAM_HPP_

#include <algorithm>
#include <cmath>
#include <string_view>

#include <Eigen/Core>

#include "shiftbench/common.hpp"

namespace shiftbench {

/// Normalised histogram of posteriors over a uniform partition of [0,1].
/// Bin i covers [i/b, (i+1)/b); the last bin also holds 1.0.
template <typename Scalar>
class BasicPosteriorHistogram {
 public:
  using Masses = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicPosteriorHistogram() = default;

  explicit BasicPosteriorHistogram(Masses masses) : masses_(std::move(masses)) {
    if (masses_.size() < 2) throw ValidationError("a histogram needs at least 2 bins");
    if ((masses_.array() < Scalar(0)).any())
      throw ValidationError("histogram masses must be non-negative");
  }

  template <typename Derived>
  static BasicPosteriorHistogram from_posteriors(const Eigen::MatrixBase<Derived>& posteriors,
                                                 int bins) {
    if (bins < 2) throw ValidationError("a histogram needs at least 2 bins");
    if (posteriors.size() == 0) throw EmptyDatasetError("histogram of no posteriors");
    Masses counts = Masses::Zero(bins);
    for (Index i = 0; i < posteriors.size(); ++i) counts[bin_of(posteriors(i), bins)] += Scalar(1);
    counts /= static_cast<Scalar>(posteriors.size());
    return BasicPosteriorHistogram(std::move(counts));
  }

  static Index bin_of(Scalar p, int bins) {
    const auto b = static_cast<Index>(std::floor(p * static_cast<Scalar>(bins)));
    return std::clamp<Index>(b, 0, bins - 1);
  }

  /// alpha * positive + (1 - alpha) * negative.
  static BasicPosteriorHistogram mixture(Scalar alpha, const BasicPosteriorHistogram& positive,
                                         const BasicPosteriorHistogram& negative) {
    if (positive.bins() != negative.bins())
      throw DimensionMismatchError("mixture of histograms with different bin counts");
    return BasicPosteriorHistogram(alpha * positive.masses_ + (Scalar(1) - alpha) * negative.masses_);
  }

  Index bins() const { return masses_.size(); }
  const Masses& masses() const { return masses_; }

 private:
  Masses masses_;
};

using PosteriorHistogram = BasicPosteriorHistogram<double>;

namespace detail {

template <typename D1, typename D2>
void check_same_bins(const Eigen::MatrixBase<D1>& a, const Eigen::MatrixBase<D2>& b) {
  if (a.size() != b.size()) throw DimensionMismatchError("histograms have different bin counts");
}

}  // namespace detail

/// sum_i a_i ln(2a_i/(a_i+b_i)) + b_i ln(2b_i/(a_i+b_i)), with 0 ln(.) = 0.
template <typename D1, typename D2>
typename D1::Scalar topsoe_distance(const Eigen::MatrixBase<D1>& a, const Eigen::MatrixBase<D2>& b) {
  using Scalar = typename D1::Scalar;
  detail::check_same_bins(a, b);
  Scalar total(0);
  for (Index i = 0; i < a.size(); ++i) {
    const Scalar ai = a(i);
    const Scalar bi = b(i);
    const Scalar m = ai + bi;
    if (ai > Scalar(0)) total += ai * std::log(Scalar(2) * ai / m);
    if (bi > Scalar(0)) total += bi * std::log(Scalar(2) * bi / m);
  }
  return std::max(total, Scalar(0));
}

/// sqrt(sum_i (sqrt(a_i) - sqrt(b_i))^2) / sqrt(2), which lies in [0, 1].
template <typename D1, typename D2>
typename D1::Scalar hellinger_distance(const Eigen::MatrixBase<D1>& a,
                                       const Eigen::MatrixBase<D2>& b) {
  using Scalar = typename D1::Scalar;
  detail::check_same_bins(a, b);
  const Scalar sum = (a.array().sqrt() - b.array().sqrt()).square().sum();
  return std::sqrt(sum) / std::sqrt(Scalar(2));
}

template <typename Scalar>
Scalar topsoe_distance(const BasicPosteriorHistogram<Scalar>& a,
                       const BasicPosteriorHistogram<Scalar>& b) {
  return topsoe_distance(a.masses(), b.masses());
}

template <typename Scalar>
Scalar hellinger_distance(const BasicPosteriorHistogram<Scalar>& a,
                          const BasicPosteriorHistogram<Scalar>& b) {
  return hellinger_distance(a.masses(), b.masses());
}

enum class Distance { Topsoe, Hellinger };

std::string_view to_string(Distance distance);

template <typename Scalar>
Scalar histogram_distance(Distance distance, const BasicPosteriorHistogram<Scalar>& a,
                          const BasicPosteriorHistogram<Scalar>& b) {
  return distance == Distance::Topsoe ? topsoe_distance(a, b) : hellinger_distance(a, b);
}

}  // namespace shiftbench

#endif  // SHIFTBENCH_HISTOGRAM_HPP_
