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

#ifndef SHIFTBENCH_EVALUATION_HPP_
#define SHIFTBENCH_EVALUATION_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftbench/common.hpp"

namespace shiftbench {

/// A signed shift degree rounded to a fixed number of decimals (0..2).
/// Stored as an integer count of hundredths so grouping is exact.
class ShiftDegree {
 public:
  ShiftDegree() = default;
  static ShiftDegree from_value(double value, int decimals);
  static ShiftDegree parse(std::string_view text);

  double value() const { return static_cast<double>(hundredths_) / 100.0; }
  std::int64_t hundredths() const { return hundredths_; }
  int decimals() const { return decimals_; }
  std::string str() const;

  friend bool operator==(const ShiftDegree& a, const ShiftDegree& b) {
    return a.hundredths_ == b.hundredths_;
  }
  friend std::strong_ordering operator<=>(const ShiftDegree& a, const ShiftDegree& b) {
    return a.hundredths_ <=> b.hundredths_;
  }

 private:
  std::int64_t hundredths_ = 0;
  int decimals_ = 1;
};

struct ExperimentRecord {
  std::string protocol;
  std::string method;
  int repetition = 0;
  std::string config;  // e.g. "pL=0.50;pU=0.30;sample=3"
  ShiftDegree degree;
  double true_prev = 0.0;
  double est_prev = 0.0;
  double ae = 0.0;
};

/// |p - p_hat|; both must lie in [0,1].
double absolute_error(double p, double p_hat);

/// protocol -> degree -> method -> MAE, pooling repetitions.
using MaeTable = std::map<std::string, std::map<ShiftDegree, std::map<std::string, double>>>;
MaeTable mae_by_degree(std::span<const ExperimentRecord> records);

struct WilcoxonResult {
  double p_value = 1.0;
  double w_plus = 0.0;  // sum of ranks of positive differences
  Index n = 0;          // pairs with non-zero difference
  bool exact = false;
};

/// Two-sided signed-rank test on a - b. Zero differences are dropped, tied
/// |d| share average ranks. Exact null distribution for n <= exact_max_n,
/// normal approximation with tie and continuity corrections above.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    Index exact_max_n = 25);

/// Exact two-sided p-value given doubled ranks (integers) and doubled W+.
double wilcoxon_exact_p(std::span<const std::int64_t> doubled_ranks, std::int64_t doubled_w_plus);

/// Normal-approximation p-value given ranks and W+.
double wilcoxon_normal_p(std::span<const double> ranks, double w_plus);

/// Average ranks (1-based) of the values.
std::vector<double> average_ranks(std::span<const double> values);

enum class Mark { Best, Dagger, DoubleDagger, None };

std::string_view to_string(Mark mark);
Mark parse_mark(std::string_view text);

/// Best is the lowest mean; others get DoubleDagger if p >= 0.05, Dagger if
/// 0.001 < p < 0.05, None otherwise. Vectors are paired by position.
std::map<std::string, Mark> mark_significance(const std::map<std::string, std::vector<double>>& ae);

struct BoxStats {
  Index count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::vector<double> outliers;  // beyond 1.5 IQR from the quartiles
};

/// Linear interpolation between order statistics at position q*(n-1).
double quantile(std::span<const double> sorted, double q);
BoxStats box_stats(std::vector<double> values);

}  // namespace shiftbench

#endif  // SHIFTBENCH_EVALUATION_HPP_
