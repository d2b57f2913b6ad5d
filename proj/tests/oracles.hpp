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

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical code paths.

#ifndef SHIFTBENCH_TESTS_ORACLES_HPP_
#define SHIFTBENCH_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

// Two-sided Wilcoxon p-value by enumerating all 2^n sign assignments of the
// non-zero differences a-b, with average ranks for ties.
inline double wilcoxon_enumerated(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  const std::size_t n = d.size();
  if (n == 0) return 1.0;
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++less;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    ranks[i] = less + (equal + 1.0) / 2.0;
  }
  double observed = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) observed += ranks[i];
  std::uint64_t lower = 0, upper = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) w += ranks[i];
    if (w <= observed + 1e-9) ++lower;
    if (w >= observed - 1e-9) ++upper;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(lower, upper)) / static_cast<double>(total));
}

// Scalar EM iteration for SLD, written from the update rule directly.
inline double sld_fixed_point(const std::vector<double>& s, double pl, double tol = 1e-6, int cap = 1000) {
  double p = pl;
  for (int t = 0; t < cap; ++t) {
    double acc = 0;
    for (double si : s) {
      const double num = (p / pl) * si;
      acc += num / (num + ((1 - p) / (1 - pl)) * (1 - si));
    }
    const double next = acc / static_cast<double>(s.size());
    const bool done = std::abs(next - p) < tol;
    p = next;
    if (done) break;
  }
  return p;
}

// Dense grid argmin of a function over [0,1].
inline double grid_argmin(const std::function<double(double)>& f, int steps = 100000) {
  double best = 0, best_v = f(0);
  for (int k = 1; k <= steps; ++k) {
    const double a = static_cast<double>(k) / steps;
    const double v = f(a);
    if (v < best_v) {
      best_v = v;
      best = a;
    }
  }
  return best;
}

inline std::vector<double> histogram(const std::vector<double>& posteriors, int bins) {
  std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
  for (double p : posteriors) {
    int b = static_cast<int>(std::floor(p * bins));
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    h[static_cast<std::size_t>(b)] += 1.0 / static_cast<double>(posteriors.size());
  }
  return h;
}

// HDy as a Bhattacharyya-coefficient maximisation with golden-section search.
inline double hdy(const std::vector<double>& pos, const std::vector<double>& neg,
                  const std::vector<double>& test) {
  auto f = [&](double a) {
    double bc = 0;
    for (std::size_t i = 0; i < test.size(); ++i) bc += std::sqrt((a * pos[i] + (1 - a) * neg[i]) * test[i]);
    return std::sqrt(std::max(0.0, 1 - bc));
  };
  const double g = (std::sqrt(5.0) - 1) / 2;
  double lo = 0, hi = 1;
  while (hi - lo > 1e-11) {
    const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (f(x1) <= f(x2))
      hi = x2;
    else
      lo = x1;
  }
  double best = (lo + hi) / 2;
  if (f(0) < f(best)) best = 0;
  if (f(1) < f(best)) best = 1;
  return best;
}

// Clamped closed-form adjustment.
inline double adjusted(double est, double tpr, double fpr) {
  if (std::abs(tpr - fpr) < 1e-9) return std::clamp(est, 0.0, 1.0);
  return std::clamp((est - fpr) / (tpr - fpr), 0.0, 1.0);
}

// Standard normal CDF.
inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace oracle

#endif  // SHIFTBENCH_TESTS_ORACLES_HPP_
