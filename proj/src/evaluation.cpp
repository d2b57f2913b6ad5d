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

#include "shiftbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace shiftbench {

namespace {

constexpr std::int64_t kPow10[] = {1, 10, 100};

}  // namespace

ShiftDegree ShiftDegree::from_value(double value, int decimals) {
  if (decimals < 0 || decimals > 2) throw ValidationError("degree decimals must be 0..2");
  if (!std::isfinite(value)) throw ValidationError("non-finite shift degree");
  ShiftDegree d;
  d.decimals_ = decimals;
  d.hundredths_ = std::llround(value * static_cast<double>(kPow10[decimals])) * kPow10[2 - decimals];
  return d;
}

ShiftDegree ShiftDegree::parse(std::string_view text) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ValidationError("bad shift degree '" + s + "'");
  const auto dot = s.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
  return from_value(v, std::min(decimals, 2));
}

std::string ShiftDegree::str() const {
  const std::int64_t units = hundredths_ / kPow10[2 - decimals_];
  const std::int64_t mag = units < 0 ? -units : units;
  const char* sign = units < 0 ? "-" : "";
  if (decimals_ == 0) return fmt::format("{}{}", sign, mag);
  return fmt::format("{}{}.{:0{}}", sign, mag / kPow10[decimals_], mag % kPow10[decimals_], decimals_);
}

double absolute_error(double p, double p_hat) {
  if (!(p >= 0.0 && p <= 1.0) || !(p_hat >= 0.0 && p_hat <= 1.0))
    throw ValidationError(fmt::format("prevalences outside [0,1]: {} vs {}", p, p_hat));
  return std::abs(p - p_hat);
}

MaeTable mae_by_degree(std::span<const ExperimentRecord> records) {
  struct Acc {
    double sum = 0.0;
    Index n = 0;
  };
  std::map<std::string, std::map<ShiftDegree, std::map<std::string, Acc>>> acc;
  for (const auto& r : records) {
    Acc& a = acc[r.protocol][r.degree][r.method];
    a.sum += r.ae;
    ++a.n;
  }
  MaeTable out;
  for (const auto& [protocol, rows] : acc)
    for (const auto& [degree, methods] : rows)
      for (const auto& [method, a] : methods)
        out[protocol][degree][method] = a.sum / static_cast<double>(a.n);
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double wilcoxon_exact_p(std::span<const std::int64_t> doubled_ranks, std::int64_t doubled_w_plus) {
  const std::int64_t total = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), std::int64_t{0});
  // counts[s]: number of sign assignments whose positive ranks sum (doubled) to s.
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  std::int64_t reach = 0;
  for (std::int64_t r : doubled_ranks) {
    for (std::int64_t s = reach; s >= 0; --s)
      if (counts[static_cast<std::size_t>(s)] != 0.0)
        counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
    reach += r;
  }
  const double all = std::ldexp(1.0, static_cast<int>(doubled_ranks.size()));
  double lower = 0.0;
  double upper = 0.0;
  for (std::int64_t s = 0; s <= total; ++s) {
    if (s <= doubled_w_plus) lower += counts[static_cast<std::size_t>(s)];
    if (s >= doubled_w_plus) upper += counts[static_cast<std::size_t>(s)];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / all);
}

double wilcoxon_normal_p(std::span<const double> ranks, double w_plus) {
  const auto n = static_cast<double>(ranks.size());
  const double mean = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  // Tie correction: sum over tie groups of (t^3 - t) / 48.
  std::vector<double> sorted(ranks.begin(), ranks.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    var -= (t * t * t - t) / 48.0;
    i = j;
  }
  if (var <= 0.0) return 1.0;
  const double dev = std::max(0.0, std::abs(w_plus - mean) - 0.5);
  const double p = std::erfc(dev / std::sqrt(var) / std::sqrt(2.0));
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    Index exact_max_n) {
  if (a.size() != b.size()) throw DimensionMismatchError("paired vectors differ in length");
  std::vector<double> mag;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (!std::isfinite(d)) throw ValidationError("non-finite paired difference");
    if (d == 0.0) continue;
    mag.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  WilcoxonResult r;
  r.n = static_cast<Index>(mag.size());
  if (r.n == 0) return r;
  const std::vector<double> ranks = average_ranks(mag);
  for (std::size_t i = 0; i < ranks.size(); ++i)
    if (positive[i]) r.w_plus += ranks[i];
  if (r.n <= exact_max_n) {
    std::vector<std::int64_t> doubled(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) doubled[i] = std::llround(2.0 * ranks[i]);
    r.exact = true;
    r.p_value = wilcoxon_exact_p(doubled, std::llround(2.0 * r.w_plus));
  } else {
    r.p_value = wilcoxon_normal_p(ranks, r.w_plus);
  }
  return r;
}

std::string_view to_string(Mark mark) {
  switch (mark) {
    case Mark::Best: return "best";
    case Mark::Dagger: return "dagger";
    case Mark::DoubleDagger: return "ddagger";
    case Mark::None: return "none";
  }
  return "none";
}

Mark parse_mark(std::string_view text) {
  for (Mark m : {Mark::Best, Mark::Dagger, Mark::DoubleDagger, Mark::None})
    if (to_string(m) == text) return m;
  throw ValidationError("unknown mark '" + std::string(text) + "'");
}

std::map<std::string, Mark> mark_significance(const std::map<std::string, std::vector<double>>& ae) {
  if (ae.size() < 2) throw ValidationError("significance marking needs at least two methods");
  const std::size_t n = ae.begin()->second.size();
  std::string best;
  double best_mean = std::numeric_limits<double>::infinity();
  for (const auto& [method, v] : ae) {
    if (v.size() != n) throw DimensionMismatchError("methods have misaligned error vectors");
    if (v.empty()) throw EmptyDatasetError("empty error vector");
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (mean < best_mean) {  // map order gives the lexicographic tie-break
      best_mean = mean;
      best = method;
    }
  }
  std::map<std::string, Mark> marks;
  const auto& ref = ae.at(best);
  for (const auto& [method, v] : ae) {
    if (method == best) {
      marks[method] = Mark::Best;
      continue;
    }
    const double p = wilcoxon_signed_rank(ref, v).p_value;
    marks[method] = p >= 0.05 ? Mark::DoubleDagger : (p > 0.001 ? Mark::Dagger : Mark::None);
  }
  return marks;
}

double quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EmptyDatasetError("quantile of no values");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw EmptyDatasetError("box statistics of no values");
  std::sort(values.begin(), values.end());
  BoxStats b;
  b.count = static_cast<Index>(values.size());
  b.min = values.front();
  b.max = values.back();
  b.q1 = quantile(values, 0.25);
  b.median = quantile(values, 0.5);
  b.q3 = quantile(values, 0.75);
  const double iqr = b.q3 - b.q1;
  for (double v : values)
    if (v < b.q1 - 1.5 * iqr || v > b.q3 + 1.5 * iqr) b.outliers.push_back(v);
  return b;
}

}  // namespace shiftbench
