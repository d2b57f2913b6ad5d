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

#include "shiftbench/quantifiers.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <spdlog/spdlog.h>

namespace shiftbench {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 9> kMethodNames{{
    {Method::MLPE, "MLPE"},
    {Method::CC, "CC"},
    {Method::ACC, "ACC"},
    {Method::PCC, "PCC"},
    {Method::PACC, "PACC"},
    {Method::SMM, "SMM"},
    {Method::DyS, "DyS"},
    {Method::HDy, "HDy"},
    {Method::SLD, "SLD"},
}};

// Tag for the fold assignment shared by every method that needs OOF posteriors,
// so ACC/PACC/SMM/DyS fitted with one seed see the same folds.
constexpr std::uint64_t kFoldTag = 0x6b666f6c64ULL;

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames)
    if (m == method) return name;
  return "?";
}

Method parse_method(std::string_view name) {
  for (const auto& [m, known] : kMethodNames)
    if (known == name) return m;
  throw ValidationError("unknown quantification method '" + std::string(name) + "'");
}

bool uses_classifier(Method method) { return method != Method::MLPE; }

std::string_view to_string(Distance distance) {
  return distance == Distance::Topsoe ? "topsoe" : "hellinger";
}

double adjust_for_rates(double estimate, const ClassRates& rates) {
  const double denom = rates.tpr - rates.fpr;
  if (std::abs(denom) < kDegenerateDenominator) return clip01(estimate);
  return clip01((estimate - rates.fpr) / denom);
}

SldResult sld_em(const Vector& posteriors, double train_prevalence, const SldOptions& options) {
  if (posteriors.size() == 0) throw EmptyDatasetError("quantification of an empty sample");
  if (!(train_prevalence > 0.0 && train_prevalence < 1.0))
    throw ValidationError("SLD needs a training prevalence strictly inside (0,1)");
  const double pl = train_prevalence;
  SldResult r;
  r.prevalence = pl;
  const auto n = static_cast<double>(posteriors.size());
  for (int t = 0; t < options.max_iterations; ++t) {
    const double up = r.prevalence / pl;
    const double down = (1.0 - r.prevalence) / (1.0 - pl);
    double sum = 0.0;
    for (Index i = 0; i < posteriors.size(); ++i) {
      const double a = up * posteriors[i];
      const double b = down * (1.0 - posteriors[i]);
      sum += a / (a + b);
    }
    const double next = sum / n;
    r.iterations = t + 1;
    const double step = std::abs(next - r.prevalence);
    r.prevalence = next;
    if (step < options.tolerance) {
      r.converged = true;
      break;
    }
  }
  if (!r.converged)
    spdlog::warn("SLD hit the iteration cap ({}) at prevalence {:.6f}", options.max_iterations,
                 r.prevalence);
  r.prevalence = clip01(r.prevalence);
  return r;
}

MixtureSearchResult mixture_search(const PosteriorHistogram& positive,
                                   const PosteriorHistogram& negative,
                                   const PosteriorHistogram& test, Distance distance,
                                   const MixtureSearchOptions& options) {
  if (positive.bins() != test.bins() || negative.bins() != test.bins())
    throw DimensionMismatchError("histograms have different bin counts");
  const auto& hp = positive.masses();
  const auto& hn = negative.masses();
  const auto& ht = test.masses();
  Vector mix(ht.size());
  auto objective = [&](double alpha) {
    mix = alpha * hp + (1.0 - alpha) * hn;
    return distance == Distance::Topsoe ? topsoe_distance(mix, ht) : hellinger_distance(mix, ht);
  };

  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > options.interval_tolerance) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) <= objective(m2))
      hi = m2;
    else
      lo = m1;
  }
  MixtureSearchResult best{0.5 * (lo + hi), 0.0};
  best.objective = objective(best.alpha);

  // Grid guard for non-unimodal objectives.
  const auto steps = static_cast<long>(std::llround(1.0 / options.grid_step));
  MixtureSearchResult grid{0.0, objective(0.0)};
  for (long k = 1; k <= steps; ++k) {
    const double a = static_cast<double>(k) / static_cast<double>(steps);
    const double v = objective(a);
    if (v < grid.objective) grid = {a, v};
  }
  if (grid.objective < best.objective - 1e-12) best = grid;
  return best;
}

ClassMeans class_mean_posteriors(const Vector& posteriors, const LabelVector& y) {
  if (posteriors.size() != y.size()) throw DimensionMismatchError("posteriors and labels differ");
  double sp = 0.0;
  double sn = 0.0;
  Index np = 0;
  Index nn = 0;
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1) {
      sp += posteriors[i];
      ++np;
    } else {
      sn += posteriors[i];
      ++nn;
    }
  }
  if (np == 0 || nn == 0) throw ValidationError("class means need both classes");
  return {sp / static_cast<double>(np), sn / static_cast<double>(nn)};
}

// ---------------------------------------------------------------------------

MlpeQuantifier::MlpeQuantifier(double train_prevalence)
    : prevalence_(train_prevalence), fitted_(true) {
  if (!(train_prevalence >= 0.0 && train_prevalence <= 1.0))
    throw ValidationError("prevalence outside [0,1]");
}

void MlpeQuantifier::fit(const FeatureMatrix&, const LabelVector& y, std::uint64_t) {
  prevalence_ = prevalence_of(y);
  fitted_ = true;
}

double MlpeQuantifier::quantify(const FeatureMatrix& X) const {
  if (!fitted_) throw Error("MLPE used before fit");
  if (X.rows() == 0) throw EmptyDatasetError("quantification of an empty sample");
  return prevalence_;
}

void AggregativeQuantifier::fit(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) {
  if (X.rows() != y.size()) throw DimensionMismatchError("features and labels differ in length");
  classifier_ = train_logistic(X, y, config_.classifier, config_.train);
  fit_aggregates(X, y, seed);
  fitted_ = true;
}

double AggregativeQuantifier::quantify(const FeatureMatrix& X) const {
  if (!fitted_) throw Error(std::string(name()) + " used before fit");
  if (X.rows() == 0) throw EmptyDatasetError("quantification of an empty sample");
  return clip01(aggregate(classifier_.predict_proba(X)));
}

Vector AggregativeQuantifier::out_of_fold(const FeatureMatrix& X, const LabelVector& y,
                                          std::uint64_t seed) const {
  return out_of_fold_posteriors(X, y, config_.kfold, config_.classifier,
                                derive_seed(seed, {kFoldTag}), config_.train);
}

double CcQuantifier::aggregate(const Vector& posteriors) const {
  Index positives = 0;
  for (Index i = 0; i < posteriors.size(); ++i) positives += posteriors[i] >= 0.5 ? 1 : 0;
  return static_cast<double>(positives) / static_cast<double>(posteriors.size());
}

void AccQuantifier::fit_aggregates(const FeatureMatrix& X, const LabelVector& y,
                                   std::uint64_t seed) {
  rates_ = rates_from_posteriors(out_of_fold(X, y, seed), y, RateMode::Hard);
}

double AccQuantifier::aggregate(const Vector& posteriors) const {
  Index positives = 0;
  for (Index i = 0; i < posteriors.size(); ++i) positives += posteriors[i] >= 0.5 ? 1 : 0;
  const double cc = static_cast<double>(positives) / static_cast<double>(posteriors.size());
  return adjust_for_rates(cc, rates_);
}

double PccQuantifier::aggregate(const Vector& posteriors) const { return mean_of(posteriors); }

void PaccQuantifier::fit_aggregates(const FeatureMatrix& X, const LabelVector& y,
                                    std::uint64_t seed) {
  rates_ = rates_from_posteriors(out_of_fold(X, y, seed), y, RateMode::Soft);
}

double PaccQuantifier::aggregate(const Vector& posteriors) const {
  return adjust_for_rates(mean_of(posteriors), rates_);
}

void SmmQuantifier::fit_aggregates(const FeatureMatrix& X, const LabelVector& y,
                                   std::uint64_t seed) {
  const ClassMeans m = class_mean_posteriors(out_of_fold(X, y, seed), y);
  positive_mean_ = m.positive;
  negative_mean_ = m.negative;
}

double SmmQuantifier::aggregate(const Vector& posteriors) const {
  const double spread = positive_mean_ - negative_mean_;
  const double m = mean_of(posteriors);
  if (std::abs(spread) < kDegenerateDenominator) return clip01(m);
  return clip01((m - negative_mean_) / spread);
}

void DysQuantifier::fit_aggregates(const FeatureMatrix& X, const LabelVector& y,
                                   std::uint64_t seed) {
  const Vector oof = out_of_fold(X, y, seed);
  std::vector<double> pos;
  std::vector<double> neg;
  for (Index i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(oof[i]);
  positive_ = PosteriorHistogram::from_posteriors(
      Eigen::Map<const Vector>(pos.data(), static_cast<Index>(pos.size())), config().bins);
  negative_ = PosteriorHistogram::from_posteriors(
      Eigen::Map<const Vector>(neg.data(), static_cast<Index>(neg.size())), config().bins);
}

double DysQuantifier::aggregate(const Vector& posteriors) const {
  const auto test =
      PosteriorHistogram::from_posteriors(posteriors, static_cast<int>(positive_.bins()));
  return mixture_search(positive_, negative_, test, distance_).alpha;
}

SldQuantifier::SldQuantifier(QuantifierConfig config, SoftClassifier classifier,
                             double train_prevalence)
    : AggregativeQuantifier(std::move(config), std::move(classifier)),
      train_prevalence_(train_prevalence) {
  if (!(train_prevalence > 0.0 && train_prevalence < 1.0))
    throw ValidationError("SLD needs a training prevalence strictly inside (0,1)");
}

void SldQuantifier::fit_aggregates(const FeatureMatrix&, const LabelVector& y, std::uint64_t) {
  train_prevalence_ = prevalence_of(y);
  if (!(train_prevalence_ > 0.0 && train_prevalence_ < 1.0))
    throw ValidationError("SLD needs a training prevalence strictly inside (0,1)");
}

double SldQuantifier::aggregate(const Vector& posteriors) const {
  return sld_em(posteriors, train_prevalence_, config().sld).prevalence;
}

std::unique_ptr<Quantifier> make_quantifier(Method method, const QuantifierConfig& config) {
  switch (method) {
    case Method::MLPE: return std::make_unique<MlpeQuantifier>();
    case Method::CC: return std::make_unique<CcQuantifier>(config);
    case Method::ACC: return std::make_unique<AccQuantifier>(config);
    case Method::PCC: return std::make_unique<PccQuantifier>(config);
    case Method::PACC: return std::make_unique<PaccQuantifier>(config);
    case Method::SMM: return std::make_unique<SmmQuantifier>(config);
    case Method::DyS: return std::make_unique<DysQuantifier>(config, Distance::Topsoe);
    case Method::HDy: return std::make_unique<DysQuantifier>(config, Distance::Hellinger);
    case Method::SLD: return std::make_unique<SldQuantifier>(config);
  }
  throw ValidationError("unknown quantification method");
}

std::unique_ptr<Quantifier> make_quantifier(std::string_view method,
                                            const QuantifierConfig& config) {
  return make_quantifier(parse_method(method), config);
}

}  // namespace shiftbench
