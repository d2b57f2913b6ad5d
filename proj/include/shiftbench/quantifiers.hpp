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

#ifndef SHIFTBENCH_QUANTIFIERS_HPP_
#define SHIFTBENCH_QUANTIFIERS_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "shiftbench/classifier.hpp"
#include "shiftbench/common.hpp"
#include "shiftbench/core_data.hpp"
#include "shiftbench/histogram.hpp"

namespace shiftbench {

enum class Method { MLPE, CC, ACC, PCC, PACC, SMM, DyS, HDy, SLD };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
bool uses_classifier(Method method);

// ---------------------------------------------------------------------------
// Aggregation rules as free functions over posteriors / crisp predictions.

/// Arithmetic mean with left-to-right summation.
template <typename Derived>
double mean_of(const Eigen::MatrixBase<Derived>& values) {
  if (values.size() == 0) throw EmptyDatasetError("quantification of an empty sample");
  double sum = 0.0;
  for (Index i = 0; i < values.size(); ++i) sum += static_cast<double>(values(i));
  return sum / static_cast<double>(values.size());
}

/// Below this |tpr - fpr| the adjustment is skipped.
inline constexpr double kDegenerateDenominator = 1e-9;

/// (estimate - fpr) / (tpr - fpr) clipped to [0,1]; falls back to the clipped
/// unadjusted estimate when |tpr - fpr| < kDegenerateDenominator.
double adjust_for_rates(double estimate, const ClassRates& rates);

struct SldOptions {
  double tolerance = 1e-6;
  int max_iterations = 1000;
};

struct SldResult {
  double prevalence = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// EM rescaling of posteriors towards a new prior, starting from the
/// training prevalence.
SldResult sld_em(const Vector& posteriors, double train_prevalence, const SldOptions& options = {});

struct MixtureSearchOptions {
  double interval_tolerance = 1e-8;
  double grid_step = 1e-4;
};

struct MixtureSearchResult {
  double alpha = 0.0;
  double objective = 0.0;
};

/// argmin over alpha in [0,1] of distance(alpha*H+ + (1-alpha)*H-, H_test):
/// ternary search, checked against a uniform grid (the grid point wins only
/// if strictly better).
MixtureSearchResult mixture_search(const PosteriorHistogram& positive,
                                   const PosteriorHistogram& negative,
                                   const PosteriorHistogram& test, Distance distance,
                                   const MixtureSearchOptions& options = {});

// ---------------------------------------------------------------------------
// Quantifier objects.

struct QuantifierConfig {
  LogisticParams classifier;
  int kfold = 10;
  int bins = 10;
  TrainOptions train;
  SldOptions sld;
};

class Quantifier {
 public:
  virtual ~Quantifier() = default;

  virtual Method method() const = 0;
  std::string_view name() const { return to_string(method()); }

  void fit(const BinaryDataset& train, std::uint64_t seed) { fit(train.features, train.labels, seed); }
  virtual void fit(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) = 0;

  /// Estimated positive prevalence of the sample, in [0,1].
  virtual double quantify(const FeatureMatrix& X) const = 0;
  double quantify(const Sample& sample) const { return quantify(sample.features); }
};

class MlpeQuantifier final : public Quantifier {
 public:
  MlpeQuantifier() = default;
  explicit MlpeQuantifier(double train_prevalence);

  Method method() const override { return Method::MLPE; }
  void fit(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) override;
  using Quantifier::fit;
  double quantify(const FeatureMatrix& X) const override;
  using Quantifier::quantify;
  double train_prevalence() const { return prevalence_; }

 private:
  double prevalence_ = 0.0;
  bool fitted_ = false;
};

/// Base for methods built on a logistic classifier.
class AggregativeQuantifier : public Quantifier {
 public:
  explicit AggregativeQuantifier(QuantifierConfig config) : config_(std::move(config)) {}
  AggregativeQuantifier(QuantifierConfig config, SoftClassifier classifier)
      : config_(std::move(config)), classifier_(std::move(classifier)), fitted_(true) {}

  void fit(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) final;
  using Quantifier::fit;
  double quantify(const FeatureMatrix& X) const final;
  using Quantifier::quantify;

  const SoftClassifier& classifier() const { return classifier_; }
  const QuantifierConfig& config() const { return config_; }

 protected:
  /// Called after the classifier has been trained on (X, y).
  virtual void fit_aggregates(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) = 0;
  virtual double aggregate(const Vector& posteriors) const = 0;

  Vector out_of_fold(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) const;

 private:
  QuantifierConfig config_;
  SoftClassifier classifier_;
  bool fitted_ = false;
};

class CcQuantifier final : public AggregativeQuantifier {
 public:
  using AggregativeQuantifier::AggregativeQuantifier;
  Method method() const override { return Method::CC; }

 protected:
  void fit_aggregates(const FeatureMatrix&, const LabelVector&, std::uint64_t) override {}
  double aggregate(const Vector& posteriors) const override;
};

class AccQuantifier final : public AggregativeQuantifier {
 public:
  explicit AccQuantifier(QuantifierConfig config) : AggregativeQuantifier(std::move(config)) {}
  AccQuantifier(QuantifierConfig config, SoftClassifier classifier, ClassRates rates)
      : AggregativeQuantifier(std::move(config), std::move(classifier)), rates_(rates) {}
  Method method() const override { return Method::ACC; }
  const ClassRates& rates() const { return rates_; }

 protected:
  void fit_aggregates(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) override;
  double aggregate(const Vector& posteriors) const override;

 private:
  ClassRates rates_;
};

class PccQuantifier final : public AggregativeQuantifier {
 public:
  using AggregativeQuantifier::AggregativeQuantifier;
  Method method() const override { return Method::PCC; }

 protected:
  void fit_aggregates(const FeatureMatrix&, const LabelVector&, std::uint64_t) override {}
  double aggregate(const Vector& posteriors) const override;
};

class PaccQuantifier final : public AggregativeQuantifier {
 public:
  explicit PaccQuantifier(QuantifierConfig config) : AggregativeQuantifier(std::move(config)) {}
  PaccQuantifier(QuantifierConfig config, SoftClassifier classifier, ClassRates soft_rates)
      : AggregativeQuantifier(std::move(config), std::move(classifier)), rates_(soft_rates) {}
  Method method() const override { return Method::PACC; }
  const ClassRates& rates() const { return rates_; }

 protected:
  void fit_aggregates(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) override;
  double aggregate(const Vector& posteriors) const override;

 private:
  ClassRates rates_;
};

/// Sample mean matching: solves alpha*m+ + (1-alpha)*m- = mean test posterior,
/// where m+/m- are the class-wise means of out-of-fold training posteriors.
class SmmQuantifier final : public AggregativeQuantifier {
 public:
  explicit SmmQuantifier(QuantifierConfig config) : AggregativeQuantifier(std::move(config)) {}
  SmmQuantifier(QuantifierConfig config, SoftClassifier classifier, double positive_mean,
                double negative_mean)
      : AggregativeQuantifier(std::move(config), std::move(classifier)),
        positive_mean_(positive_mean),
        negative_mean_(negative_mean) {}
  Method method() const override { return Method::SMM; }
  double positive_mean() const { return positive_mean_; }
  double negative_mean() const { return negative_mean_; }

 protected:
  void fit_aggregates(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) override;
  double aggregate(const Vector& posteriors) const override;

 private:
  double positive_mean_ = 0.0;
  double negative_mean_ = 0.0;
};

/// Histogram mixture matching. With Distance::Hellinger this is HDy.
class DysQuantifier final : public AggregativeQuantifier {
 public:
  DysQuantifier(QuantifierConfig config, Distance distance)
      : AggregativeQuantifier(std::move(config)), distance_(distance) {}
  DysQuantifier(QuantifierConfig config, SoftClassifier classifier, PosteriorHistogram positive,
                PosteriorHistogram negative, Distance distance)
      : AggregativeQuantifier(std::move(config), std::move(classifier)),
        positive_(std::move(positive)),
        negative_(std::move(negative)),
        distance_(distance) {}
  Method method() const override { return distance_ == Distance::Hellinger ? Method::HDy : Method::DyS; }
  Distance distance() const { return distance_; }
  const PosteriorHistogram& positive_histogram() const { return positive_; }
  const PosteriorHistogram& negative_histogram() const { return negative_; }

 protected:
  void fit_aggregates(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) override;
  double aggregate(const Vector& posteriors) const override;

 private:
  PosteriorHistogram positive_;
  PosteriorHistogram negative_;
  Distance distance_;
};

class SldQuantifier final : public AggregativeQuantifier {
 public:
  explicit SldQuantifier(QuantifierConfig config) : AggregativeQuantifier(std::move(config)) {}
  SldQuantifier(QuantifierConfig config, SoftClassifier classifier, double train_prevalence);
  Method method() const override { return Method::SLD; }
  double train_prevalence() const { return train_prevalence_; }

 protected:
  void fit_aggregates(const FeatureMatrix& X, const LabelVector& y, std::uint64_t seed) override;
  double aggregate(const Vector& posteriors) const override;

 private:
  double train_prevalence_ = 0.0;
};

std::unique_ptr<Quantifier> make_quantifier(Method method, const QuantifierConfig& config = {});
std::unique_ptr<Quantifier> make_quantifier(std::string_view method,
                                            const QuantifierConfig& config = {});

/// Mean out-of-fold posterior over training positives and negatives.
struct ClassMeans {
  double positive = 0.0;
  double negative = 0.0;
};
ClassMeans class_mean_posteriors(const Vector& posteriors, const LabelVector& y);

}  // namespace shiftbench

#endif  // SHIFTBENCH_QUANTIFIERS_HPP_
