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

#ifndef SHIFTBENCH_CLASSIFIER_HPP_
#define SHIFTBENCH_CLASSIFIER_HPP_

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "shiftbench/common.hpp"

namespace shiftbench {

template <std::floating_point Scalar>
Scalar sigmoid(Scalar z) {
  using std::exp;
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-z));
  const Scalar e = exp(z);
  return e / (Scalar(1) + e);
}

/// log(1 + exp(z)) without overflow.
template <std::floating_point Scalar>
Scalar softplus(Scalar z) {
  using std::exp;
  using std::log1p;
  return z > Scalar(0) ? z + log1p(exp(-z)) : log1p(exp(z));
}

/// Coefficient-wise sigmoid of a dense array expression.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> sigmoid(
    const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  return z.unaryExpr([](Scalar v) { return sigmoid(v); });
}

enum class ClassWeight { None, Balanced };

std::string_view to_string(ClassWeight weight);
ClassWeight parse_class_weight(std::string_view text);

struct LogisticParams {
  double C = 1.0;  // inverse regularisation strength
  ClassWeight class_weight = ClassWeight::None;

  friend bool operator==(const LogisticParams&, const LogisticParams&) = default;
};

std::string to_string(const LogisticParams& params);

/// ||w||^2 / (2C) + sum_i omega_i * logloss_i over parameters theta = [w; b].
/// The bias is not penalised. omega_i is 1, or n / (2 n_class(i)) under
/// ClassWeight::Balanced.
class LogisticObjective {
 public:
  LogisticObjective(const FeatureMatrix& X, const LabelVector& y, LogisticParams params);

  Index dim() const { return X_->cols() + 1; }
  double value(const Vector& theta) const;
  Vector gradient(const Vector& theta) const;
  Eigen::MatrixXd hessian(const Vector& theta) const;
  const Vector& sample_weights() const { return omega_; }

 private:
  Vector scores(const Vector& theta) const;

  const FeatureMatrix* X_;
  Vector y_;
  Vector omega_;
  LogisticParams params_;
};

struct TrainOptions {
  double gradient_tolerance = 1e-6;
  int max_iterations = 10000;
  // Newton steps are used up to this many parameters, L-BFGS beyond.
  Index newton_max_dim = 500;
};

struct TrainReport {
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

class SoftClassifier {
 public:
  SoftClassifier() = default;
  SoftClassifier(Vector weights, double bias, LogisticParams params = {});

  const Vector& weights() const { return weights_; }
  double bias() const { return bias_; }
  const LogisticParams& params() const { return params_; }
  Index dim() const { return weights_.size(); }

  Vector decision_function(const FeatureMatrix& X) const;
  /// Posteriors clamped into the open interval (0, 1).
  Vector predict_proba(const FeatureMatrix& X) const;
  /// 1 iff the posterior is >= 0.5.
  LabelVector predict_hard(const FeatureMatrix& X) const;

  double predict_proba(const Eigen::Ref<const Vector>& x) const;
  int predict_hard(const Eigen::Ref<const Vector>& x) const;

  static double clamp_posterior(double p);

 private:
  Vector weights_;
  double bias_ = 0.0;
  LogisticParams params_;
};

SoftClassifier train_logistic(const FeatureMatrix& X, const LabelVector& y,
                              LogisticParams params, const TrainOptions& options = {},
                              TrainReport* report = nullptr);

struct ClassRates {
  double tpr = 0.0;
  double fpr = 0.0;
};

enum class RateMode { Hard, Soft };

/// Stratified fold assignment: fold[f] lists the held-out rows of fold f,
/// sorted. Every class needs at least k members.
std::vector<std::vector<Index>> stratified_folds(const LabelVector& y, int k, std::uint64_t seed);

/// Posterior of every row as predicted by a model that did not see it.
Vector out_of_fold_posteriors(const FeatureMatrix& X, const LabelVector& y, int k,
                              LogisticParams params, std::uint64_t seed,
                              const TrainOptions& options = {});

/// Hard mode counts thresholded posteriors; soft mode averages them.
ClassRates rates_from_posteriors(const Vector& posteriors, const LabelVector& y, RateMode mode);

ClassRates estimate_rates_kfold(const FeatureMatrix& X, const LabelVector& y, int k,
                                LogisticParams params, RateMode mode, std::uint64_t seed,
                                const TrainOptions& options = {});

}  // namespace shiftbench

#endif  // SHIFTBENCH_CLASSIFIER_HPP_
