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

#include "shiftbench/classifier.hpp"

#include <algorithm>
#include <deque>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "shiftbench/core_data.hpp"
#include "shiftbench/random.hpp"

namespace shiftbench {

std::string_view to_string(ClassWeight weight) {
  return weight == ClassWeight::Balanced ? "balanced" : "none";
}

ClassWeight parse_class_weight(std::string_view text) {
  if (text == "balanced" || text == "Balanced") return ClassWeight::Balanced;
  if (text == "none" || text == "None" || text == "null") return ClassWeight::None;
  throw ValidationError("unknown class_weight '" + std::string(text) + "'");
}

std::string to_string(const LogisticParams& params) {
  return fmt::format("C={},class_weight={}", params.C, to_string(params.class_weight));
}

LogisticObjective::LogisticObjective(const FeatureMatrix& X, const LabelVector& y,
                                     LogisticParams params)
    : X_(&X), y_(y.cast<double>()), params_(params) {
  if (X.rows() != y.size()) throw DimensionMismatchError("feature rows and labels differ");
  if (!(params.C > 0.0)) throw ValidationError("regularisation C must be positive");
  const Index n = y.size();
  const Index npos = y.sum();
  if (npos == 0 || npos == n) throw ValidationError("training data must contain both classes");
  omega_ = Vector::Ones(n);
  if (params.class_weight == ClassWeight::Balanced) {
    const double wpos = static_cast<double>(n) / (2.0 * static_cast<double>(npos));
    const double wneg = static_cast<double>(n) / (2.0 * static_cast<double>(n - npos));
    for (Index i = 0; i < n; ++i) omega_[i] = y[i] == 1 ? wpos : wneg;
  }
}

Vector LogisticObjective::scores(const Vector& theta) const {
  const Index d = X_->cols();
  Vector z = (*X_) * theta.head(d);
  z.array() += theta[d];
  return z;
}

double LogisticObjective::value(const Vector& theta) const {
  const Index d = X_->cols();
  const Vector z = scores(theta);
  double loss = 0.0;
  for (Index i = 0; i < z.size(); ++i)
    loss += omega_[i] * softplus(y_[i] > 0.5 ? -z[i] : z[i]);
  return theta.head(d).squaredNorm() / (2.0 * params_.C) + loss;
}

Vector LogisticObjective::gradient(const Vector& theta) const {
  const Index d = X_->cols();
  const Vector z = scores(theta);
  Vector r(z.size());
  for (Index i = 0; i < z.size(); ++i) r[i] = omega_[i] * (sigmoid(z[i]) - y_[i]);
  Vector g(d + 1);
  g.head(d) = X_->transpose() * r + theta.head(d) / params_.C;
  g[d] = r.sum();
  return g;
}

Eigen::MatrixXd LogisticObjective::hessian(const Vector& theta) const {
  const Index d = X_->cols();
  const Vector z = scores(theta);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d + 1, d + 1);
  for (Index i = 0; i < X_->rows(); ++i) {
    const double p = sigmoid(z[i]);
    const double c = omega_[i] * p * (1.0 - p);
    for (FeatureMatrix::InnerIterator a(*X_, i); a; ++a) {
      for (FeatureMatrix::InnerIterator b(*X_, i); b; ++b)
        H(a.col(), b.col()) += c * a.value() * b.value();
      H(a.col(), d) += c * a.value();
    }
    H(d, d) += c;
  }
  H.block(d, 0, 1, d) = H.block(0, d, d, 1).transpose();
  H.diagonal().head(d).array() += 1.0 / params_.C;
  return H;
}

SoftClassifier::SoftClassifier(Vector weights, double bias, LogisticParams params)
    : weights_(std::move(weights)), bias_(bias), params_(params) {}

Vector SoftClassifier::decision_function(const FeatureMatrix& X) const {
  if (X.cols() != weights_.size())
    throw DimensionMismatchError(fmt::format("classifier expects {} features, got {}",
                                             weights_.size(), X.cols()));
  Vector z = X * weights_;
  z.array() += bias_;
  return z;
}

double SoftClassifier::clamp_posterior(double p) {
  constexpr double lo = std::numeric_limits<double>::min();
  constexpr double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  return std::clamp(p, lo, hi);
}

Vector SoftClassifier::predict_proba(const FeatureMatrix& X) const {
  return decision_function(X).unaryExpr([](double z) { return clamp_posterior(sigmoid(z)); });
}

LabelVector SoftClassifier::predict_hard(const FeatureMatrix& X) const {
  return predict_proba(X).unaryExpr([](double p) { return p >= 0.5 ? 1 : 0; });
}

double SoftClassifier::predict_proba(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != weights_.size())
    throw DimensionMismatchError(fmt::format("classifier expects {} features, got {}",
                                             weights_.size(), x.size()));
  return clamp_posterior(sigmoid(weights_.dot(x) + bias_));
}

int SoftClassifier::predict_hard(const Eigen::Ref<const Vector>& x) const {
  return predict_proba(x) >= 0.5 ? 1 : 0;
}

namespace {

// Armijo backtracking along `direction`; returns the accepted step or 0.
double backtrack(const LogisticObjective& f, const Vector& theta, double value,
                 const Vector& grad, const Vector& direction, double step, Vector& next,
                 double& next_value) {
  const double slope = grad.dot(direction);
  // Rounding slack so steps taken at the optimum are not rejected as ascents.
  const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
  for (int i = 0; i < 60; ++i) {
    next = theta + step * direction;
    next_value = f.value(next);
    if (next_value <= value + 1e-4 * step * slope + slack) return step;
    step *= 0.5;
  }
  return 0.0;
}

void train_newton(const LogisticObjective& f, Vector& theta, const TrainOptions& options,
                  TrainReport& report) {
  double value = f.value(theta);
  Vector g = f.gradient(theta);
  Vector next;
  double next_value = 0.0;
  int stalled = 0;
  for (report.iterations = 0; report.iterations < options.max_iterations; ++report.iterations) {
    report.gradient_norm = g.norm();
    if (report.gradient_norm <= options.gradient_tolerance) {
      report.converged = true;
      return;
    }
    Eigen::MatrixXd H = f.hessian(theta);
    H.diagonal().array() += 1e-12;
    Vector direction = H.ldlt().solve(-g);
    if (!direction.allFinite() || g.dot(direction) >= 0.0) direction = -g;
    if (backtrack(f, theta, value, g, direction, 1.0, next, next_value) == 0.0) break;
    theta = next;
    value = next_value;
    g = f.gradient(theta);
    // Stop when rounding noise keeps the gradient from shrinking any further.
    stalled = g.norm() >= report.gradient_norm ? stalled + 1 : 0;
    if (stalled >= 5) break;
  }
  report.gradient_norm = g.norm();
  report.converged = report.gradient_norm <= options.gradient_tolerance;
}

void train_lbfgs(const LogisticObjective& f, Vector& theta, const TrainOptions& options,
                 TrainReport& report) {
  constexpr std::size_t kMemory = 10;
  std::deque<Vector> s_hist;
  std::deque<Vector> y_hist;
  double value = f.value(theta);
  Vector g = f.gradient(theta);
  Vector next;
  double next_value = 0.0;
  for (report.iterations = 0; report.iterations < options.max_iterations; ++report.iterations) {
    report.gradient_norm = g.norm();
    if (report.gradient_norm <= options.gradient_tolerance) {
      report.converged = true;
      return;
    }
    Vector q = g;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = s_hist[i].dot(q) / y_hist[i].dot(s_hist[i]);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = y_hist[i].dot(q) / y_hist[i].dot(s_hist[i]);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Vector direction = -q;
    double step = 1.0;
    if (g.dot(direction) >= 0.0 || s_hist.empty()) {
      direction = -g;
      step = 1.0 / std::max(1.0, g.norm());
      s_hist.clear();
      y_hist.clear();
    }
    if (backtrack(f, theta, value, g, direction, step, next, next_value) == 0.0) break;
    Vector g_next = f.gradient(next);
    Vector s = next - theta;
    Vector y = g_next - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      if (s_hist.size() > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    theta = next;
    value = next_value;
    g = std::move(g_next);
  }
  report.gradient_norm = g.norm();
  report.converged = report.gradient_norm <= options.gradient_tolerance;
}

}  // namespace

SoftClassifier train_logistic(const FeatureMatrix& X, const LabelVector& y,
                              LogisticParams params, const TrainOptions& options,
                              TrainReport* report) {
  const LogisticObjective f(X, y, params);
  Vector theta = Vector::Zero(f.dim());
  TrainReport local;
  if (f.dim() <= options.newton_max_dim)
    train_newton(f, theta, options, local);
  else
    train_lbfgs(f, theta, options, local);
  if (report != nullptr) *report = local;
  const Index d = X.cols();
  return SoftClassifier(theta.head(d), theta[d], params);
}

std::vector<std::vector<Index>> stratified_folds(const LabelVector& y, int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("k-fold needs k >= 2");
  std::vector<Index> pos;
  std::vector<Index> neg;
  for (Index i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
  if (static_cast<Index>(pos.size()) < k || static_cast<Index>(neg.size()) < k)
    throw StratificationError(fmt::format(
        "{}-fold estimation needs {} members per class; have {} positives, {} negatives", k, k,
        pos.size(), neg.size()));
  Rng rng(seed);
  std::vector<std::vector<Index>> folds(static_cast<std::size_t>(k));
  for (auto* members : {&pos, &neg}) {
    const std::vector<Index> order =
        draw_without_replacement(*members, static_cast<Index>(members->size()), rng);
    for (std::size_t i = 0; i < order.size(); ++i)
      folds[i % static_cast<std::size_t>(k)].push_back(order[i]);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

Vector out_of_fold_posteriors(const FeatureMatrix& X, const LabelVector& y, int k,
                              LogisticParams params, std::uint64_t seed,
                              const TrainOptions& options) {
  const auto folds = stratified_folds(y, k, seed);
  Vector posteriors = Vector::Constant(y.size(), -1.0);
  std::vector<char> held(static_cast<std::size_t>(y.size()));
  for (const auto& fold : folds) {
    std::fill(held.begin(), held.end(), 0);
    for (Index i : fold) held[static_cast<std::size_t>(i)] = 1;
    std::vector<Index> train_rows;
    train_rows.reserve(static_cast<std::size_t>(y.size()) - fold.size());
    for (Index i = 0; i < y.size(); ++i)
      if (!held[static_cast<std::size_t>(i)]) train_rows.push_back(i);
    const FeatureMatrix Xtr = gather_rows(X, train_rows);
    LabelVector ytr(static_cast<Index>(train_rows.size()));
    for (std::size_t i = 0; i < train_rows.size(); ++i) ytr[static_cast<Index>(i)] = y[train_rows[i]];
    const SoftClassifier clf = train_logistic(Xtr, ytr, params, options);
    const Vector p = clf.predict_proba(gather_rows(X, fold));
    for (std::size_t i = 0; i < fold.size(); ++i) posteriors[fold[i]] = p[static_cast<Index>(i)];
  }
  return posteriors;
}

ClassRates rates_from_posteriors(const Vector& posteriors, const LabelVector& y, RateMode mode) {
  if (posteriors.size() != y.size()) throw DimensionMismatchError("posteriors and labels differ");
  double pos_sum = 0.0;
  double neg_sum = 0.0;
  Index npos = 0;
  Index nneg = 0;
  for (Index i = 0; i < y.size(); ++i) {
    const double v = mode == RateMode::Hard ? (posteriors[i] >= 0.5 ? 1.0 : 0.0) : posteriors[i];
    if (y[i] == 1) {
      pos_sum += v;
      ++npos;
    } else {
      neg_sum += v;
      ++nneg;
    }
  }
  if (npos == 0 || nneg == 0) throw ValidationError("class rates need both classes");
  return ClassRates{pos_sum / static_cast<double>(npos), neg_sum / static_cast<double>(nneg)};
}

ClassRates estimate_rates_kfold(const FeatureMatrix& X, const LabelVector& y, int k,
                                LogisticParams params, RateMode mode, std::uint64_t seed,
                                const TrainOptions& options) {
  return rates_from_posteriors(out_of_fold_posteriors(X, y, k, params, seed, options), y, mode);
}

}  // namespace shiftbench
