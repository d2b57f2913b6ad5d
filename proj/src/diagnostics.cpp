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

#include "shiftbench/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shiftbench/classifier.hpp"
#include "shiftbench/core_data.hpp"
#include "shiftbench/datagen.hpp"
#include "shiftbench/quantifiers.hpp"

namespace shiftbench {

namespace {

// Two random axis-aligned Gaussians in d dimensions, one per class.
std::vector<ClusterSpec> random_problem(Rng& rng, int d) {
  std::normal_distribution<double> shift(0.0, 1.5);
  std::uniform_real_distribution<double> var(0.5, 2.0);
  std::uniform_real_distribution<double> w(0.25, 0.75);
  std::vector<ClusterSpec> specs(2);
  const double wp = w(rng);
  for (int c = 0; c < 2; ++c) {
    specs[c].mean = Vector(d);
    specs[c].variance = Vector(d);
    for (int k = 0; k < d; ++k) {
      specs[c].mean[k] = shift(rng);
      specs[c].variance[k] = var(rng);
    }
    specs[c].label = c;
  }
  specs[1].weight = wp;
  specs[0].weight = 1.0 - wp;
  return specs;
}

// Hellinger mixture search written independently of the library code path:
// explicit binning, sqrt(1 - sum sqrt(a b)) and golden-section search.
double hdy_reference(const Eigen::VectorXd& pos, const Eigen::VectorXd& neg,
                     const Vector& test_posteriors, int bins) {
  std::vector<double> t(static_cast<std::size_t>(bins), 0.0);
  for (Index i = 0; i < test_posteriors.size(); ++i) {
    int b = static_cast<int>(test_posteriors[i] * bins);
    b = std::min(std::max(b, 0), bins - 1);
    t[static_cast<std::size_t>(b)] += 1.0;
  }
  for (double& v : t) v /= static_cast<double>(test_posteriors.size());
  auto hd = [&](double a) {
    double bc = 0.0;
    for (int i = 0; i < bins; ++i) bc += std::sqrt((a * pos[i] + (1.0 - a) * neg[i]) * t[static_cast<std::size_t>(i)]);
    return std::sqrt(std::max(0.0, 1.0 - bc));
  };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = hd(x1), f2 = hd(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = hd(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = hd(x2);
    }
  }
  double best = 0.5 * (lo + hi);
  for (double edge : {0.0, 1.0})
    if (hd(edge) < hd(best)) best = edge;
  return best;
}

}  // namespace

CheckResult check_smm_pacc(const SelftestOptions& options) {
  CheckResult r{"smm-equals-pacc", true, 0.0, 1e-9, 0};
  Rng rng(derive_seed(options.seed, {1}));
  std::uniform_int_distribution<int> n_train(150, 400);
  std::uniform_int_distribution<int> n_test(20, 300);
  QuantifierConfig config;
  for (int problem = 0; problem < 40; ++problem) {
    const int d = 1 + problem % 4;
    const auto specs = random_problem(rng, d);
    const BinaryDataset train = generate_mixture(specs, n_train(rng), rng()).binary();
    config.classifier = {std::pow(10.0, static_cast<double>(problem % 5) - 1.0),
                         problem % 2 ? ClassWeight::Balanced : ClassWeight::None};
    const std::uint64_t fit_seed = rng();
    PaccQuantifier pacc(config);
    SmmQuantifier smm(config);
    pacc.fit(train, fit_seed);
    smm.fit(train, fit_seed);
    ClassRates rates = pacc.rates();
    if (options.corrupt_pacc_rates) rates.tpr = std::min(1.0, rates.tpr + 0.05);
    const PaccQuantifier used(config, pacc.classifier(), rates);
    for (int s = 0; s < 5; ++s) {
      const BinaryDataset sample = generate_mixture(specs, n_test(rng), rng()).binary();
      const double diff = std::abs(smm.quantify(sample.features) - used.quantify(sample.features));
      r.worst = std::max(r.worst, diff);
      ++r.instances;
    }
  }
  r.passed = r.worst <= r.tolerance;
  return r;
}

CheckResult check_dys_hdy(const SelftestOptions& options) {
  CheckResult r{"dys-hellinger-equals-hdy", true, 0.0, 1e-6, 0};
  Rng rng(derive_seed(options.seed, {2}));
  std::uniform_int_distribution<int> n_test(30, 400);
  QuantifierConfig config;
  for (int problem = 0; problem < 20; ++problem) {
    const auto specs = random_problem(rng, 2);
    const BinaryDataset train = generate_mixture(specs, 300, rng()).binary();
    DysQuantifier dys(config, Distance::Hellinger);
    dys.fit(train, rng());
    for (int s = 0; s < 5; ++s) {
      const BinaryDataset sample = generate_mixture(specs, n_test(rng), rng()).binary();
      const double got = dys.quantify(sample.features);
      const double want = hdy_reference(dys.positive_histogram().masses(), dys.negative_histogram().masses(),
                                        dys.classifier().predict_proba(sample.features), config.bins);
      r.worst = std::max(r.worst, std::abs(got - want));
      ++r.instances;
    }
  }
  r.passed = r.worst <= r.tolerance;
  return r;
}

CheckResult check_gradient(const SelftestOptions& options) {
  CheckResult r{"logistic-gradient", true, 0.0, 1e-4, 0};
  Rng rng(derive_seed(options.seed, {3}));
  std::normal_distribution<double> z(0.0, 1.0);
  for (int point = 0; point < 10; ++point) {
    const int d = 2 + point % 4;
    const auto specs = random_problem(rng, d);
    const BinaryDataset data = generate_mixture(specs, 80, rng()).binary();
    if (data.positive_count() == 0 || data.positive_count() == data.size()) continue;
    const LogisticParams params{std::pow(10.0, static_cast<double>(point % 4) - 1.0),
                                point % 2 ? ClassWeight::Balanced : ClassWeight::None};
    const LogisticObjective f(data.features, data.labels, params);
    Vector theta(f.dim());
    for (Index i = 0; i < theta.size(); ++i) theta[i] = z(rng);
    const Vector g = f.gradient(theta);
    Vector fd(theta.size());
    for (Index i = 0; i < theta.size(); ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(theta[i]));
      Vector up = theta, down = theta;
      up[i] += h;
      down[i] -= h;
      fd[i] = (f.value(up) - f.value(down)) / (2.0 * h);
    }
    const double rel = (g - fd).norm() / std::max(g.norm(), 1e-12);
    r.worst = std::max(r.worst, rel);
    ++r.instances;
  }
  r.passed = r.instances == 10 && r.worst <= r.tolerance;
  return r;
}

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
  return {check_smm_pacc(options), check_dys_hdy(options), check_gradient(options)};
}

}  // namespace shiftbench
