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

#include "shiftbench/datagen.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace shiftbench {

void validate_cluster_specs(std::span<const ClusterSpec> specs) {
  if (specs.empty()) throw ValidationError("a mixture needs at least one cluster");
  const Index dim = specs.front().mean.size();
  if (dim < 1) throw ValidationError("cluster mean must have at least one coordinate");
  double total = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ClusterSpec& c = specs[i];
    const std::string where = "cluster " + std::to_string(i) + ": ";
    if (c.mean.size() != dim || c.variance.size() != dim)
      throw ValidationError(where + "mean/variance dimensionality mismatch");
    if ((c.variance.array() <= 0.0).any() || !c.variance.allFinite())
      throw ValidationError(where + "variances must be strictly positive");
    if (!c.mean.allFinite()) throw ValidationError(where + "mean must be finite");
    if (c.label != 0 && c.label != 1) throw ValidationError(where + "label must be 0 or 1");
    if (c.stars != 0 && (c.stars < 1 || c.stars > 5))
      throw ValidationError(where + "stars must lie in 1..5");
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight))
      throw ValidationError(where + "weight must be non-negative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("cluster weights sum to " + std::to_string(total) + ", expected 1");
}

namespace {

Vector to_vector(const nlohmann::json& arr, const char* field) {
  if (!arr.is_array() || arr.empty())
    throw ValidationError(std::string("field '") + field + "' must be a non-empty array");
  Vector v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Index>(i)] = arr[i].get<double>();
  return v;
}

}  // namespace

std::vector<ClusterSpec> cluster_specs_from_json(const nlohmann::json& doc) {
  const nlohmann::json& list = doc.is_object() ? doc.at("clusters") : doc;
  if (!list.is_array()) throw ValidationError("cluster spec must be a JSON array");
  std::vector<ClusterSpec> specs;
  try {
    for (const auto& item : list) {
      ClusterSpec c;
      c.mean = to_vector(item.at("mean"), "mean");
      c.variance = to_vector(item.at("variance"), "variance");
      c.label = item.at("label").get<int>();
      c.stars = item.value("stars", 0);
      c.category = parse_category(item.value("category", std::string("A")));
      c.weight = item.at("weight").get<double>();
      specs.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed cluster spec: ") + e.what());
  }
  validate_cluster_specs(specs);
  return specs;
}

nlohmann::json cluster_specs_to_json(std::span<const ClusterSpec> specs) {
  nlohmann::json out = nlohmann::json::array();
  for (const ClusterSpec& c : specs) {
    nlohmann::json item;
    item["mean"] = std::vector<double>(c.mean.data(), c.mean.data() + c.mean.size());
    item["variance"] = std::vector<double>(c.variance.data(), c.variance.data() + c.variance.size());
    item["label"] = c.label;
    if (c.stars != 0) item["stars"] = c.stars;
    item["category"] = std::string(to_string(c.category));
    item["weight"] = c.weight;
    out.push_back(std::move(item));
  }
  return out;
}

BinaryDataset GeneratedData::binary() const {
  return BinaryDataset{stars.features, labels, stars.categories, {}};
}

GeneratedData generate_mixture(std::span<const ClusterSpec> specs, Index n, std::uint64_t seed) {
  validate_cluster_specs(specs);
  if (n < 1) throw ValidationError("mixture size must be at least 1");
  const Index dim = specs.front().mean.size();

  std::vector<double> weights;
  for (const ClusterSpec& c : specs) weights.push_back(c.weight);
  std::discrete_distribution<int> choose(weights.begin(), weights.end());
  std::normal_distribution<double> gauss(0.0, 1.0);
  Rng rng(seed);

  Eigen::MatrixXd dense(n, dim);
  GeneratedData out;
  out.labels.resize(n);
  out.stars.stars.resize(n);
  out.stars.categories.resize(static_cast<std::size_t>(n));
  out.cluster.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const int k = choose(rng);
    const ClusterSpec& c = specs[static_cast<std::size_t>(k)];
    for (Index j = 0; j < dim; ++j) dense(i, j) = c.mean[j] + std::sqrt(c.variance[j]) * gauss(rng);
    out.labels[i] = c.label;
    out.stars.stars[i] = c.effective_stars();
    out.stars.categories[static_cast<std::size_t>(i)] = c.category;
    out.cluster[static_cast<std::size_t>(i)] = k;
  }
  out.stars.features = dense.sparseView();
  out.stars.features.makeCompressed();
  return out;
}

}  // namespace shiftbench
