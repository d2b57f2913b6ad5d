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

#ifndef SHIFTBENCH_DATAGEN_HPP_
#define SHIFTBENCH_DATAGEN_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "shiftbench/common.hpp"
#include "shiftbench/core_data.hpp"

namespace shiftbench {

/// One axis-aligned Gaussian component of a synthetic mixture.
struct ClusterSpec {
  Vector mean;
  Vector variance;  // diagonal of the covariance
  int label = 0;
  int stars = 0;  // 0 means "derive from label": 5 for positives, 1 for negatives
  Category category = Category::A;
  double weight = 1.0;

  int effective_stars() const { return stars != 0 ? stars : (label == 1 ? 5 : 1); }
};

/// Checks dimensions, positive variances, labels, star ranges and that the
/// weights sum to one within 1e-9. Throws ValidationError.
void validate_cluster_specs(std::span<const ClusterSpec> specs);

std::vector<ClusterSpec> cluster_specs_from_json(const nlohmann::json& doc);
nlohmann::json cluster_specs_to_json(std::span<const ClusterSpec> specs);

struct GeneratedData {
  StarDataset stars;
  LabelVector labels;
  std::vector<int> cluster;

  BinaryDataset binary() const;
};

/// Draws n points: a component is chosen with probability proportional to its
/// weight, then a diagonal Gaussian is sampled.
GeneratedData generate_mixture(std::span<const ClusterSpec> specs, Index n, std::uint64_t seed);

}  // namespace shiftbench

#endif  // SHIFTBENCH_DATAGEN_HPP_
