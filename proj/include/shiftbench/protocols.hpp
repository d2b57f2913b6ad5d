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

#ifndef SHIFTBENCH_PROTOCOLS_HPP_
#define SHIFTBENCH_PROTOCOLS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "shiftbench/core_data.hpp"
#include "shiftbench/evaluation.hpp"
#include "shiftbench/grid_search.hpp"
#include "shiftbench/quantifiers.hpp"

namespace shiftbench {

enum class Protocol { Prior, GlobalCovariate, LocalCovariate, Concept };

std::string_view to_string(Protocol protocol);
Protocol parse_protocol(std::string_view name);

/// Protocol field used for the class-conditional-preserving control draws
/// emitted alongside the local covariate records.
inline constexpr std::string_view kLocalControlProtocol = "local-covariate-control";

struct ProtocolConfig {
  Protocol protocol = Protocol::Prior;
  Index train_size = 5000;
  Index test_size = 500;
  int repetitions = 10;
  int samples_per_config = 50;
  std::uint64_t seed = 0;

  // Share of every source pool that goes to the training side of the split.
  double split_fraction = 0.5;
  double cut_point = 3.0;

  std::vector<double> prior_train_prevalences{0.02, 0.1, 0.2, 0.3, 0.4, 0.5,
                                              0.6,  0.7, 0.8, 0.9, 0.98};
  std::vector<double> prior_test_prevalences{0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                             0.6, 0.7, 0.8, 0.9, 1.0};

  std::vector<double> covariate_prevalences{0.25, 0.50, 0.75};
  std::vector<double> covariate_alphas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

  std::vector<double> local_test_prevalences{0.25, 0.30, 0.35, 0.40, 0.45, 0.50,
                                             0.55, 0.60, 0.65, 0.70, 0.75};
  bool local_controls = true;

  std::vector<double> concept_cut_points{1.5, 2.5, 3.5, 4.5};
  bool concept_force_prevalence = false;
  double concept_train_prevalence = 0.5;
  double concept_test_prevalence = 0.75;

  std::vector<Method> methods{Method::CC, Method::ACC, Method::PCC,
                              Method::PACC, Method::DyS, Method::SLD};

  /// Throws ValidationError.
  void validate() const;
};

/// Reduced repetitions and samples for quick runs.
void apply_desk_preset(ProtocolConfig& config);

struct RecordCounts {
  Index per_method = 0;          // protocol records for one method
  Index controls_per_method = 0;  // extra control records (local covariate only)
  Index total = 0;               // over all methods, controls included
};

RecordCounts expected_record_count(const ProtocolConfig& config);

using RecordSink = std::function<void(const ExperimentRecord&)>;

/// Returns a constant 0.5 estimate without training; for dry runs.
class StubLearner final : public Learner {
 public:
  std::unique_ptr<Quantifier> learn(Method method, const BinaryDataset& train,
                                    std::uint64_t seed) const override;
};

struct RunOptions {
  int jobs = 1;
};

/// The four generators. `data` carries stars and categories; text corpora
/// are vectorised after the train/test split using the training side only.
void run_prior_shift(const ProtocolConfig& config, const StarDataset& data, const Learner& learner,
                     const RecordSink& sink, const RunOptions& options = {});
void run_global_covariate(const ProtocolConfig& config, const StarDataset& data,
                          const Learner& learner, const RecordSink& sink,
                          const RunOptions& options = {});
void run_local_covariate(const ProtocolConfig& config, const StarDataset& data,
                         const Learner& learner, const RecordSink& sink,
                         const RunOptions& options = {});
void run_concept_shift(const ProtocolConfig& config, const StarDataset& data,
                       const Learner& learner, const RecordSink& sink,
                       const RunOptions& options = {});

void run_protocol(const ProtocolConfig& config, const StarDataset& data, const Learner& learner,
                  const RecordSink& sink, const RunOptions& options = {});

/// Number of positives added from A in a local-covariate test sample:
/// solves p = (b_pos + POS) / (neg_a + b + POS) and rounds half up.
Index local_positive_count(double prevalence, double neg_a, double b_size, double b_pos);

/// Resamples to equal counts per star value (the smallest star count).
StarDataset balance_stars(const StarDataset& data, std::uint64_t seed);

}  // namespace shiftbench

#endif  // SHIFTBENCH_PROTOCOLS_HPP_
