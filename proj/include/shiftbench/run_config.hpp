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

#ifndef SHIFTBENCH_RUN_CONFIG_HPP_
#define SHIFTBENCH_RUN_CONFIG_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftbench/grid_search.hpp"
#include "shiftbench/protocols.hpp"

namespace shiftbench {

/// Everything `run` needs besides the protocol name. Missing JSON fields keep
/// the full-scale defaults.
struct RunConfig {
  ProtocolConfig protocol;
  std::string dataset;  // path to a line-delimited dataset
  bool grid_search = true;
  QuantifierConfig quantifier;  // classifier params used when grid_search is off
  std::vector<LogisticParams> grid = default_grid();
  GridSearchOptions grid_options;
};

/// Parses a config document. Unknown keys are rejected.
RunConfig run_config_from_json(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

/// Canonical JSON of the effective configuration (used for the manifest hash).
nlohmann::ordered_json run_config_to_json(const RunConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Seed precedence: explicit flag, then SHIFTBENCH_SEED, then the config.
std::uint64_t resolve_seed(std::uint64_t config_seed, std::optional<std::uint64_t> flag,
                           const char* env_value);

/// Comma-separated method names.
std::vector<Method> parse_method_list(std::string_view text);

std::unique_ptr<Learner> make_learner(const RunConfig& config);

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::string> methods;
  std::string protocol;
  std::string started;
  std::string finished;
  Index record_count = 0;
  Index expected_record_count = 0;
  std::string dataset;
  std::string records_path;
  std::string manifest_path;
};

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);

/// Current UTC time as ISO-8601.
std::string utc_timestamp();

}  // namespace shiftbench

#endif  // SHIFTBENCH_RUN_CONFIG_HPP_
