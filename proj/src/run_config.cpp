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

#include "shiftbench/run_config.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>

#include <fmt/format.h>

namespace shiftbench {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!known.contains(key)) throw ValidationError("unknown key '" + key + "' in " + where);
}

template <typename T>
void read_if(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

LogisticParams params_from_json(const json& j) {
  reject_unknown(j, {"C", "class_weight"}, "a grid point");
  LogisticParams p;
  read_if(j, "C", p.C);
  if (j.contains("class_weight")) p.class_weight = parse_class_weight(j.at("class_weight").get<std::string>());
  if (!(p.C > 0.0)) throw ValidationError("C must be positive");
  return p;
}

}  // namespace

RunConfig run_config_from_json(const json& doc) {
  RunConfig c;
  ProtocolConfig& p = c.protocol;
  try {
    reject_unknown(doc,
                   {"dataset", "seed", "train_size", "test_size", "repetitions",
                    "samples_per_config", "split_fraction", "cut_point", "methods", "prior",
                    "global_covariate", "local_covariate", "concept", "model_selection"},
                   "the run config");
    read_if(doc, "dataset", c.dataset);
    read_if(doc, "seed", p.seed);
    read_if(doc, "train_size", p.train_size);
    read_if(doc, "test_size", p.test_size);
    read_if(doc, "repetitions", p.repetitions);
    read_if(doc, "samples_per_config", p.samples_per_config);
    read_if(doc, "split_fraction", p.split_fraction);
    read_if(doc, "cut_point", p.cut_point);
    if (doc.contains("methods")) {
      p.methods.clear();
      for (const auto& m : doc.at("methods")) p.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (doc.contains("prior")) {
      const json& j = doc.at("prior");
      reject_unknown(j, {"train_prevalences", "test_prevalences"}, "prior");
      read_if(j, "train_prevalences", p.prior_train_prevalences);
      read_if(j, "test_prevalences", p.prior_test_prevalences);
    }
    if (doc.contains("global_covariate")) {
      const json& j = doc.at("global_covariate");
      reject_unknown(j, {"prevalences", "alphas"}, "global_covariate");
      read_if(j, "prevalences", p.covariate_prevalences);
      read_if(j, "alphas", p.covariate_alphas);
    }
    if (doc.contains("local_covariate")) {
      const json& j = doc.at("local_covariate");
      reject_unknown(j, {"test_prevalences", "controls"}, "local_covariate");
      read_if(j, "test_prevalences", p.local_test_prevalences);
      read_if(j, "controls", p.local_controls);
    }
    if (doc.contains("concept")) {
      const json& j = doc.at("concept");
      reject_unknown(j, {"cut_points", "force_prevalence", "train_prevalence", "test_prevalence"},
                     "concept");
      read_if(j, "cut_points", p.concept_cut_points);
      read_if(j, "force_prevalence", p.concept_force_prevalence);
      read_if(j, "train_prevalence", p.concept_train_prevalence);
      read_if(j, "test_prevalence", p.concept_test_prevalence);
    }
    if (doc.contains("model_selection")) {
      const json& j = doc.at("model_selection");
      reject_unknown(j,
                     {"grid_search", "C", "class_weight", "grid", "validation_fraction",
                      "validation_samples", "validation_size", "kfold", "bins"},
                     "model_selection");
      read_if(j, "grid_search", c.grid_search);
      read_if(j, "C", c.quantifier.classifier.C);
      if (j.contains("class_weight"))
        c.quantifier.classifier.class_weight = parse_class_weight(j.at("class_weight").get<std::string>());
      if (j.contains("grid")) {
        c.grid.clear();
        for (const auto& g : j.at("grid")) c.grid.push_back(params_from_json(g));
        if (c.grid.empty()) throw ValidationError("model_selection.grid is empty");
      }
      read_if(j, "validation_fraction", c.grid_options.validation_fraction);
      read_if(j, "validation_samples", c.grid_options.samples_per_prevalence);
      read_if(j, "validation_size", c.grid_options.sample_size);
      read_if(j, "kfold", c.quantifier.kfold);
      read_if(j, "bins", c.quantifier.bins);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("run config: ") + e.what());
  }
  if (!(c.quantifier.classifier.C > 0.0)) throw ValidationError("C must be positive");
  if (c.quantifier.kfold < 2) throw ValidationError("kfold must be >= 2");
  if (c.quantifier.bins < 2) throw ValidationError("bins must be >= 2");
  if (!(c.grid_options.validation_fraction > 0.0 && c.grid_options.validation_fraction < 1.0))
    throw ValidationError("validation_fraction must lie strictly inside (0,1)");
  if (c.grid_options.samples_per_prevalence < 1 || c.grid_options.sample_size < 1)
    throw ValidationError("validation_samples and validation_size must be >= 1");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("config '" + path + "': " + e.what());
  }
  return run_config_from_json(doc);
}

nlohmann::ordered_json run_config_to_json(const RunConfig& c) {
  const ProtocolConfig& p = c.protocol;
  nlohmann::ordered_json j;
  j["protocol"] = std::string(to_string(p.protocol));
  j["dataset"] = c.dataset;
  j["seed"] = p.seed;
  j["train_size"] = p.train_size;
  j["test_size"] = p.test_size;
  j["repetitions"] = p.repetitions;
  j["samples_per_config"] = p.samples_per_config;
  j["split_fraction"] = p.split_fraction;
  j["cut_point"] = p.cut_point;
  std::vector<std::string> methods;
  for (Method m : p.methods) methods.emplace_back(to_string(m));
  j["methods"] = methods;
  j["prior"] = {{"train_prevalences", p.prior_train_prevalences},
                {"test_prevalences", p.prior_test_prevalences}};
  j["global_covariate"] = {{"prevalences", p.covariate_prevalences}, {"alphas", p.covariate_alphas}};
  j["local_covariate"] = {{"test_prevalences", p.local_test_prevalences},
                          {"controls", p.local_controls}};
  j["concept"] = {{"cut_points", p.concept_cut_points},
                  {"force_prevalence", p.concept_force_prevalence},
                  {"train_prevalence", p.concept_train_prevalence},
                  {"test_prevalence", p.concept_test_prevalence}};
  nlohmann::ordered_json grid = nlohmann::ordered_json::array();
  for (const auto& g : c.grid)
    grid.push_back({{"C", g.C}, {"class_weight", std::string(to_string(g.class_weight))}});
  j["model_selection"] = {
      {"grid_search", c.grid_search},
      {"C", c.quantifier.classifier.C},
      {"class_weight", std::string(to_string(c.quantifier.classifier.class_weight))},
      {"grid", grid},
      {"validation_fraction", c.grid_options.validation_fraction},
      {"validation_samples", c.grid_options.samples_per_prevalence},
      {"validation_size", c.grid_options.sample_size},
      {"kfold", c.quantifier.kfold},
      {"bins", c.quantifier.bins}};
  return j;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t resolve_seed(std::uint64_t config_seed, std::optional<std::uint64_t> flag,
                           const char* env_value) {
  if (flag) return *flag;
  if (env_value != nullptr && *env_value != '\0') {
    const std::string_view s(env_value);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ValidationError("SHIFTBENCH_SEED must be a non-negative integer, got '" + std::string(s) + "'");
    return v;
  }
  return config_seed;
}

std::vector<Method> parse_method_list(std::string_view text) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(parse_method(item));
    start = comma + 1;
  }
  if (out.empty()) throw ValidationError("empty method list");
  return out;
}

std::unique_ptr<Learner> make_learner(const RunConfig& config) {
  if (config.grid_search)
    return std::make_unique<GridSearchLearner>(config.quantifier, config.grid, config.grid_options);
  return std::make_unique<FixedLearner>(config.quantifier);
}

nlohmann::ordered_json manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["methods"] = m.methods;
  j["protocol"] = m.protocol;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["record_count"] = m.record_count;
  j["expected_record_count"] = m.expected_record_count;
  j["artifacts"] = {{"dataset", m.dataset}, {"records", m.records_path}, {"manifest", m.manifest_path}};
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace shiftbench
