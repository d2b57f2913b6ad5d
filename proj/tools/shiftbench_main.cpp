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

// Command-line front end: gen-data, run, report, selftest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "shiftbench/dataset_io.hpp"
#include "shiftbench/datagen.hpp"
#include "shiftbench/diagnostics.hpp"
#include "shiftbench/protocols.hpp"
#include "shiftbench/records_io.hpp"
#include "shiftbench/report.hpp"
#include "shiftbench/run_config.hpp"

namespace fs = std::filesystem;
using namespace shiftbench;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitExhausted = 3;

struct GenDataArgs {
  std::string spec;
  std::string out;
  std::uint64_t seed = 0;
  Index n = 0;
};

int cmd_gen_data(const GenDataArgs& a) {
  std::ifstream in(a.spec);
  if (!in) throw ValidationError("cannot open spec '" + a.spec + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("spec '" + a.spec + "': " + e.what());
  }
  Index n = a.n;
  if (n == 0 && doc.is_object() && doc.contains("n")) n = doc.at("n").get<Index>();
  if (n < 1) throw ValidationError("number of datapoints not given (use --n or an \"n\" field)");
  const auto specs = cluster_specs_from_json(doc);
  const GeneratedData data = generate_mixture(specs, n, a.seed);

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + a.out + "'");
  write_dataset_jsonl(out, data);
  out.close();

  std::map<int, Index> per_star;
  std::map<std::string, std::pair<Index, Index>> per_category;  // (size, positives)
  for (Index i = 0; i < data.stars.size(); ++i) {
    ++per_star[data.stars.stars[i]];
    auto& c = per_category[std::string(to_string(data.stars.categories[static_cast<std::size_t>(i)]))];
    ++c.first;
    c.second += data.labels[i];
  }
  fmt::print("wrote {} datapoints ({} features) to {}\n", n, data.stars.dim(), a.out);
  fmt::print("prevalence {:.4f}\n", static_cast<double>(data.labels.sum()) / static_cast<double>(n));
  for (const auto& [cat, c] : per_category)
    fmt::print("category {}: {} datapoints, prevalence {:.4f}\n", cat, c.first,
               static_cast<double>(c.second) / static_cast<double>(c.first));
  for (const auto& [star, count] : per_star) fmt::print("stars {}: {}\n", star, count);
  return 0;
}

struct RunArgs {
  std::string protocol;
  std::string config;
  std::string data;
  std::string out = "results";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool desk = false;
  bool dry_run = false;
  std::string methods;
};

int cmd_run(const RunArgs& a) {
  const Protocol protocol = parse_protocol(a.protocol);
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_run_config(a.config);
  cfg.protocol.protocol = protocol;
  if (a.desk) apply_desk_preset(cfg.protocol);
  if (!a.methods.empty()) cfg.protocol.methods = parse_method_list(a.methods);
  cfg.protocol.seed = resolve_seed(cfg.protocol.seed, a.seed, std::getenv("SHIFTBENCH_SEED"));
  if (!a.data.empty()) cfg.dataset = a.data;
  if (cfg.dataset.empty()) throw ValidationError("no dataset given (use --data or \"dataset\" in the config)");
  if (a.jobs < 1) throw ValidationError("--jobs must be >= 1");
  cfg.protocol.validate();

  const LoadedDataset loaded = read_dataset_file(cfg.dataset);
  spdlog::info("loaded {} datapoints from {} ({} filtered out)", loaded.data.size(), cfg.dataset,
               loaded.filtered_out);

  fs::create_directories(a.out);
  const std::string records_path = (fs::path(a.out) / "records.csv").string();
  const std::string manifest_path = (fs::path(a.out) / "manifest.json").string();

  RunManifest manifest;
  manifest.config_hash = fmt::format("{:016x}", fnv1a64(run_config_to_json(cfg).dump()));
  manifest.seed = cfg.protocol.seed;
  for (Method m : cfg.protocol.methods) manifest.methods.emplace_back(to_string(m));
  manifest.protocol = std::string(to_string(protocol));
  manifest.started = utc_timestamp();
  manifest.expected_record_count = expected_record_count(cfg.protocol).total;
  manifest.dataset = cfg.dataset;
  manifest.records_path = records_path;
  manifest.manifest_path = manifest_path;

  std::ofstream records(records_path, std::ios::binary);
  if (!records) throw ValidationError("cannot write '" + records_path + "'");
  CsvRecordWriter writer(records);
  const std::unique_ptr<Learner> learner =
      a.dry_run ? std::unique_ptr<Learner>(std::make_unique<StubLearner>()) : make_learner(cfg);
  run_protocol(cfg.protocol, loaded.data, *learner,
               [&](const ExperimentRecord& r) { writer.write(r); }, RunOptions{a.jobs});
  records.close();

  manifest.finished = utc_timestamp();
  manifest.record_count = writer.count();
  std::ofstream mf(manifest_path, std::ios::binary);
  mf << manifest_to_json(manifest).dump(2) << '\n';

  fmt::print("{} records written to {}\n", writer.count(), records_path);
  if (manifest.record_count != manifest.expected_record_count) {
    spdlog::error("record count {} differs from the expected {}", manifest.record_count,
                  manifest.expected_record_count);
    return kExitFailure;
  }
  return 0;
}

int cmd_report(const std::string& records_path, const std::string& format, const std::string& out) {
  const ReportFormat f = parse_report_format(format);
  const auto records = read_records_file(records_path);
  if (records.empty()) throw EmptyDatasetError("records file holds no records");
  if (out.empty()) {
    render_report(std::cout, records, f);
  } else {
    std::ofstream o(out, std::ios::binary);
    if (!o) throw ValidationError("cannot write '" + out + "'");
    render_report(o, records, f);
  }
  return 0;
}

int cmd_selftest(bool inject_fault) {
  SelftestOptions options;
  options.corrupt_pacc_rates = inject_fault;
  bool ok = true;
  for (const CheckResult& c : run_selftest(options)) {
    fmt::print("{} {}: worst {:.3e} (tolerance {:.0e}, {} instances)\n", c.passed ? "PASS" : "FAIL",
               c.name, c.worst, c.tolerance, c.instances);
    ok = ok && c.passed;
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("shiftbench");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Binary quantification under dataset shift: data generation, experiments, reports"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic dataset from a cluster spec");
  gen_cmd->add_option("--spec", gen.spec, "JSON cluster spec")->required();
  gen_cmd->add_option("--out", gen.out, "Output JSON-lines file")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--n", gen.n, "Number of datapoints (overrides \"n\" in the cluster file)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a shift protocol and write records.csv");
  run_cmd->add_option("protocol", run.protocol, "prior | global-covariate | local-covariate | concept")
      ->required();
  run_cmd->add_option("--config", run.config, "JSON run config");
  run_cmd->add_option("--data", run.data, "Dataset file (overrides the config)");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--seed", run.seed, "Master seed (beats SHIFTBENCH_SEED and the config)");
  run_cmd->add_option("--jobs", run.jobs, "Worker threads");
  run_cmd->add_flag("--desk", run.desk, "2 repetitions, 5 samples per configuration");
  run_cmd->add_option("--methods", run.methods, "Comma-separated method list");
  run_cmd->add_flag("--dry-run", run.dry_run, "Count records with a constant stub quantifier");

  std::string records_path;
  std::string format = "markdown";
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Render MAE tables or boxplot data");
  report_cmd->add_option("records", records_path, "records.csv")->required();
  report_cmd->add_option("--format", format, "markdown | csv | plotdata");
  report_cmd->add_option("--out", report_out, "Write to a file instead of stdout");

  bool inject_fault = false;
  auto* self_cmd = app.add_subcommand("selftest", "Run built-in consistency checks");
  self_cmd->add_flag("--inject-fault", inject_fault, "Corrupt the PACC rates (the check must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (verbose) spdlog::set_level(spdlog::level::info);

  try {
    if (*gen_cmd) return cmd_gen_data(gen);
    if (*run_cmd) return cmd_run(run);
    if (*report_cmd) return cmd_report(records_path, format, report_out);
    if (*self_cmd) return cmd_selftest(inject_fault);
  } catch (const ExhaustionError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitExhausted;
  } catch (const ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const EmptyDatasetError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const StratificationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const DimensionMismatchError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}
