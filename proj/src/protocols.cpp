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

#include "shiftbench/protocols.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "shiftbench/text.hpp"

namespace shiftbench {

namespace {

constexpr std::array<std::pair<Protocol, std::string_view>, 4> kProtocolNames{{
    {Protocol::Prior, "prior"},
    {Protocol::GlobalCovariate, "global-covariate"},
    {Protocol::LocalCovariate, "local-covariate"},
    {Protocol::Concept, "concept"},
}};

// Seed-derivation tags.
enum : std::uint64_t { kSplit = 1, kTrainDraw = 2, kFit = 3, kTestDraw = 4, kBalance = 5, kControl = 6 };

std::uint64_t protocol_tag(Protocol p) { return 0x70726f74ULL + static_cast<std::uint64_t>(p); }

void check_prevalences(const std::vector<double>& values, const char* what, bool open) {
  if (values.empty()) throw ValidationError(fmt::format("{} grid is empty", what));
  for (double v : values) {
    const bool ok = open ? (v > 0.0 && v < 1.0) : (v >= 0.0 && v <= 1.0);
    if (!ok) throw ValidationError(fmt::format("{} value {} out of range", what, v));
  }
}

// ---------------------------------------------------------------------------
// Task execution. A task produces all records of one (repetition, training
// cell); records reach the sink in task order whatever the worker count.

using TaskBody = std::function<void(std::size_t, std::vector<ExperimentRecord>&)>;

void run_tasks(std::size_t count, const TaskBody& body, const RecordSink& sink, int jobs) {
  if (jobs <= 1 || count <= 1) {
    std::vector<ExperimentRecord> buffer;
    for (std::size_t t = 0; t < count; ++t) {
      buffer.clear();
      body(t, buffer);
      for (const auto& r : buffer) sink(r);
    }
    return;
  }

  struct Slot {
    std::vector<ExperimentRecord> records;
    std::exception_ptr error;
    bool done = false;
  };
  std::vector<Slot> slots(count);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= count) return;
      Slot local;
      if (!abort.load()) {
        try {
          body(t, local.records);
        } catch (...) {
          local.error = std::current_exception();
          abort.store(true);
        }
      }
      {
        std::lock_guard<std::mutex> lock(mu);
        slots[t].records = std::move(local.records);
        slots[t].error = local.error;
        slots[t].done = true;
      }
      cv.notify_all();
    }
  };

  const auto n_workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(jobs), count));
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (std::size_t i = 0; i < n_workers; ++i) threads.emplace_back(worker);

  std::exception_ptr first_error;
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<ExperimentRecord> records;
    std::exception_ptr error;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return slots[t].done; });
      records = std::move(slots[t].records);
      error = slots[t].error;
    }
    if (first_error) continue;
    if (error) {
      first_error = error;
      abort.store(true);
      continue;
    }
    try {
      for (const auto& r : records) sink(r);
    } catch (...) {
      first_error = std::current_exception();
      abort.store(true);
    }
  }
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Runs `fn`, prefixing exhaustion errors with the configuration they hit.
template <typename Fn>
void with_context(Protocol protocol, int rep, const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const ExhaustionError& e) {
    throw ExhaustionError(fmt::format("{} protocol, repetition {}, {}: {}", to_string(protocol),
                                      rep, where, e.what()));
  }
}

// ---------------------------------------------------------------------------
// Data preparation.

std::pair<BinaryDataset, BinaryDataset> split_binary(const BinaryDataset& data, double fraction,
                                                     std::uint64_t seed) {
  std::vector<int> strata(data.labels.data(), data.labels.data() + data.labels.size());
  auto [a, b] = stratified_partition(strata, fraction, seed);
  return {data.subset(a), data.subset(b)};
}

// Text corpora: the vocabulary is learnt from the training-side texts only,
// then every dataset is vectorised with it.
template <typename Dataset>
void featurise(std::initializer_list<Dataset*> train_side, std::initializer_list<Dataset*> test_side) {
  bool text = false;
  for (Dataset* d : train_side) text = text || d->has_text();
  if (!text) return;
  std::vector<std::string> corpus;
  for (Dataset* d : train_side) corpus.insert(corpus.end(), d->texts.begin(), d->texts.end());
  const Vocabulary vocab = fit_vocabulary(corpus);
  spdlog::info("vocabulary: {} terms from {} training documents", vocab.size(), corpus.size());
  for (auto* list : {&train_side, &test_side})
    for (Dataset* d : *list) {
      d->features = vectorise(d->texts, vocab);
      d->texts.clear();
    }
}

// Labelled view of a protocol's learned models for one training cell.
struct FittedModels {
  std::vector<std::unique_ptr<Quantifier>> models;
};

FittedModels fit_all(const ProtocolConfig& cfg, const Learner& learner, const BinaryDataset& train,
                     std::uint64_t seed) {
  FittedModels f;
  for (Method m : cfg.methods) f.models.push_back(learner.learn(m, train, seed));
  return f;
}

void emit(const ProtocolConfig& cfg, const FittedModels& fitted, std::string_view protocol,
          int rep, const std::string& config, ShiftDegree degree, const Sample& sample,
          std::vector<ExperimentRecord>& out) {
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    ExperimentRecord r;
    r.protocol = std::string(protocol);
    r.method = std::string(to_string(cfg.methods[m]));
    r.repetition = rep;
    r.config = config;
    r.degree = degree;
    r.true_prev = sample.true_prevalence;
    r.est_prev = fitted.models[m]->quantify(sample);
    r.ae = absolute_error(r.true_prev, r.est_prev);
    out.push_back(std::move(r));
  }
}

Sample join(const Sample& a, const Sample& b) {
  const std::array<const Sample*, 2> parts{&a, &b};
  return concat_samples(parts);
}

// Draws a class-controlled sample made of `n_a` items from `a` and `n_b` from
// `b`, each at prevalence `p`. Empty parts are skipped.
Sample mixed_draw(PoolSampler& a, PoolSampler& b, double p, Index n_a, Index n_b,
                  std::uint64_t seed) {
  std::vector<Sample> parts;
  if (n_a > 0) parts.push_back(a.at_prevalence(p, n_a, derive_seed(seed, {0})));
  if (n_b > 0) parts.push_back(b.at_prevalence(p, n_b, derive_seed(seed, {1})));
  if (parts.size() == 1) return std::move(parts.front());
  return join(parts[0], parts[1]);
}

}  // namespace

std::string_view to_string(Protocol protocol) {
  for (const auto& [p, name] : kProtocolNames)
    if (p == protocol) return name;
  return "?";
}

Protocol parse_protocol(std::string_view name) {
  for (const auto& [p, known] : kProtocolNames)
    if (known == name) return p;
  throw ValidationError("unknown protocol '" + std::string(name) +
                        "' (expected prior, global-covariate, local-covariate or concept)");
}

void ProtocolConfig::validate() const {
  if (train_size < 2 || test_size < 2) throw ValidationError("train and test sizes must be >= 2");
  if (repetitions < 1 || samples_per_config < 1)
    throw ValidationError("repetitions and samples_per_config must be >= 1");
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    throw ValidationError("split_fraction must lie strictly inside (0,1)");
  if (!(cut_point > 1.0 && cut_point < 5.0)) throw ValidationError("cut_point must lie in (1,5)");
  if (methods.empty()) throw ValidationError("no quantification methods selected");
  check_prevalences(prior_train_prevalences, "prior_train_prevalences", true);
  check_prevalences(prior_test_prevalences, "prior_test_prevalences", false);
  check_prevalences(covariate_prevalences, "covariate_prevalences", true);
  check_prevalences(covariate_alphas, "covariate_alphas", false);
  check_prevalences(local_test_prevalences, "local_test_prevalences", false);
  for (double p : local_test_prevalences)
    if (p >= 1.0) throw ValidationError("local_test_prevalences must be < 1");
  if (concept_cut_points.empty()) throw ValidationError("concept cut point grid is empty");
  for (double c : concept_cut_points)
    if (!(c > 1.0 && c < 5.0) || c == std::floor(c))
      throw ValidationError(fmt::format("concept cut point {} must be a non-integer in (1,5)", c));
  if (concept_force_prevalence) {
    check_prevalences({concept_train_prevalence}, "concept_train_prevalence", true);
    check_prevalences({concept_test_prevalence}, "concept_test_prevalence", false);
  }
}

void apply_desk_preset(ProtocolConfig& config) {
  config.repetitions = 2;
  config.samples_per_config = 5;
}

RecordCounts expected_record_count(const ProtocolConfig& cfg) {
  const auto reps = static_cast<Index>(cfg.repetitions);
  const auto rounds = static_cast<Index>(cfg.samples_per_config);
  RecordCounts c;
  switch (cfg.protocol) {
    case Protocol::Prior:
      c.per_method = reps * static_cast<Index>(cfg.prior_train_prevalences.size()) * rounds *
                     static_cast<Index>(cfg.prior_test_prevalences.size());
      break;
    case Protocol::GlobalCovariate: {
      const auto cells = static_cast<Index>(cfg.covariate_prevalences.size() * cfg.covariate_alphas.size());
      c.per_method = reps * cells * rounds * cells;
      break;
    }
    case Protocol::LocalCovariate:
      c.per_method = reps * rounds * static_cast<Index>(cfg.local_test_prevalences.size());
      if (cfg.local_controls) c.controls_per_method = c.per_method;
      break;
    case Protocol::Concept: {
      const auto cuts = static_cast<Index>(cfg.concept_cut_points.size());
      c.per_method = reps * cuts * rounds * cuts;
      break;
    }
  }
  c.total = (c.per_method + c.controls_per_method) * static_cast<Index>(cfg.methods.size());
  return c;
}

std::unique_ptr<Quantifier> StubLearner::learn(Method, const BinaryDataset&, std::uint64_t) const {
  return std::make_unique<MlpeQuantifier>(0.5);
}

Index local_positive_count(double prevalence, double neg_a, double b_size, double b_pos) {
  if (!(prevalence >= 0.0 && prevalence < 1.0))
    throw ValidationError("local covariate prevalence must lie in [0,1)");
  const double pos = (prevalence * (neg_a + b_size) - b_pos) / (1.0 - prevalence);
  if (pos < -1e-9)
    throw ValidationError(fmt::format(
        "local covariate prevalence {} is below the base mixture's prevalence", prevalence));
  return static_cast<Index>(std::floor(std::max(pos, 0.0) + 0.5 + 1e-9));
}

StarDataset balance_stars(const StarDataset& data, std::uint64_t seed) {
  std::array<std::vector<Index>, 5> by_star;
  for (Index i = 0; i < data.size(); ++i) by_star[static_cast<std::size_t>(data.stars[i] - 1)].push_back(i);
  std::size_t smallest = by_star[0].size();
  for (const auto& v : by_star) smallest = std::min(smallest, v.size());
  if (smallest == 0) throw EmptyDatasetError("star balancing needs every rating 1..5 present");
  Rng rng(seed);
  std::vector<Index> rows;
  for (auto& members : by_star) {
    auto chosen = draw_without_replacement(members, static_cast<Index>(smallest), rng);
    rows.insert(rows.end(), chosen.begin(), chosen.end());
  }
  std::sort(rows.begin(), rows.end());
  return data.subset(rows);
}

// ---------------------------------------------------------------------------

void run_prior_shift(const ProtocolConfig& cfg, const StarDataset& data, const Learner& learner,
                     const RecordSink& sink, const RunOptions& options) {
  cfg.validate();
  const std::uint64_t tag = protocol_tag(Protocol::Prior);
  auto [l_data, u_data] =
      split_binary(binarise_dataset(data, cfg.cut_point), cfg.split_fraction,
                   derive_seed(cfg.seed, {tag, kSplit}));
  featurise<BinaryDataset>({&l_data}, {&u_data});
  const Pool l_pool(std::move(l_data));
  const Pool u_pool(std::move(u_data));

  const std::size_t cells = cfg.prior_train_prevalences.size();
  const auto body = [&](std::size_t task, std::vector<ExperimentRecord>& out) {
    const int rep = static_cast<int>(task / cells);
    const std::size_t cell = task % cells;
    const double pl = cfg.prior_train_prevalences[cell];
    PoolSampler l_sampler(l_pool);
    PoolSampler u_sampler(u_pool);
    with_context(Protocol::Prior, rep, fmt::format("pL={:.2f}", pl), [&] {
      const Sample train =
          l_sampler.at_prevalence(pl, cfg.train_size, derive_seed(cfg.seed, {tag, kTrainDraw, static_cast<std::uint64_t>(rep), cell}));
      const FittedModels fitted = fit_all(cfg, learner, train.as_dataset(),
                                          derive_seed(cfg.seed, {tag, kFit, static_cast<std::uint64_t>(rep), cell}));
      for (int s = 0; s < cfg.samples_per_config; ++s)
        for (std::size_t j = 0; j < cfg.prior_test_prevalences.size(); ++j) {
          const double pu = cfg.prior_test_prevalences[j];
          const std::string key = fmt::format("pL={:.2f};pU={:.2f};sample={}", pl, pu, s);
          Sample test;
          with_context(Protocol::Prior, rep, key, [&] {
            test = u_sampler.at_prevalence(
                pu, cfg.test_size,
                derive_seed(cfg.seed, {tag, kTestDraw, static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(s), j}));
          });
          emit(cfg, fitted, to_string(Protocol::Prior), rep, key, ShiftDegree::from_value(pu - pl, 1),
               test, out);
        }
    });
  };
  run_tasks(static_cast<std::size_t>(cfg.repetitions) * cells, body, sink, options.jobs);
}

namespace {

struct CategoryPools {
  Pool l_a, u_a, l_b, u_b;
};

CategoryPools category_pools(const ProtocolConfig& cfg, const StarDataset& data, std::uint64_t tag) {
  const BinaryDataset a = binarise_dataset(data.select(Category::A), cfg.cut_point);
  const BinaryDataset b = binarise_dataset(data.select(Category::B), cfg.cut_point);
  auto [la, ua] = split_binary(a, cfg.split_fraction, derive_seed(cfg.seed, {tag, kSplit, 0}));
  auto [lb, ub] = split_binary(b, cfg.split_fraction, derive_seed(cfg.seed, {tag, kSplit, 1}));
  featurise<BinaryDataset>({&la, &lb}, {&ua, &ub});
  return {Pool(std::move(la)), Pool(std::move(ua)), Pool(std::move(lb)), Pool(std::move(ub))};
}

// Sizes of the A and B parts for mixing weight alpha on category A.
std::pair<Index, Index> covariate_split(double alpha, Index size) {
  const auto n = static_cast<double>(size);
  return {static_cast<Index>(std::ceil(alpha * n - 1e-9)),
          static_cast<Index>(std::floor((1.0 - alpha) * n + 1e-9))};
}

}  // namespace

void run_global_covariate(const ProtocolConfig& cfg, const StarDataset& data,
                          const Learner& learner, const RecordSink& sink,
                          const RunOptions& options) {
  cfg.validate();
  const std::uint64_t tag = protocol_tag(Protocol::GlobalCovariate);
  const CategoryPools pools = category_pools(cfg, data, tag);

  struct Cell {
    double p;
    double alpha;
  };
  std::vector<Cell> grid;
  for (double p : cfg.covariate_prevalences)
    for (double a : cfg.covariate_alphas) grid.push_back({p, a});

  const std::size_t cells = grid.size();
  const auto body = [&](std::size_t task, std::vector<ExperimentRecord>& out) {
    const int rep = static_cast<int>(task / cells);
    const auto urep = static_cast<std::uint64_t>(rep);
    const std::size_t cell = task % cells;
    const Cell train_cell = grid[cell];
    PoolSampler la(pools.l_a), lb(pools.l_b), ua(pools.u_a), ub(pools.u_b);
    with_context(Protocol::GlobalCovariate, rep,
                 fmt::format("pL={:.2f};aL={:.2f}", train_cell.p, train_cell.alpha), [&] {
      const auto [na, nb] = covariate_split(train_cell.alpha, cfg.train_size);
      const Sample train = mixed_draw(la, lb, train_cell.p, na, nb,
                                      derive_seed(cfg.seed, {tag, kTrainDraw, urep, cell}));
      const FittedModels fitted =
          fit_all(cfg, learner, train.as_dataset(), derive_seed(cfg.seed, {tag, kFit, urep, cell}));
      for (int s = 0; s < cfg.samples_per_config; ++s)
        for (std::size_t j = 0; j < cells; ++j) {
          const Cell tc = grid[j];
          const auto [ma, mb] = covariate_split(tc.alpha, cfg.test_size);
          const std::string key = fmt::format("pL={:.2f};aL={:.2f};pU={:.2f};aU={:.2f};sample={}",
                                              train_cell.p, train_cell.alpha, tc.p, tc.alpha, s);
          Sample test;
          with_context(Protocol::GlobalCovariate, rep, key, [&] {
            test = mixed_draw(ua, ub, tc.p, ma, mb,
                              derive_seed(cfg.seed, {tag, kTestDraw, urep, static_cast<std::uint64_t>(s), j}));
          });
          emit(cfg, fitted, to_string(Protocol::GlobalCovariate), rep, key,
               ShiftDegree::from_value(train_cell.alpha - tc.alpha, 1), test, out);
        }
    });
  };
  run_tasks(static_cast<std::size_t>(cfg.repetitions) * cells, body, sink, options.jobs);
}

void run_local_covariate(const ProtocolConfig& cfg, const StarDataset& data,
                         const Learner& learner, const RecordSink& sink,
                         const RunOptions& options) {
  cfg.validate();
  const std::uint64_t tag = protocol_tag(Protocol::LocalCovariate);
  const CategoryPools pools = category_pools(cfg, data, tag);

  // Training: half the items from each category; A holds 2/3 of the
  // positives, B 2/3 of the negatives.
  const Index half = cfg.train_size / 2;
  const double pa_train = 2.0 / 3.0;
  const double pb_train = 1.0 / 3.0;
  // Test base: test_size/6 A negatives plus test_size/2 B items at 1/3.
  const double neg_a_exact = static_cast<double>(cfg.test_size) / 6.0;
  const Index b_size = cfg.test_size / 2;
  const double b_pos_exact = static_cast<double>(b_size) / 3.0;
  const Index neg_a = static_cast<Index>(std::floor(neg_a_exact + 1e-9));

  const auto body = [&](std::size_t task, std::vector<ExperimentRecord>& out) {
    const int rep = static_cast<int>(task);
    const auto urep = static_cast<std::uint64_t>(rep);
    PoolSampler la(pools.l_a), lb(pools.l_b), ua(pools.u_a), ub(pools.u_b);
    with_context(Protocol::LocalCovariate, rep, "training draw", [&] {
      const Sample part_a = la.at_prevalence(pa_train, half, derive_seed(cfg.seed, {tag, kTrainDraw, urep, 0}));
      const Sample part_b =
          lb.at_prevalence(pb_train, cfg.train_size - half, derive_seed(cfg.seed, {tag, kTrainDraw, urep, 1}));
      const Sample train = join(part_a, part_b);
      const FittedModels fitted =
          fit_all(cfg, learner, train.as_dataset(), derive_seed(cfg.seed, {tag, kFit, urep}));

      for (int s = 0; s < cfg.samples_per_config; ++s) {
        const auto us = static_cast<std::uint64_t>(s);
        Sample base;
        with_context(Protocol::LocalCovariate, rep, fmt::format("base sample={}", s), [&] {
          const Sample negatives = ua.by_counts(0, neg_a, derive_seed(cfg.seed, {tag, kTestDraw, urep, us, 0}));
          const Sample b_part =
              ub.at_prevalence(pb_train, b_size, derive_seed(cfg.seed, {tag, kTestDraw, urep, us, 1}));
          base = join(negatives, b_part);
        });
        for (std::size_t j = 0; j < cfg.local_test_prevalences.size(); ++j) {
          const double pu = cfg.local_test_prevalences[j];
          const ShiftDegree degree = ShiftDegree::from_value(pu - 0.5, 2);
          const std::string key = fmt::format("pU={:.2f};sample={}", pu, s);
          const Index pos = local_positive_count(pu, neg_a_exact, static_cast<double>(b_size), b_pos_exact);
          Sample test;
          with_context(Protocol::LocalCovariate, rep, key, [&] {
            if (pos == 0) {
              test = base;
            } else {
              const Sample positives =
                  ua.by_counts(pos, 0, derive_seed(cfg.seed, {tag, kTestDraw, urep, us, 2 + j}));
              test = join(positives, base);
            }
          });
          emit(cfg, fitted, to_string(Protocol::LocalCovariate), rep, key, degree, test, out);
        }
        if (!cfg.local_controls) continue;
        // Control draws keep the training class-conditionals: positives 2/3
        // from A, negatives 2/3 from B.
        for (std::size_t j = 0; j < cfg.local_test_prevalences.size(); ++j) {
          const double pu = cfg.local_test_prevalences[j];
          const std::string key = fmt::format("draw=control;pU={:.2f};sample={}", pu, s);
          const Index npos = positive_count_for(pu, cfg.test_size);
          const Index nneg = cfg.test_size - npos;
          const Index pos_a = static_cast<Index>(std::floor(static_cast<double>(npos) * 2.0 / 3.0 + 0.5));
          const Index neg_a_ctl = static_cast<Index>(std::floor(static_cast<double>(nneg) / 3.0 + 0.5));
          Sample test;
          with_context(Protocol::LocalCovariate, rep, key, [&] {
            const std::uint64_t seed = derive_seed(cfg.seed, {tag, kControl, urep, us, j});
            const Sample a_part = ua.by_counts(pos_a, neg_a_ctl, derive_seed(seed, {0}));
            const Sample b_part = ub.by_counts(npos - pos_a, nneg - neg_a_ctl, derive_seed(seed, {1}));
            test = join(a_part, b_part);
          });
          emit(cfg, fitted, kLocalControlProtocol, rep, key, ShiftDegree::from_value(pu - 0.5, 2), test,
               out);
        }
      }
    });
  };
  run_tasks(static_cast<std::size_t>(cfg.repetitions), body, sink, options.jobs);
}

void run_concept_shift(const ProtocolConfig& cfg, const StarDataset& data,
                       const Learner& learner, const RecordSink& sink,
                       const RunOptions& options) {
  cfg.validate();
  const std::uint64_t tag = protocol_tag(Protocol::Concept);
  const StarDataset balanced = balance_stars(data, derive_seed(cfg.seed, {tag, kBalance}));
  auto [l_stars, u_stars] =
      split_stratified_by_stars(balanced, cfg.split_fraction, derive_seed(cfg.seed, {tag, kSplit}));
  featurise<StarDataset>({&l_stars}, {&u_stars});

  // Binarised pools per cut point, used by the forced-prevalence variant.
  std::vector<Pool> l_pools;
  std::vector<Pool> u_pools;
  if (cfg.concept_force_prevalence)
    for (double c : cfg.concept_cut_points) {
      l_pools.emplace_back(binarise_dataset(l_stars, c));
      u_pools.emplace_back(binarise_dataset(u_stars, c));
    }

  std::vector<Index> l_all(static_cast<std::size_t>(l_stars.size()));
  std::vector<Index> u_all(static_cast<std::size_t>(u_stars.size()));
  for (std::size_t i = 0; i < l_all.size(); ++i) l_all[i] = static_cast<Index>(i);
  for (std::size_t i = 0; i < u_all.size(); ++i) u_all[i] = static_cast<Index>(i);

  const std::size_t cuts = cfg.concept_cut_points.size();
  const auto body = [&](std::size_t task, std::vector<ExperimentRecord>& out) {
    const int rep = static_cast<int>(task / cuts);
    const auto urep = static_cast<std::uint64_t>(rep);
    const std::size_t ci = task % cuts;
    const double cl = cfg.concept_cut_points[ci];
    with_context(Protocol::Concept, rep, fmt::format("cL={:.1f}", cl), [&] {
      BinaryDataset train;
      const std::uint64_t train_seed = derive_seed(cfg.seed, {tag, kTrainDraw, urep, ci});
      if (cfg.concept_force_prevalence) {
        train = PoolSampler(l_pools[ci]).at_prevalence(cfg.concept_train_prevalence, cfg.train_size, train_seed).as_dataset();
      } else {
        Rng rng(train_seed);
        std::vector<Index> scratch = l_all;
        if (cfg.train_size > l_stars.size())
          throw ExhaustionError(fmt::format("training draw of {} from a pool of {}", cfg.train_size,
                                            l_stars.size()));
        const auto rows = draw_without_replacement(scratch, cfg.train_size, rng);
        train = binarise_dataset(l_stars.subset(rows), cl);
      }
      const FittedModels fitted =
          fit_all(cfg, learner, train, derive_seed(cfg.seed, {tag, kFit, urep, ci}));

      std::vector<Index> scratch = u_all;
      std::vector<std::optional<PoolSampler>> u_samplers(u_pools.size());
      for (int s = 0; s < cfg.samples_per_config; ++s)
        for (std::size_t j = 0; j < cuts; ++j) {
          const double cu = cfg.concept_cut_points[j];
          const std::string key = fmt::format("cL={:.1f};cU={:.1f};sample={}", cl, cu, s);
          const std::uint64_t seed =
              derive_seed(cfg.seed, {tag, kTestDraw, urep, static_cast<std::uint64_t>(s), j});
          Sample test;
          with_context(Protocol::Concept, rep, key, [&] {
            if (cfg.concept_force_prevalence) {
              if (!u_samplers[j]) u_samplers[j].emplace(u_pools[j]);
              test = u_samplers[j]->at_prevalence(cfg.concept_test_prevalence, cfg.test_size, seed);
            } else {
              if (cfg.test_size > u_stars.size())
                throw ExhaustionError(fmt::format("test draw of {} from a pool of {}", cfg.test_size,
                                                  u_stars.size()));
              Rng rng(seed);
              const auto rows = draw_without_replacement(scratch, cfg.test_size, rng);
              const BinaryDataset drawn = binarise_dataset(u_stars.subset(rows), cu);
              test.features = drawn.features;
              test.labels = drawn.labels;
              test.true_prevalence = prevalence_of(drawn.labels);
            }
          });
          emit(cfg, fitted, to_string(Protocol::Concept), rep, key, ShiftDegree::from_value(cl - cu, 0),
               test, out);
        }
    });
  };
  run_tasks(static_cast<std::size_t>(cfg.repetitions) * cuts, body, sink, options.jobs);
}

void run_protocol(const ProtocolConfig& cfg, const StarDataset& data, const Learner& learner,
                  const RecordSink& sink, const RunOptions& options) {
  switch (cfg.protocol) {
    case Protocol::Prior: return run_prior_shift(cfg, data, learner, sink, options);
    case Protocol::GlobalCovariate: return run_global_covariate(cfg, data, learner, sink, options);
    case Protocol::LocalCovariate: return run_local_covariate(cfg, data, learner, sink, options);
    case Protocol::Concept: return run_concept_shift(cfg, data, learner, sink, options);
  }
}

}  // namespace shiftbench
