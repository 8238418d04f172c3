// Copyright 2026 The MRFGAT Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mrfgat: dataset preparation, training, evaluation and verification tools.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrfgat/binary_io.hpp"
#include "mrfgat/dataset/cache.hpp"
#include "mrfgat/dataset/manifest.hpp"
#include "mrfgat/errors.hpp"
#include "mrfgat/geometry/knn.hpp"
#include "mrfgat/model/gradient_check.hpp"
#include "mrfgat/model/params.hpp"
#include "mrfgat/rng.hpp"
#include "mrfgat/training/checkpoint.hpp"
#include "mrfgat/training/metrics.hpp"
#include "mrfgat/training/train.hpp"

namespace fs = std::filesystem;
using namespace mrfgat;

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string config;
  bool deterministic = false;
};

std::uint64_t seed_or(const Globals& g, std::uint64_t fallback) { return g.seed.value_or(fallback); }

// ---- prepare ---------------------------------------------------------------

struct PrepareArgs {
  std::string raw;
  std::string out;
  std::size_t points = 1024;
  double fraction = 1.0;
};

int cmd_prepare(const PrepareArgs& a, const Globals& g) {
  if (!fs::is_directory(a.raw)) throw UsageError("raw directory '" + a.raw + "' does not exist");
  if (a.fraction <= 0.0 || a.fraction > 1.0) throw UsageError("--fraction must be in (0, 1]");
  const std::uint64_t seed = seed_or(g, 1);
  data::Manifest manifest = data::scan_manifest(a.raw);
  if (a.fraction < 1.0) manifest = data::stratified_subset(manifest, a.fraction, seed);
  const data::BuildResult built = data::build_cache(manifest, a.points, seed);

  for (const auto& [name, counts] : built.summary.per_class) {
    fmt::print("{:<20} train={:<5} test={}\n", name, counts.first, counts.second);
  }
  if (built.summary.degenerate_faces > 0) {
    fmt::print("dropped {} degenerate faces\n", built.summary.degenerate_faces);
  }
  for (const auto& s : built.summary.skipped) fmt::print(stderr, "skipped {}: {}\n", s.path.string(), s.reason);
  fmt::print("train={} test={}\n", built.summary.train, built.summary.test);

  const std::string bytes = data::encode_cache(built.cache);
  if (fs::exists(a.out) && io::read_file(a.out) == bytes) {
    fmt::print("cache unchanged\n");
  } else {
    if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
    io::write_file_atomic(a.out, bytes);
    fmt::print("wrote {}\n", a.out);
  }
  if (!built.summary.skipped.empty()) {
    fmt::print(stderr, "{} file(s) skipped\n", built.summary.skipped.size());
    return kRuntimeFailure;
  }
  return 0;
}

// ---- train -----------------------------------------------------------------

struct TrainArgs {
  std::string cache;
  std::string checkpoint_dir;
  std::string log;
  std::string resume;
  std::optional<std::size_t> epochs;
  bool quiet = false;
};

int cmd_train(const TrainArgs& a, const Globals& g) {
  train::Checkpoint state;
  if (!a.resume.empty()) {
    if (!g.config.empty()) throw UsageError("--resume takes the experiment from the checkpoint; drop --config");
    state = train::load_checkpoint(a.resume);
    if (g.seed && *g.seed != state.progress.seed) throw UsageError("--seed differs from the resumed run's seed");
  } else {
    if (g.config.empty()) throw UsageError("train needs --config (preset name or file) or --resume");
    train::ExperimentConfig e = train::load_experiment(g.config);
    if (g.seed) e.train.seed = *g.seed;
    state = train::initial_checkpoint(e);
  }
  train::TrainConfig& tc = state.experiment.train;
  if (a.epochs) tc.epochs = *a.epochs;
  if (!a.cache.empty()) tc.cache_path = a.cache;
  if (!a.checkpoint_dir.empty()) tc.checkpoint_dir = a.checkpoint_dir;
  if (!a.log.empty()) tc.log_path = a.log;
  if (tc.cache_path.empty()) throw UsageError("no cache: pass --cache or set cache_path in the config");
  tc.validate();

  const data::CacheFile cache = data::read_cache(tc.cache_path);
  fmt::print("{} parameters, {} train / {} test samples, epochs {}..{}\n", model::param_count(state.experiment.model),
             cache.indices(data::Split::Train).size(), cache.indices(data::Split::Test).size(),
             state.progress.epochs_done + 1, tc.epochs);
  std::fflush(stdout);

  train::TrainHooks hooks = train::file_hooks(tc.checkpoint_dir, tc.log_path);
  auto write = hooks.on_epoch;
  hooks.on_epoch = [write, quiet = a.quiet](const train::EpochLog& log, const train::Checkpoint& s) {
    write(log, s);
    if (!quiet) {
      fmt::print("{}\n", log.to_json());
      std::fflush(stdout);
    }
  };
  train::train(cache, state, hooks);
  if (state.progress.best_oa >= 0.0) {
    fmt::print("best test OA={:.4f} at epoch {}\n", state.progress.best_oa, state.progress.best_epoch);
  }
  return 0;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string cache;
  std::string checkpoint;
  std::string split = "test";
  std::string json;
  std::size_t batch_size = 16;
};

nlohmann::ordered_json metrics_json(const train::Metrics& m, const std::vector<std::string>& names) {
  nlohmann::ordered_json j;
  j["OA"] = m.overall_accuracy;
  j["MA"] = m.mean_class_accuracy;
  j["classes"] = names;
  j["confusion"] = m.confusion;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
  for (const auto& acc : m.per_class) per_class.push_back(acc ? nlohmann::ordered_json(*acc) : nullptr);
  j["per_class"] = per_class;
  j["zero_support"] = m.zero_support;
  return j;
}

int cmd_eval(const EvalArgs& a, const Globals&) {
  if (a.split != "test" && a.split != "train") throw UsageError("--split must be test or train");
  const train::Checkpoint ckpt = train::load_checkpoint(a.checkpoint);
  const std::string cache_path = a.cache.empty() ? ckpt.experiment.train.cache_path : a.cache;
  if (cache_path.empty()) throw UsageError("no cache: pass --cache");
  const data::CacheFile cache = data::read_cache(cache_path);
  const data::Split split = a.split == "test" ? data::Split::Test : data::Split::Train;
  const train::Metrics m = train::evaluate(ckpt.params, ckpt.experiment.model, cache, split, a.batch_size);
  fmt::print("{}", train::format_metrics(m, cache.class_names));
  if (!a.json.empty()) {
    const std::string text = metrics_json(m, cache.class_names).dump(2) + "\n";
    if (a.json == "-") {
      fmt::print("{}", text);
    } else {
      io::write_file_atomic(a.json, text);
    }
  }
  return 0;
}

// ---- gradcheck -------------------------------------------------------------

struct GradcheckArgs {
  std::size_t size = 16;
  std::size_t batch = 4;
  std::string mode = "infer";
  double eps = 1e-4;
};

int cmd_gradcheck(const GradcheckArgs& a, const Globals& g) {
  if (a.mode != "infer" && a.mode != "train") throw UsageError("--mode must be infer or train");
  const model::MRFGATConfig config = model::MRFGATConfig::reduced();
  model::GradCheckProblem problem = model::make_gradcheck_problem(config, a.size, a.batch, seed_or(g, 7));
  problem.mode = a.mode == "infer" ? ad::Mode::Infer : ad::Mode::Train;
  const auto start = std::chrono::steady_clock::now();
  const model::NetworkGradReport report = model::check_network_gradients(problem, a.eps);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fmt::print("{}", model::format_gradient_report(report));
  fmt::print("{} blocks, {} points x {} clouds, {} mode, {:.2f} s\n", report.blocks.size(), a.size, a.batch, a.mode,
             seconds);
  return report.passed() ? 0 : kRuntimeFailure;
}

// ---- bench-knn -------------------------------------------------------------

struct BenchArgs {
  std::size_t n = 1024;
  std::size_t k = 32;
  std::size_t repeat = 20;
};

struct Timing {
  double mean = 0.0;
  double p95 = 0.0;
};

Timing summarize(std::vector<double> ms) {
  Timing t;
  for (double v : ms) t.mean += v;
  t.mean /= static_cast<double>(ms.size());
  std::sort(ms.begin(), ms.end());
  // Nearest-rank percentile.
  const std::size_t rank = (95 * ms.size() + 99) / 100;
  t.p95 = ms[std::max<std::size_t>(rank, 1) - 1];
  return t;
}

int cmd_bench_knn(const BenchArgs& a, const Globals& g) {
  if (a.n < a.k) throw ValidationError(fmt::format("n={} is smaller than k={}", a.n, a.k));
  if (a.k == 0 || a.repeat == 0) throw ValidationError("k and repeat must be positive");
  const std::uint64_t seed = seed_or(g, 1);
  std::vector<double> brute_ms;
  std::vector<double> indexed_ms;
  for (std::size_t r = 0; r < a.repeat; ++r) {
    Rng rng(derive_seed(seed, {r}));
    geo::PointCloud pc;
    pc.points.resize(a.n);
    for (auto& p : pc.points) p = {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    auto t0 = std::chrono::steady_clock::now();
    const geo::NeighborGraph brute = geo::knn_graph_bruteforce(pc, a.k);
    auto t1 = std::chrono::steady_clock::now();
    const geo::NeighborGraph indexed = geo::knn_graph_indexed(pc, a.k);
    auto t2 = std::chrono::steady_clock::now();
    if (!(brute == indexed)) {
      fmt::print(stderr, "backends disagree on repeat {} (n={}, k={}, seed={})\n", r, a.n, a.k, seed);
      return kRuntimeFailure;
    }
    brute_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    indexed_ms.push_back(std::chrono::duration<double, std::milli>(t2 - t1).count());
  }
  const Timing b = summarize(brute_ms);
  const Timing i = summarize(indexed_ms);
  fmt::print("n={} k={} repeat={}: backends agree on all repeats\n", a.n, a.k, a.repeat);
  fmt::print("{:<12} {:>12} {:>12}\n", "backend", "mean_ms", "p95_ms");
  fmt::print("{:<12} {:>12.3f} {:>12.3f}\n", "brute", b.mean, b.p95);
  fmt::print("{:<12} {:>12.3f} {:>12.3f}\n", "kdtree", i.mean, i.p95);
  fmt::print("speedup {:.2f}x\n", b.mean / i.mean);
  return 0;
}

// ---- inspect ---------------------------------------------------------------

void inspect_cache(const data::CacheFile& c) {
  fmt::print("cache version {}\n", data::CacheFile::kVersion);
  fmt::print("points per cloud {}\n", c.point_count);
  fmt::print("samples {} (train {}, test {})\n", c.clouds.size(), c.indices(data::Split::Train).size(),
             c.indices(data::Split::Test).size());
  fmt::print("classes {}\n", c.class_names.size());
  std::vector<std::pair<std::size_t, std::size_t>> counts(c.class_names.size());
  for (std::size_t i = 0; i < c.clouds.size(); ++i) {
    auto& slot = counts[static_cast<std::size_t>(*c.clouds[i].label)];
    (c.splits[i] == data::Split::Train ? slot.first : slot.second)++;
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    fmt::print("  {:>3} {:<20} train={:<5} test={}\n", i, c.class_names[i], counts[i].first, counts[i].second);
  }
}

void inspect_checkpoint(const train::Checkpoint& c) {
  fmt::print("checkpoint version {}\n", train::Checkpoint::kVersion);
  fmt::print("epochs done {}\nseed {}\n", c.progress.epochs_done, c.progress.seed);
  if (c.progress.best_oa >= 0.0) {
    fmt::print("best test OA {:.4f} at epoch {}\n", c.progress.best_oa, c.progress.best_epoch);
  } else {
    fmt::print("best test OA none\n");
  }
  fmt::print("adam step {}\n", c.adam.step);
  fmt::print("param_count {}\n", model::param_count(c.experiment.model));
  fmt::print("experiment:\n{}", train::format_experiment(c.experiment));
}

int cmd_inspect(const std::string& file, const Globals& g) {
  if (file.empty()) {
    if (g.config.empty()) throw UsageError("inspect needs a file or --config");
    const train::ExperimentConfig e = train::load_experiment(g.config);
    fmt::print("param_count {}\n{}", model::param_count(e.model), train::format_experiment(e));
    return 0;
  }
  if (!fs::exists(file)) throw UsageError("no such file '" + file + "'");
  const std::string bytes = io::read_file(file);
  const std::string magic = bytes.substr(0, 4);
  if (magic == "MRFG") {
    inspect_cache(data::decode_cache(bytes));
  } else if (magic == "MRFC") {
    inspect_checkpoint(train::decode_checkpoint(bytes));
  } else {
    throw LoadError("'" + file + "' is neither a cache nor a checkpoint");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-scale graph attention point cloud classifier"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Base seed of every random stream");
  app.add_option("--config", g.config, "Preset name or experiment key-value file");
  app.add_flag("--deterministic", g.deterministic, "Single-lane execution (always the case in this build)");

  PrepareArgs prep;
  auto* prepare = app.add_subcommand("prepare", "Sample and normalize a raw ModelNet tree into a cache");
  prepare->add_option("--raw", prep.raw, "Raw dataset root (class/train|test/*.off)")->required();
  prepare->add_option("--out", prep.out, "Cache file to write")->required();
  prepare->add_option("--points", prep.points, "Points per cloud")->capture_default_str();
  prepare->add_option("--fraction", prep.fraction, "Stratified subset fraction per class and split")
      ->capture_default_str();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train from a cache");
  train_cmd->add_option("--cache", tr.cache, "Cache file (overrides cache_path)");
  train_cmd->add_option("--checkpoint-dir", tr.checkpoint_dir, "Directory for last.ckpt and best.ckpt");
  train_cmd->add_option("--log", tr.log, "JSON-lines epoch log to append to");
  train_cmd->add_option("--resume", tr.resume, "Checkpoint to continue from");
  train_cmd->add_option("--epochs", tr.epochs, "Override the total epoch count");
  train_cmd->add_flag("--quiet", tr.quiet, "Do not echo epoch logs");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", ev.checkpoint, "Checkpoint file")->required();
  eval->add_option("--cache", ev.cache, "Cache file (defaults to the checkpoint's cache_path)");
  eval->add_option("--split", ev.split, "test or train")->capture_default_str();
  eval->add_option("--json", ev.json, "Also write metrics as JSON to this path ('-' for stdout)");
  eval->add_option("--batch-size", ev.batch_size, "Inference batch size")->capture_default_str();

  GradcheckArgs gc;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of every parameter gradient");
  gradcheck->add_option("--size", gc.size, "Points per cloud")->capture_default_str();
  gradcheck->add_option("--batch", gc.batch, "Clouds in the batch")->capture_default_str();
  gradcheck->add_option("--mode", gc.mode, "infer or train batch norm")->capture_default_str();
  gradcheck->add_option("--eps", gc.eps, "Central difference step")->capture_default_str();

  BenchArgs bk;
  auto* bench = app.add_subcommand("bench-knn", "Time and cross-check the kNN backends");
  bench->add_option("--n", bk.n, "Points per cloud")->capture_default_str();
  bench->add_option("--k", bk.k, "Neighbors")->capture_default_str();
  bench->add_option("--repeat", bk.repeat, "Random clouds")->capture_default_str();

  std::string inspect_file;
  auto* inspect = app.add_subcommand("inspect", "Describe a cache, a checkpoint or an experiment config");
  inspect->add_option("file", inspect_file, "Cache or checkpoint file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*prepare) return cmd_prepare(prep, g);
    if (*train_cmd) return cmd_train(tr, g);
    if (*eval) return cmd_eval(ev, g);
    if (*gradcheck) return cmd_gradcheck(gc, g);
    if (*bench) return cmd_bench_knn(bk, g);
    if (*inspect) return cmd_inspect(inspect_file, g);
  } catch (const UsageError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsageError;
  } catch (const ValidationError& e) {
    fmt::print(stderr, "validation error: {}\n", e.what());
    return kUsageError;
  } catch (const DimensionError& e) {
    fmt::print(stderr, "validation error: {}\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kRuntimeFailure;
  }
  return kUsageError;
}
