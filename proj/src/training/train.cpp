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

#include "mrfgat/training/train.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "mrfgat/dataset/batch.hpp"
#include "mrfgat/errors.hpp"
#include "mrfgat/model/network.hpp"

namespace mrfgat::train {

namespace {

// Stream tags under the run seed.
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kAugmentStream = 2;
constexpr std::uint64_t kDropoutStream = 3;
constexpr std::uint64_t kInitStream = 4;

std::string parameter_norms(const model::NetworkParams& params) {
  std::string out;
  for (const ad::Parameter* p : params.parameters()) {
    double sq = 0.0;
    double grad_sq = 0.0;
    for (double v : p->value) sq += v * v;
    for (double g : p->grad) grad_sq += g * g;
    out += fmt::format("  {:<36} |w|={:.6e} |g|={:.6e}\n", p->name, std::sqrt(sq), std::sqrt(grad_sq));
  }
  return out;
}

data::BatchOptions epoch_batches(const TrainConfig& tc, std::uint64_t seed, std::size_t epoch) {
  data::BatchOptions options;
  options.batch_size = tc.batch_size;
  options.shuffle_seed = derive_seed(seed, {kShuffleStream});
  if (tc.augment) options.augment = tc.augmentation;
  options.augment_seed = derive_seed(seed, {kAugmentStream});
  options.epoch = epoch;
  return options;
}

void check_classes(const data::CacheFile& cache, const model::MRFGATConfig& config) {
  if (cache.num_classes() != config.classes) {
    throw ValidationError("cache has " + std::to_string(cache.num_classes()) + " classes but the model has " +
                          std::to_string(config.classes));
  }
}

}  // namespace

std::string EpochLog::to_json() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["loss"] = loss;
  j["train_acc"] = train_acc;
  j["test_OA"] = test_oa ? nlohmann::ordered_json(*test_oa) : nlohmann::ordered_json(nullptr);
  j["test_MA"] = test_ma ? nlohmann::ordered_json(*test_ma) : nlohmann::ordered_json(nullptr);
  j["lr"] = lr;
  j["wall_time"] = wall_time;
  return j.dump();
}

Checkpoint initial_checkpoint(const ExperimentConfig& experiment) {
  experiment.model.validate();
  experiment.train.validate();
  Checkpoint ckpt;
  ckpt.experiment = experiment;
  ckpt.params = model::param_init(experiment.model, derive_seed(experiment.train.seed, {kInitStream}));
  ckpt.adam.learning_rate = experiment.train.learning_rate;
  ckpt.progress.seed = experiment.train.seed;
  return ckpt;
}

std::vector<EpochLog> train(const data::CacheFile& cache, Checkpoint& state, const TrainHooks& hooks) {
  const model::MRFGATConfig& config = state.experiment.model;
  const TrainConfig& tc = state.experiment.train;
  check_classes(cache, config);
  model::check_consistency(state.params, config);
  const std::uint64_t seed = state.progress.seed;
  const bool has_test = !cache.indices(data::Split::Test).empty();
  std::size_t last_epoch = tc.epochs;
  if (hooks.stop_after) last_epoch = std::min(last_epoch, *hooks.stop_after);

  std::vector<EpochLog> logs;
  ad::Adam adam(state.adam);
  const auto params = state.params.parameters();
  for (std::size_t epoch = state.progress.epochs_done; epoch < last_epoch; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    EpochLog log;
    log.epoch = epoch + 1;
    log.lr = tc.lr_at(epoch);
    adam.state().learning_rate = log.lr;

    data::BatchIterator batches(cache, data::Split::Train, epoch_batches(tc, seed, epoch));

    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::size_t seen = 0;
    std::size_t batch_index = 0;
    while (auto batch = batches.next()) {
      const std::size_t b = batch_index++;
      // Batch statistics of a single cloud collapse the head batch norms.
      if (batch->size() == 1 && tc.batch_size > 1) continue;
      Rng dropout(derive_seed(seed, {kDropoutStream, epoch, b}));
      ad::Tape tape;
      model::ForwardOptions fwd;
      fwd.mode = ad::Mode::Train;
      fwd.dropout_rng = &dropout;
      const ad::Tensor logits = model::mrfgat_forward(tape, batch->clouds, state.params, config, fwd);
      const ad::Tensor loss = ad::cross_entropy_with_logits(logits, batch->labels);
      if (!std::isfinite(loss.item())) {
        throw TrainingError(fmt::format("non-finite loss {} at epoch {} batch {} (samples {})\nparameter norms:\n{}",
                                        loss.item(), epoch + 1, b, fmt::join(batch->indices, ","),
                                        parameter_norms(state.params)));
      }
      tape.backward(loss);
      adam.step(params);
      const auto scores = logits.data();
      for (std::size_t i = 0; i < batch->size(); ++i) {
        if (argmax(scores.subspan(i * config.classes, config.classes)) == batch->labels[i]) ++correct;
      }
      loss_sum += loss.item() * static_cast<double>(batch->size());
      seen += batch->size();
    }
    log.loss = seen == 0 ? 0.0 : loss_sum / static_cast<double>(seen);
    log.train_acc = seen == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(seen);

    state.adam = adam.state();
    state.progress.epochs_done = epoch + 1;
    bool improved = false;
    const bool eval_now = tc.eval_every > 0 && ((epoch + 1) % tc.eval_every == 0 || epoch + 1 == tc.epochs);
    if (eval_now && has_test) {
      const Metrics m = evaluate(state.params, config, cache, data::Split::Test, tc.batch_size);
      log.test_oa = m.overall_accuracy;
      log.test_ma = m.mean_class_accuracy;
      if (m.overall_accuracy > state.progress.best_oa) {
        state.progress.best_oa = m.overall_accuracy;
        state.progress.best_epoch = epoch + 1;
        improved = true;
      }
    }
    log.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (improved && hooks.on_best) hooks.on_best(state);
    if (hooks.on_epoch) hooks.on_epoch(log, state);
    logs.push_back(log);
  }
  return logs;
}

double epoch_objective(const data::CacheFile& cache, const Checkpoint& state, std::size_t epoch) {
  const model::MRFGATConfig& config = state.experiment.model;
  const TrainConfig& tc = state.experiment.train;
  check_classes(cache, config);
  model::NetworkParams params = state.params;
  data::BatchIterator batches(cache, data::Split::Train, epoch_batches(tc, state.progress.seed, epoch));
  double loss_sum = 0.0;
  std::size_t seen = 0;
  std::size_t batch_index = 0;
  while (auto batch = batches.next()) {
    const std::size_t b = batch_index++;
    if (batch->size() == 1 && tc.batch_size > 1) continue;
    Rng dropout(derive_seed(state.progress.seed, {kDropoutStream, epoch, b}));
    ad::Tape tape(ad::GradMode::Disabled);
    model::ForwardOptions fwd;
    fwd.mode = ad::Mode::Train;
    fwd.dropout_rng = &dropout;
    const ad::Tensor logits = model::mrfgat_forward(tape, batch->clouds, params, config, fwd);
    loss_sum += ad::cross_entropy_with_logits(logits, batch->labels).item() * static_cast<double>(batch->size());
    seen += batch->size();
  }
  return seen == 0 ? 0.0 : loss_sum / static_cast<double>(seen);
}

TrainHooks file_hooks(const std::string& checkpoint_dir, const std::string& log_path) {
  TrainHooks hooks;
  if (!checkpoint_dir.empty()) std::filesystem::create_directories(checkpoint_dir);
  hooks.on_epoch = [checkpoint_dir, log_path](const EpochLog& log, const Checkpoint& state) {
    if (!log_path.empty()) {
      std::ofstream out(log_path, std::ios::app);
      if (!out) throw TrainingError("cannot append to " + log_path);
      out << log.to_json() << '\n';
    }
    if (!checkpoint_dir.empty()) save_checkpoint(state, std::filesystem::path(checkpoint_dir) / "last.ckpt");
  };
  hooks.on_best = [checkpoint_dir](const Checkpoint& state) {
    if (!checkpoint_dir.empty()) save_checkpoint(state, std::filesystem::path(checkpoint_dir) / "best.ckpt");
  };
  return hooks;
}

}  // namespace mrfgat::train
