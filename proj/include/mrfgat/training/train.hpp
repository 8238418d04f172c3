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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrfgat/dataset/cache.hpp"
#include "mrfgat/training/checkpoint.hpp"
#include "mrfgat/training/metrics.hpp"

namespace mrfgat::train {

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double loss = 0.0;      // mean over training samples
  double train_acc = 0.0;
  std::optional<double> test_oa;
  std::optional<double> test_ma;
  double lr = 0.0;
  double wall_time = 0.0;  // seconds spent in this epoch

  /// One JSON object without a trailing newline; absent metrics are null.
  std::string to_json() const;
};

/// Fresh run: initialized weights, empty optimizer state.
Checkpoint initial_checkpoint(const ExperimentConfig& experiment);

struct TrainHooks {
  /// Called after every epoch with the updated state.
  std::function<void(const EpochLog&, const Checkpoint&)> on_epoch;
  /// Called when test OA improves.
  std::function<void(const Checkpoint&)> on_best;
  /// Stop after this many completed epochs even if more are configured.
  std::optional<std::size_t> stop_after;
};

/// Continues `state` from its completed-epoch counter up to
/// state.experiment.train.epochs. Each epoch shuffles and augments the train
/// split, runs train-mode forward, cross-entropy, backward and one Adam step
/// per batch. Shuffle, augmentation and dropout streams derive from
/// (seed, epoch, ...), so resuming from a saved state reproduces the
/// uninterrupted run exactly. Throws ValidationError on a class-count
/// mismatch and TrainingError on a non-finite loss.
std::vector<EpochLog> train(const data::CacheFile& cache, Checkpoint& state, const TrainHooks& hooks = {});

/// Mean train-mode loss of `state` over the batches, augmentations and
/// dropout masks that training epoch `epoch` (0-based) would use, without
/// updating anything.
double epoch_objective(const data::CacheFile& cache, const Checkpoint& state, std::size_t epoch);

/// Writes last.ckpt every epoch and best.ckpt on improvement into
/// `checkpoint_dir` (when non-empty), and appends JSON lines to `log_path`
/// (when non-empty).
TrainHooks file_hooks(const std::string& checkpoint_dir, const std::string& log_path);

}  // namespace mrfgat::train
