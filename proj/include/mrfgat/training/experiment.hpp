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
#include <cstdint>
#include <string>
#include <vector>

#include "mrfgat/dataset/augment.hpp"
#include "mrfgat/model/config.hpp"

namespace mrfgat::train {

struct TrainConfig {
  std::size_t epochs = 250;
  std::size_t batch_size = 16;
  double learning_rate = 1e-3;
  /// The rate is multiplied by lr_decay every lr_decay_every epochs; 0
  /// disables the schedule.
  double lr_decay = 0.7;
  std::size_t lr_decay_every = 20;
  std::uint64_t seed = 1;
  /// Test-split evaluation every this many epochs (and after the last); 0
  /// disables evaluation.
  std::size_t eval_every = 1;
  bool augment = true;
  data::AugmentConfig augmentation;
  std::string cache_path;
  std::string checkpoint_dir;
  std::string log_path;

  /// Learning rate used during `epoch` (0-based).
  double lr_at(std::size_t epoch) const;
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct ExperimentConfig {
  model::MRFGATConfig model;
  TrainConfig train;

  bool operator==(const ExperimentConfig&) const = default;
};

std::vector<std::string> preset_names();
/// modelnet40-default, modelnet10-default or reduced; ValidationError
/// otherwise.
ExperimentConfig preset(const std::string& name);

/// All model and training keys. Model keys as in model::to_key_values;
/// training keys: epochs, batch_size, learning_rate, lr_decay,
/// lr_decay_every, seed, eval_every, augment, rotate, scale_low, scale_high,
/// jitter_sigma, jitter_clip, cache, checkpoint_dir, log.
model::KeyValues to_key_values(const ExperimentConfig& config);
/// Starts from the `preset` key if present (else the defaults) and applies
/// every other key. Unknown keys are a ValidationError.
ExperimentConfig experiment_from_key_values(const model::KeyValues& kv);

/// A preset name or a path to a key-value file.
ExperimentConfig load_experiment(const std::string& name_or_path);
std::string format_experiment(const ExperimentConfig& config);

}  // namespace mrfgat::train
