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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "mrfgat/autodiff/adam.hpp"
#include "mrfgat/model/params.hpp"
#include "mrfgat/training/experiment.hpp"

namespace mrfgat::train {

/// Where a run stands. All randomness is derived from (seed, epoch, ...), so
/// the seed and the epoch counter are the complete generator state.
struct TrainProgress {
  std::uint64_t epochs_done = 0;
  std::uint64_t seed = 0;
  /// Negative until the first evaluation.
  double best_oa = -1.0;
  std::uint64_t best_epoch = 0;

  bool operator==(const TrainProgress&) const = default;
};

struct Checkpoint {
  static constexpr std::uint16_t kVersion = 1;

  ExperimentConfig experiment;
  model::NetworkParams params;
  ad::AdamState adam;
  TrainProgress progress;
};

/// Byte layout (little-endian): "MRFC", u16 version, then tagged sections,
/// each a 4-byte tag, u64 payload length and payload, in this order:
///   CONF  experiment config as key-value text (u32 length + bytes)
///   PARM  u32 count; per parameter: name, u32 rank, u64 extents, f64 values
///   BNST  u32 count; per batch norm: name, u64 channels, f64 momentum,
///         f64 eps, f64 running means, f64 running variances
///   ADAM  f64 lr, beta1, beta2, eps; u64 step; u32 count; per parameter:
///         u64 length, f64 first moments, f64 second moments
///   TRST  u64 epochs done, u64 seed, f64 best OA, u64 best epoch
///   END   empty
std::string encode_checkpoint(const Checkpoint& ckpt);
/// LoadError on bad magic, version mismatch, truncation (naming the section
/// that is cut short or missing), or parameters that do not fit the config.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mrfgat::train
