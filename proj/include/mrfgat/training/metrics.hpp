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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrfgat/dataset/cache.hpp"
#include "mrfgat/model/params.hpp"

namespace mrfgat::train {

struct Metrics {
  /// confusion[true][predicted]
  std::vector<std::vector<std::uint64_t>> confusion;
  double overall_accuracy = 0.0;
  double mean_class_accuracy = 0.0;
  /// Empty for classes without samples; those are left out of the mean.
  std::vector<std::optional<double>> per_class;
  std::vector<std::size_t> zero_support;

  std::uint64_t total() const;
};

/// Derives every field from the confusion matrix.
Metrics metrics_from_confusion(std::vector<std::vector<std::uint64_t>> confusion);

/// Tallies (label, prediction) pairs; ValidationError if either lies
/// outside [0, classes).
Metrics metrics_from_predictions(std::span<const int> labels, std::span<const int> predictions, std::size_t classes);

/// Index of the largest score, first on ties.
int argmax(std::span<const double> scores);

/// Infer-mode predictions over one split, in cache order. Works on a copy
/// of the parameters, so neither weights nor running statistics change.
/// ValidationError if the cache and model disagree on the class count.
std::vector<int> predict(const model::NetworkParams& params, const model::MRFGATConfig& config,
                         const data::CacheFile& cache, data::Split split, std::size_t batch_size = 16);

Metrics evaluate(const model::NetworkParams& params, const model::MRFGATConfig& config, const data::CacheFile& cache,
                 data::Split split, std::size_t batch_size = 16);

/// "OA=0.9250 MA=0.9010" followed by a per-class table.
std::string format_metrics(const Metrics& m, const std::vector<std::string>& class_names);

}  // namespace mrfgat::train
