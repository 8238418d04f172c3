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
#include <vector>

#include "mrfgat/dataset/augment.hpp"
#include "mrfgat/dataset/cache.hpp"

namespace mrfgat::data {

struct Batch {
  std::vector<geo::PointCloud> clouds;
  std::vector<int> labels;
  /// Cache indices of the samples.
  std::vector<std::size_t> indices;

  std::size_t size() const { return clouds.size(); }
};

struct BatchOptions {
  std::size_t batch_size = 16;
  /// Absent: cache order.
  std::optional<std::uint64_t> shuffle_seed;
  /// Absent: clouds are returned as stored.
  std::optional<AugmentConfig> augment;
  std::uint64_t augment_seed = 0;
  /// Selects the shuffle and augmentation streams of this pass.
  std::uint64_t epoch = 0;
};

/// One pass over a split. The order is a shuffle seeded by (shuffle_seed,
/// epoch); sample i is augmented with the stream (augment_seed, epoch, i),
/// so batches do not depend on how they are consumed. The final partial
/// batch is kept.
class BatchIterator {
 public:
  /// ValidationError on an empty split or zero batch size.
  BatchIterator(const CacheFile& cache, Split split, BatchOptions options);

  std::size_t num_batches() const;
  std::size_t num_samples() const { return order_.size(); }
  /// Next batch, or nullopt after the last one.
  std::optional<Batch> next();

 private:
  const CacheFile* cache_;
  BatchOptions options_;
  std::vector<std::size_t> order_;
  std::size_t pos_ = 0;
};

}  // namespace mrfgat::data
