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

#include "mrfgat/dataset/batch.hpp"

#include <algorithm>

#include "mrfgat/errors.hpp"

namespace mrfgat::data {

BatchIterator::BatchIterator(const CacheFile& cache, Split split, BatchOptions options)
    : cache_(&cache), options_(std::move(options)), order_(cache.indices(split)) {
  if (options_.batch_size == 0) throw ValidationError("batch size must be at least 1");
  if (order_.empty()) throw ValidationError(std::string("cache has no ") + split_name(split) + " samples");
  if (options_.augment) options_.augment->validate();
  if (options_.shuffle_seed) {
    Rng rng(derive_seed(*options_.shuffle_seed, {options_.epoch}));
    for (std::size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[uniform_index(rng, i)]);
  }
}

std::size_t BatchIterator::num_batches() const {
  return (order_.size() + options_.batch_size - 1) / options_.batch_size;
}

std::optional<Batch> BatchIterator::next() {
  if (pos_ >= order_.size()) return std::nullopt;
  const std::size_t end = std::min(order_.size(), pos_ + options_.batch_size);
  Batch batch;
  for (; pos_ < end; ++pos_) {
    const std::size_t idx = order_[pos_];
    const geo::PointCloud& pc = cache_->clouds[idx];
    if (options_.augment) {
      Rng rng(derive_seed(options_.augment_seed, {options_.epoch, idx}));
      batch.clouds.push_back(augment(pc, *options_.augment, rng));
    } else {
      batch.clouds.push_back(pc);
    }
    batch.labels.push_back(*pc.label);
    batch.indices.push_back(idx);
  }
  return batch;
}

}  // namespace mrfgat::data
