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
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mrfgat/dataset/manifest.hpp"
#include "mrfgat/geometry/point_cloud.hpp"

namespace mrfgat::data {

/// Sampled, normalized clouds with labels and split tags.
///
/// Byte layout (all integers and reals little-endian):
///   "MRFG"  u16 version = 1
///   u32 point_count  u32 sample_count  u32 class_count
///   class_count x (u32 byte length, UTF-8 name)
///   sample_count x (u32 label, u8 split (0 train, 1 test), point_count x 3 f64)
struct CacheFile {
  static constexpr std::uint16_t kVersion = 1;

  std::uint32_t point_count = 0;
  std::vector<std::string> class_names;
  std::vector<geo::PointCloud> clouds;  // every cloud carries its label
  std::vector<Split> splits;

  std::size_t size() const { return clouds.size(); }
  std::size_t num_classes() const { return class_names.size(); }
  /// Sample indices of one split, in cache order.
  std::vector<std::size_t> indices(Split split) const;

  bool operator==(const CacheFile&) const = default;
};

std::string encode_cache(const CacheFile& cache);
/// LoadError on bad magic, unsupported version, truncation, trailing bytes,
/// or a label outside the class map.
CacheFile decode_cache(std::string_view bytes);

void write_cache(const CacheFile& cache, const std::filesystem::path& path);
CacheFile read_cache(const std::filesystem::path& path);

struct SkippedFile {
  std::filesystem::path path;
  std::string reason;
};

struct BuildSummary {
  /// class name -> (train count, test count)
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_class;
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t degenerate_faces = 0;
  std::vector<SkippedFile> skipped;
};

struct BuildResult {
  CacheFile cache;
  BuildSummary summary;
};

/// Samples `points` surface points from every manifest mesh and normalizes
/// them to the unit sphere. Mesh i uses the stream derive_seed(seed, {i}), so
/// the result does not depend on iteration order. Unreadable or degenerate
/// meshes are skipped and listed.
BuildResult build_cache(const Manifest& manifest, std::size_t points, std::uint64_t seed);

}  // namespace mrfgat::data
