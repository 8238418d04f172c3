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
#include <string>
#include <vector>

namespace mrfgat::data {

enum class Split : std::uint8_t { Train = 0, Test = 1 };

const char* split_name(Split split);

struct ManifestEntry {
  std::filesystem::path path;
  std::string class_name;
  int label = 0;
  Split split = Split::Train;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  /// Sorted; label i names class_names[i].
  std::vector<std::string> class_names;

  std::size_t count(Split split) const;
};

/// Scans raw_root/<class>/{train,test}/*.off. Classes are sorted by name,
/// entries by (class, split, file name). ValidationError if raw_root is not
/// a directory or holds no meshes.
Manifest scan_manifest(const std::filesystem::path& raw_root);

/// Keeps round(fraction * count), at least 1, of every (class, split) group,
/// chosen by a seeded shuffle; the result keeps manifest order.
Manifest stratified_subset(const Manifest& manifest, double fraction, std::uint64_t seed);

}  // namespace mrfgat::data
