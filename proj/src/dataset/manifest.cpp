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

#include "mrfgat/dataset/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mrfgat/errors.hpp"
#include "mrfgat/rng.hpp"

namespace mrfgat::data {

namespace fs = std::filesystem;

const char* split_name(Split split) { return split == Split::Train ? "train" : "test"; }

std::size_t Manifest::count(Split split) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [split](const ManifestEntry& e) { return e.split == split; }));
}

Manifest scan_manifest(const fs::path& raw_root) {
  if (!fs::is_directory(raw_root)) throw ValidationError("not a directory: " + raw_root.string());
  Manifest m;
  for (const auto& dir : fs::directory_iterator(raw_root)) {
    if (dir.is_directory()) m.class_names.push_back(dir.path().filename().string());
  }
  std::sort(m.class_names.begin(), m.class_names.end());
  for (std::size_t c = 0; c < m.class_names.size(); ++c) {
    for (Split split : {Split::Train, Split::Test}) {
      const fs::path sub = raw_root / m.class_names[c] / split_name(split);
      if (!fs::is_directory(sub)) continue;
      std::vector<fs::path> files;
      for (const auto& f : fs::directory_iterator(sub)) {
        if (f.is_regular_file() && f.path().extension() == ".off") files.push_back(f.path());
      }
      std::sort(files.begin(), files.end());
      for (auto& f : files) m.entries.push_back({std::move(f), m.class_names[c], static_cast<int>(c), split});
    }
  }
  if (m.entries.empty()) throw ValidationError("no .off meshes under " + raw_root.string());
  return m;
}

Manifest stratified_subset(const Manifest& manifest, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("subset fraction must lie in (0, 1]");
  std::map<std::pair<int, Split>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    groups[{manifest.entries[i].label, manifest.entries[i].split}].push_back(i);
  }
  std::vector<std::size_t> keep;
  for (auto& [key, idx] : groups) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(key.first), static_cast<std::uint64_t>(key.second)}));
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * idx.size())));
    keep.insert(keep.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(std::min(n, idx.size())));
  }
  std::sort(keep.begin(), keep.end());
  Manifest out;
  out.class_names = manifest.class_names;
  for (std::size_t i : keep) out.entries.push_back(manifest.entries[i]);
  return out;
}

}  // namespace mrfgat::data
