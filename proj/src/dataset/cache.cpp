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

#include "mrfgat/dataset/cache.hpp"

#include "mrfgat/binary_io.hpp"
#include "mrfgat/dataset/off.hpp"
#include "mrfgat/errors.hpp"
#include "mrfgat/rng.hpp"

namespace mrfgat::data {

namespace {
constexpr std::string_view kMagic = "MRFG";
}

std::vector<std::size_t> CacheFile::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    if (splits[i] == split) out.push_back(i);
  }
  return out;
}

std::string encode_cache(const CacheFile& cache) {
  if (cache.clouds.size() != cache.splits.size()) throw ContractError("encode_cache: one split tag per cloud");
  io::ByteWriter w;
  w.raw(kMagic);
  w.u16(CacheFile::kVersion);
  w.u32(cache.point_count);
  w.u32(static_cast<std::uint32_t>(cache.clouds.size()));
  w.u32(static_cast<std::uint32_t>(cache.class_names.size()));
  for (const auto& name : cache.class_names) w.str(name);
  for (std::size_t i = 0; i < cache.clouds.size(); ++i) {
    const geo::PointCloud& pc = cache.clouds[i];
    if (pc.size() != cache.point_count || !pc.label) {
      throw ContractError("encode_cache: sample " + std::to_string(i) + " has " + std::to_string(pc.size()) +
                          " points or no label");
    }
    w.u32(static_cast<std::uint32_t>(*pc.label));
    w.u8(static_cast<std::uint8_t>(cache.splits[i]));
    for (const auto& p : pc.points) w.f64s(p);
  }
  return w.take();
}

CacheFile decode_cache(std::string_view bytes) {
  io::ByteReader r(bytes);
  r.section("cache header");
  if (r.raw(4) != kMagic) throw LoadError("not a sample cache (bad magic)");
  const std::uint16_t version = r.u16();
  if (version != CacheFile::kVersion) {
    throw LoadError("unsupported cache version " + std::to_string(version) + " (expected " +
                    std::to_string(CacheFile::kVersion) + ")");
  }
  CacheFile cache;
  cache.point_count = r.u32();
  const std::uint32_t samples = r.u32();
  const std::uint32_t classes = r.u32();
  r.section("cache class map");
  for (std::uint32_t c = 0; c < classes; ++c) cache.class_names.push_back(r.str());
  // Each record is 5 + 24 * point_count bytes; reject impossible counts
  // before allocating.
  const std::size_t record = 5 + 24 * static_cast<std::size_t>(cache.point_count);
  if (r.remaining() != record * samples) {
    throw LoadError("cache body is " + std::to_string(r.remaining()) + " bytes, header implies " +
                    std::to_string(record * samples));
  }
  cache.clouds.reserve(samples);
  cache.splits.reserve(samples);
  for (std::uint32_t s = 0; s < samples; ++s) {
    r.section("cache sample " + std::to_string(s));
    const std::uint32_t label = r.u32();
    const std::uint8_t split = r.u8();
    if (label >= classes) throw LoadError("cache sample " + std::to_string(s) + " has label " + std::to_string(label));
    if (split > 1) throw LoadError("cache sample " + std::to_string(s) + " has split tag " + std::to_string(split));
    geo::PointCloud pc;
    pc.label = static_cast<int>(label);
    pc.points.resize(cache.point_count);
    for (auto& p : pc.points) {
      for (double& c : p) c = r.f64();
    }
    cache.clouds.push_back(std::move(pc));
    cache.splits.push_back(static_cast<Split>(split));
  }
  return cache;
}

void write_cache(const CacheFile& cache, const std::filesystem::path& path) {
  io::write_file_atomic(path, encode_cache(cache));
}

CacheFile read_cache(const std::filesystem::path& path) { return decode_cache(io::read_file(path)); }

BuildResult build_cache(const Manifest& manifest, std::size_t points, std::uint64_t seed) {
  if (points == 0) throw ValidationError("build_cache: point count must be positive");
  BuildResult out;
  out.cache.point_count = static_cast<std::uint32_t>(points);
  out.cache.class_names = manifest.class_names;
  for (const auto& name : manifest.class_names) out.summary.per_class[name] = {0, 0};
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& e = manifest.entries[i];
    geo::PointCloud pc;
    try {
      const OffMesh mesh = read_off(e.path);
      out.summary.degenerate_faces += mesh.degenerate_faces;
      Rng rng(derive_seed(seed, {i}));
      pc = geo::normalize_unit_sphere(geo::sample_surface(mesh.mesh, points, rng));
    } catch (const std::exception& ex) {
      out.summary.skipped.push_back({e.path, ex.what()});
      continue;
    }
    pc.label = e.label;
    out.cache.clouds.push_back(std::move(pc));
    out.cache.splits.push_back(e.split);
    auto& counts = out.summary.per_class[e.class_name];
    if (e.split == Split::Train) {
      ++counts.first;
      ++out.summary.train;
    } else {
      ++counts.second;
      ++out.summary.test;
    }
  }
  return out;
}

}  // namespace mrfgat::data
