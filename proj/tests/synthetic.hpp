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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "mrfgat/geometry/point_cloud.hpp"
#include "mrfgat/rng.hpp"

namespace mrfgat::testing {

inline geo::TriangleMesh uv_sphere(double radius, int rings = 8, int segments = 12) {
  geo::TriangleMesh m;
  m.vertices.push_back({0, 0, radius});
  for (int r = 1; r < rings; ++r) {
    const double theta = std::numbers::pi * r / rings;
    for (int s = 0; s < segments; ++s) {
      const double phi = 2 * std::numbers::pi * s / segments;
      m.vertices.push_back(
          {radius * std::sin(theta) * std::cos(phi), radius * std::sin(theta) * std::sin(phi), radius * std::cos(theta)});
    }
  }
  m.vertices.push_back({0, 0, -radius});
  const auto bottom = static_cast<std::uint32_t>(m.vertices.size() - 1);
  auto ring = [segments](int r, int s) { return static_cast<std::uint32_t>(1 + (r - 1) * segments + (s % segments)); };
  for (int s = 0; s < segments; ++s) m.faces.push_back({0, ring(1, s), ring(1, s + 1)});
  for (int r = 1; r + 1 < rings; ++r) {
    for (int s = 0; s < segments; ++s) {
      m.faces.push_back({ring(r, s), ring(r + 1, s), ring(r + 1, s + 1)});
      m.faces.push_back({ring(r, s), ring(r + 1, s + 1), ring(r, s + 1)});
    }
  }
  for (int s = 0; s < segments; ++s) m.faces.push_back({ring(rings - 1, s), bottom, ring(rings - 1, s + 1)});
  return m;
}

inline geo::TriangleMesh box(double sx, double sy, double sz) {
  geo::TriangleMesh m;
  for (int i = 0; i < 8; ++i) m.vertices.push_back({(i & 1 ? sx : -sx), (i & 2 ? sy : -sy), (i & 4 ? sz : -sz)});
  const std::uint32_t quads[6][4] = {{0, 1, 3, 2}, {4, 6, 7, 5}, {0, 4, 5, 1}, {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 5, 7, 3}};
  for (const auto& q : quads) {
    m.faces.push_back({q[0], q[1], q[2]});
    m.faces.push_back({q[0], q[2], q[3]});
  }
  return m;
}

inline void write_off(const geo::TriangleMesh& m, const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  out.precision(17);
  out << "OFF\n" << m.vertices.size() << ' ' << m.faces.size() << " 0\n";
  for (const auto& v : m.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& f : m.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

/// raw/<class>/<split>/<name>.off with spheres and boxes of random
/// proportions: `per_split` train and test meshes per class.
inline void write_sphere_box_tree(const std::filesystem::path& root, int train, int test, std::uint64_t seed) {
  Rng rng(seed);
  for (const char* split : {"train", "test"}) {
    const int count = std::string(split) == "train" ? train : test;
    for (int i = 0; i < count; ++i) {
      const std::string name = std::to_string(i) + ".off";
      write_off(uv_sphere(uniform(rng, 0.5, 2.0)), root / "sphere" / split / ("sphere_" + name));
      write_off(box(uniform(rng, 0.5, 1.5), uniform(rng, 0.5, 1.5), uniform(rng, 0.5, 1.5)),
                root / "box" / split / ("box_" + name));
    }
  }
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mrfgat_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace mrfgat::testing
