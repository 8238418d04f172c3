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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mrfgat/rng.hpp"

namespace mrfgat::geo {

using Vec3 = std::array<double, 3>;

struct PointCloud {
  std::vector<Vec3> points;
  std::optional<int> label;

  std::size_t size() const { return points.size(); }
  /// Coordinates flattened row-major, N x 3.
  std::vector<double> flat() const;
  static PointCloud from_flat(const std::vector<double>& xyz, std::optional<int> label = {});

  bool operator==(const PointCloud&) const = default;
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> faces;
};

inline double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Centers the cloud at its centroid and scales the farthest point to norm 1.
/// Throws DegenerateInputError when every point coincides.
PointCloud normalize_unit_sphere(const PointCloud& pc);

/// Area-weighted surface sampling with uniform barycentric placement inside
/// each chosen triangle. Deterministic for a given generator state.
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, Rng& rng);

}  // namespace mrfgat::geo
