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

#include "mrfgat/geometry/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrfgat/errors.hpp"

namespace mrfgat::geo {

std::vector<double> PointCloud::flat() const {
  std::vector<double> out;
  out.reserve(points.size() * 3);
  for (const Vec3& p : points) out.insert(out.end(), p.begin(), p.end());
  return out;
}

PointCloud PointCloud::from_flat(const std::vector<double>& xyz, std::optional<int> label) {
  if (xyz.size() % 3 != 0) throw DimensionError("point buffer length is not a multiple of 3");
  PointCloud pc;
  pc.label = label;
  pc.points.resize(xyz.size() / 3);
  for (std::size_t i = 0; i < pc.points.size(); ++i) {
    pc.points[i] = {xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]};
  }
  return pc;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const Vec3 v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const Vec3 cross{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  return 0.5 * std::sqrt(cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]);
}

PointCloud normalize_unit_sphere(const PointCloud& pc) {
  if (pc.points.empty()) throw ValidationError("normalize_unit_sphere: empty point cloud");
  Vec3 centroid{0.0, 0.0, 0.0};
  for (const Vec3& p : pc.points) {
    for (int a = 0; a < 3; ++a) {
      if (!std::isfinite(p[a])) throw ValidationError("normalize_unit_sphere: non-finite coordinate");
      centroid[a] += p[a];
    }
  }
  const double n = static_cast<double>(pc.points.size());
  for (double& c : centroid) c /= n;

  PointCloud out;
  out.label = pc.label;
  out.points.reserve(pc.points.size());
  double max_norm = 0.0;
  for (const Vec3& p : pc.points) {
    const Vec3 q{p[0] - centroid[0], p[1] - centroid[1], p[2] - centroid[2]};
    max_norm = std::max(max_norm, std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2]));
    out.points.push_back(q);
  }
  if (!(max_norm > 0.0)) throw DegenerateInputError("normalize_unit_sphere: all points coincide");
  for (Vec3& q : out.points) {
    for (double& c : q) c /= max_norm;
  }
  return out;
}

PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, Rng& rng) {
  std::vector<double> cumulative;
  cumulative.reserve(mesh.faces.size());
  double total = 0.0;
  for (const auto& f : mesh.faces) {
    for (std::uint32_t idx : f) {
      if (idx >= mesh.vertices.size()) {
        throw ValidationError("sample_surface: face index " + std::to_string(idx) + " out of range");
      }
    }
    total += triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw DegenerateInputError("sample_surface: mesh has zero surface area");

  PointCloud pc;
  pc.points.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double target = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    const auto& f = mesh.faces[static_cast<std::size_t>(it - cumulative.begin())];
    double r1 = uniform01(rng);
    double r2 = uniform01(rng);
    if (r1 + r2 > 1.0) {
      r1 = 1.0 - r1;
      r2 = 1.0 - r2;
    }
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    Vec3 p;
    for (int k = 0; k < 3; ++k) p[k] = a[k] + r1 * (b[k] - a[k]) + r2 * (c[k] - a[k]);
    pc.points.push_back(p);
  }
  return pc;
}

}  // namespace mrfgat::geo
