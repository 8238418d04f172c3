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
#include <vector>

#include "mrfgat/geometry/point_cloud.hpp"
#include "mrfgat/rng.hpp"

namespace mrfgat::testing {

inline std::vector<double> random_vector(std::size_t n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * uniform(rng, -1.0, 1.0);
  return v;
}

inline geo::PointCloud random_cloud(std::size_t n, Rng& rng) {
  geo::PointCloud pc;
  pc.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pc.points.push_back({uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)});
  return pc;
}

}  // namespace mrfgat::testing
