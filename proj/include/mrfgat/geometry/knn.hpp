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
#include <span>
#include <vector>

#include "mrfgat/geometry/point_cloud.hpp"

namespace mrfgat::geo {

/// Directed k-nearest-neighbor graph. Row i lists point i itself first, then
/// the remaining k-1 nearest points by ascending Euclidean distance with ties
/// going to the lower point index. Edge vectors are p_i - p_neighbor.
struct NeighborGraph {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::uint32_t> indices;  // n * k
  std::vector<double> edges;           // n * k * 3

  std::span<const std::uint32_t> row(std::size_t i) const { return {indices.data() + i * k, k}; }
  std::uint32_t neighbor(std::size_t i, std::size_t j) const { return indices[i * k + j]; }
  Vec3 edge(std::size_t i, std::size_t j) const {
    const double* e = edges.data() + (i * k + j) * 3;
    return {e[0], e[1], e[2]};
  }
  bool operator==(const NeighborGraph&) const = default;
};

enum class KnnBackend { BruteForce, KdTree };

NeighborGraph knn_graph_bruteforce(const PointCloud& pc, std::size_t k);
NeighborGraph knn_graph_indexed(const PointCloud& pc, std::size_t k);
NeighborGraph knn_graph(const PointCloud& pc, std::size_t k, KnnBackend backend = KnnBackend::KdTree);

/// Static 3-d tree over a point set. Immutable after construction.
class KdTree {
 public:
  explicit KdTree(std::span<const Vec3> points, std::size_t leaf_size = 8);

  /// The `count` nearest points to points[query], excluding `query` itself,
  /// ordered by (squared distance, index).
  std::vector<std::uint32_t> nearest_excluding_self(std::uint32_t query, std::size_t count) const;

 private:
  struct Node {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int axis = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);

  std::span<const Vec3> points_;
  std::size_t leaf_size_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace mrfgat::geo
