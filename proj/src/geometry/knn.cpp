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

#include "mrfgat/geometry/knn.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "mrfgat/errors.hpp"

namespace mrfgat::geo {

namespace {

// (squared distance, index); lexicographic order is the neighbor order.
using Candidate = std::pair<double, std::uint32_t>;

void check_k(const PointCloud& pc, std::size_t k) {
  if (pc.points.empty()) throw ValidationError("knn: empty point cloud");
  if (k < 1 || k > pc.size()) {
    throw ValidationError("knn: k=" + std::to_string(k) + " must lie in [1, " +
                          std::to_string(pc.size()) + "]");
  }
}

NeighborGraph make_graph(const PointCloud& pc, std::size_t k) {
  NeighborGraph g;
  g.n = pc.size();
  g.k = k;
  g.indices.resize(g.n * k);
  g.edges.resize(g.n * k * 3);
  return g;
}

void fill_row(NeighborGraph& g, const PointCloud& pc, std::size_t i,
              std::span<const std::uint32_t> others) {
  const std::size_t k = g.k;
  g.indices[i * k] = static_cast<std::uint32_t>(i);
  std::copy(others.begin(), others.end(), g.indices.begin() + static_cast<std::ptrdiff_t>(i * k + 1));
  const Vec3& p = pc.points[i];
  for (std::size_t j = 0; j < k; ++j) {
    const Vec3& q = pc.points[g.indices[i * k + j]];
    double* e = g.edges.data() + (i * k + j) * 3;
    for (int a = 0; a < 3; ++a) e[a] = p[a] - q[a];
  }
}

}  // namespace

NeighborGraph knn_graph_bruteforce(const PointCloud& pc, std::size_t k) {
  check_k(pc, k);
  NeighborGraph g = make_graph(pc, k);
  const std::size_t n = pc.size();
  std::vector<Candidate> candidates;
  std::vector<std::uint32_t> others(k - 1);
  for (std::size_t i = 0; i < n; ++i) {
    candidates.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      candidates.emplace_back(squared_distance(pc.points[i], pc.points[j]), static_cast<std::uint32_t>(j));
    }
    const auto mid = candidates.begin() + static_cast<std::ptrdiff_t>(k - 1);
    std::partial_sort(candidates.begin(), mid, candidates.end());
    for (std::size_t j = 0; j + 1 < k; ++j) others[j] = candidates[j].second;
    fill_row(g, pc, i, others);
  }
  return g;
}

KdTree::KdTree(std::span<const Vec3> points, std::size_t leaf_size)
    : points_(points), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  order_.resize(points.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points.empty()) build(0, static_cast<std::uint32_t>(points.size()));
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, 0, 0.0});
  if (end - begin <= leaf_size_) return id;

  Vec3 lo = points_[order_[begin]];
  Vec3 hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    const Vec3& p = points_[order_[i]];
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  if (hi[axis] == lo[axis]) return id;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return points_[a][axis] < points_[b][axis]; });
  // Left holds coordinates <= split, right holds coordinates >= split.
  const double split = points_[order_[mid]][axis];
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<std::uint32_t> KdTree::nearest_excluding_self(std::uint32_t query, std::size_t count) const {
  std::vector<std::uint32_t> out;
  if (count == 0) return out;
  const Vec3& q = points_[query];
  std::priority_queue<Candidate> heap;  // max-heap: top is the current worst

  auto consider = [&](std::uint32_t idx) {
    if (idx == query) return;
    const Candidate c{squared_distance(q, points_[idx]), idx};
    if (heap.size() < count) {
      heap.push(c);
    } else if (c < heap.top()) {
      heap.pop();
      heap.push(c);
    }
  };

  auto visit = [&](auto&& self, std::int32_t node_id) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) consider(order_[i]);
      return;
    }
    const double diff = q[node.axis] - node.split;
    const std::int32_t near = diff < 0.0 ? node.left : node.right;
    const std::int32_t far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    // A far-side point may still tie the current worst at equal distance with
    // a lower index, so only a strictly larger bound prunes.
    if (heap.size() < count || diff * diff <= heap.top().first) self(self, far);
  };
  visit(visit, 0);

  out.resize(heap.size());
  for (std::size_t i = heap.size(); i-- > 0;) {
    out[i] = heap.top().second;
    heap.pop();
  }
  return out;
}

NeighborGraph knn_graph_indexed(const PointCloud& pc, std::size_t k) {
  check_k(pc, k);
  NeighborGraph g = make_graph(pc, k);
  const KdTree tree(pc.points);
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const auto others = tree.nearest_excluding_self(static_cast<std::uint32_t>(i), k - 1);
    fill_row(g, pc, i, others);
  }
  return g;
}

NeighborGraph knn_graph(const PointCloud& pc, std::size_t k, KnnBackend backend) {
  return backend == KnnBackend::BruteForce ? knn_graph_bruteforce(pc, k) : knn_graph_indexed(pc, k);
}

}  // namespace mrfgat::geo
