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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include "mrfgat/errors.hpp"
#include "mrfgat/geometry/knn.hpp"
#include "mrfgat/geometry/point_cloud.hpp"
#include "test_util.hpp"

namespace mrfgat::geo {
namespace {

using mrfgat::testing::random_cloud;

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

TEST(NormalizeTest, HandExamples) {
  PointCloud a{{{-1, 0, 0}, {1, 0, 0}}, {}};
  const PointCloud na = normalize_unit_sphere(a);
  EXPECT_EQ(na.points[0], (Vec3{-1, 0, 0}));
  EXPECT_EQ(na.points[1], (Vec3{1, 0, 0}));

  PointCloud b{{{0, 0, 0}, {0, 0, 4}}, 3};
  const PointCloud nb = normalize_unit_sphere(b);
  EXPECT_EQ(nb.points[0], (Vec3{0, 0, -1}));
  EXPECT_EQ(nb.points[1], (Vec3{0, 0, 1}));
  EXPECT_EQ(nb.label, 3);
}

TEST(NormalizeTest, RandomCloudsSatisfyInvariants) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    PointCloud pc = random_cloud(1 + uniform_index(rng, 200), rng);
    if (pc.size() == 1) pc.points.push_back({5, 5, 5});
    for (auto& p : pc.points) {
      for (double& c : p) c = 30.0 * c + 7.0;
    }
    const PointCloud out = normalize_unit_sphere(pc);
    Vec3 centroid{0, 0, 0};
    double max_norm = 0.0;
    for (const auto& p : out.points) {
      for (int a = 0; a < 3; ++a) centroid[a] += p[a] / static_cast<double>(out.size());
      max_norm = std::max(max_norm, norm(p));
    }
    EXPECT_LT(norm(centroid), 1e-9);
    EXPECT_GE(max_norm, 1.0 - 1e-9);
    EXPECT_LE(max_norm, 1.0 + 1e-15);
  }
}

TEST(NormalizeTest, CoincidentPointsAreDegenerate) {
  PointCloud pc{{{2, 2, 2}, {2, 2, 2}}, {}};
  EXPECT_THROW(normalize_unit_sphere(pc), DegenerateInputError);
  EXPECT_THROW(normalize_unit_sphere(PointCloud{}), ValidationError);
}

TEST(SampleSurfaceTest, SamplesStayInsideTriangle) {
  TriangleMesh mesh{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}}};
  Rng rng(8);
  const PointCloud pc = sample_surface(mesh, 5000, rng);
  ASSERT_EQ(pc.size(), 5000u);
  for (const auto& p : pc.points) {
    // Barycentric coordinates of (x, y) in the unit right triangle are (x, y).
    EXPECT_GE(p[0], 0.0);
    EXPECT_GE(p[1], 0.0);
    EXPECT_LE(p[0] + p[1], 1.0 + 1e-12);
    EXPECT_EQ(p[2], 0.0);
  }
}

TEST(SampleSurfaceTest, AreaProportionalSelection) {
  // Areas 1 and 3, separated in z so each sample's triangle is identifiable.
  TriangleMesh mesh{{{0, 0, 0}, {2, 0, 0}, {0, 1, 0}, {0, 0, 5}, {3, 0, 5}, {0, 2, 5}}, {{0, 1, 2}, {3, 4, 5}}};
  Rng rng(12);
  const std::size_t n = 100000;
  const PointCloud pc = sample_surface(mesh, n, rng);
  const auto large = std::count_if(pc.points.begin(), pc.points.end(), [](const Vec3& p) { return p[2] > 2.5; });
  // Binomial(1e5, 0.75) has standard deviation ~0.00137; 0.01 is > 7 sigma.
  EXPECT_NEAR(static_cast<double>(large) / n, 0.75, 0.01);
}

TEST(SampleSurfaceTest, SameSeedSameCloud) {
  TriangleMesh mesh{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  Rng a(77);
  Rng b(77);
  EXPECT_EQ(sample_surface(mesh, 256, a).points, sample_surface(mesh, 256, b).points);
}

TEST(SampleSurfaceTest, ZeroAreaRejected) {
  TriangleMesh mesh{{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}}};
  Rng rng(1);
  EXPECT_THROW(sample_surface(mesh, 10, rng), DegenerateInputError);
}

TEST(KnnTest, CollinearHandExample) {
  PointCloud pc{{{0, 0, 0}, {1, 0, 0}, {3, 0, 0}}, {}};
  for (auto backend : {KnnBackend::BruteForce, KnnBackend::KdTree}) {
    const NeighborGraph g = knn_graph(pc, 2, backend);
    EXPECT_EQ(g.neighbor(0, 0), 0u);
    EXPECT_EQ(g.neighbor(0, 1), 1u);
    EXPECT_EQ(g.edge(0, 1), (Vec3{-1, 0, 0}));
    EXPECT_EQ(g.neighbor(2, 1), 1u);
  }
}

TEST(KnnTest, SelfOnlyAndExhaustive) {
  Rng rng(2);
  const PointCloud pc = random_cloud(20, rng);
  for (auto backend : {KnnBackend::BruteForce, KnnBackend::KdTree}) {
    const NeighborGraph one = knn_graph(pc, 1, backend);
    for (std::size_t i = 0; i < pc.size(); ++i) {
      EXPECT_EQ(one.neighbor(i, 0), i);
      EXPECT_EQ(one.edge(i, 0), (Vec3{0, 0, 0}));
    }
    const NeighborGraph all = knn_graph(pc, pc.size(), backend);
    for (std::size_t i = 0; i < pc.size(); ++i) {
      std::vector<std::uint32_t> row(all.row(i).begin(), all.row(i).end());
      std::sort(row.begin(), row.end());
      std::vector<std::uint32_t> expected(pc.size());
      std::iota(expected.begin(), expected.end(), 0u);
      EXPECT_EQ(row, expected);
    }
  }
}

TEST(KnnTest, KLargerThanCloudRejected) {
  PointCloud pc{{{0, 0, 0}, {1, 0, 0}}, {}};
  EXPECT_THROW(knn_graph_bruteforce(pc, 3), ValidationError);
  EXPECT_THROW(knn_graph_indexed(pc, 3), ValidationError);
  EXPECT_THROW(knn_graph_indexed(pc, 0), ValidationError);
}

TEST(KnnTest, SelfFirstAndDistancesNonDecreasing) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud pc = random_cloud(100, rng);
    const NeighborGraph g = knn_graph_indexed(pc, 10);
    for (std::size_t i = 0; i < pc.size(); ++i) {
      EXPECT_EQ(g.neighbor(i, 0), i);
      EXPECT_EQ(g.edge(i, 0), (Vec3{0, 0, 0}));
      for (std::size_t j = 2; j < g.k; ++j) {
        const double prev = squared_distance(pc.points[i], pc.points[g.neighbor(i, j - 1)]);
        const double cur = squared_distance(pc.points[i], pc.points[g.neighbor(i, j)]);
        EXPECT_LE(prev, cur);
        if (prev == cur) EXPECT_LT(g.neighbor(i, j - 1), g.neighbor(i, j));
      }
    }
  }
}

TEST(KnnTest, IndexedMatchesBruteForceOnRandomClouds) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const PointCloud pc = random_cloud(64 + uniform_index(rng, 200), rng);
    const std::size_t k = 1 + uniform_index(rng, 32);
    ASSERT_EQ(knn_graph_indexed(pc, k), knn_graph_bruteforce(pc, k)) << "trial " << trial;
  }
}

TEST(KnnTest, IndexedMatchesBruteForceWithDuplicates) {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    // Points on a coarse lattice: many exact duplicates and distance ties.
    PointCloud pc;
    for (int i = 0; i < 200; ++i) {
      pc.points.push_back({static_cast<double>(uniform_index(rng, 3)), static_cast<double>(uniform_index(rng, 3)),
                           static_cast<double>(uniform_index(rng, 2))});
    }
    const std::size_t k = 1 + uniform_index(rng, 40);
    ASSERT_EQ(knn_graph_indexed(pc, k), knn_graph_bruteforce(pc, k)) << "trial " << trial;
  }
  PointCloud same;
  same.points.assign(50, Vec3{0.5, 0.5, 0.5});
  const NeighborGraph g = knn_graph_indexed(same, 5);
  EXPECT_EQ(g, knn_graph_bruteforce(same, 5));
  EXPECT_EQ(g.neighbor(0, 1), 1u);
  EXPECT_EQ(g.neighbor(7, 1), 0u);
}

TEST(KnnTest, PermutationEquivariance) {
  Rng rng(30);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud pc = random_cloud(128, rng);
    std::vector<std::uint32_t> perm(pc.size());
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
    PointCloud shuffled;
    for (std::uint32_t p : perm) shuffled.points.push_back(pc.points[p]);  // shuffled[i] = pc[perm[i]]
    const NeighborGraph g = knn_graph_indexed(pc, 12);
    const NeighborGraph h = knn_graph_indexed(shuffled, 12);
    for (std::size_t i = 0; i < pc.size(); ++i) {
      std::set<std::uint32_t> original(g.row(perm[i]).begin(), g.row(perm[i]).end());
      std::set<std::uint32_t> mapped;
      for (std::uint32_t j : h.row(i)) mapped.insert(perm[j]);
      EXPECT_EQ(original, mapped);
      for (std::size_t j = 0; j < 12; ++j) EXPECT_EQ(h.edge(i, j), g.edge(perm[i], j));
    }
  }
}

TEST(KnnTest, IndexedBackendTiming) {
  Rng rng(40);
  const PointCloud pc = random_cloud(1024, rng);
  const auto start = std::chrono::steady_clock::now();
  const NeighborGraph g = knn_graph_indexed(pc, 32);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(g.k, 32u);
  EXPECT_LT(ms, 100.0);
}

}  // namespace
}  // namespace mrfgat::geo
