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

#include <cmath>
#include <numeric>

#include "mrfgat/binary_io.hpp"
#include "mrfgat/dataset/augment.hpp"
#include "mrfgat/dataset/batch.hpp"
#include "mrfgat/dataset/cache.hpp"
#include "mrfgat/dataset/manifest.hpp"
#include "mrfgat/dataset/off.hpp"
#include "mrfgat/errors.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"

namespace mrfgat::data {
namespace {

namespace fs = std::filesystem;
const fs::path kFixtures = MRFGAT_FIXTURE_DIR;

TEST(OffTest, Tetrahedron) {
  const OffMesh m = read_off(kFixtures / "off" / "tetra.off");
  EXPECT_EQ(m.mesh.vertices.size(), 4u);
  EXPECT_EQ(m.mesh.faces.size(), 4u);
  EXPECT_EQ(m.degenerate_faces, 0u);
  EXPECT_EQ(m.mesh.faces[3], (std::array<std::uint32_t, 3>{1, 2, 3}));
}

TEST(OffTest, FusedHeaderMatchesSpacedHeader) {
  const OffMesh a = read_off(kFixtures / "off" / "tetra.off");
  const OffMesh b = read_off(kFixtures / "off" / "tetra_fused.off");
  EXPECT_EQ(a.mesh.vertices, b.mesh.vertices);
  EXPECT_EQ(a.mesh.faces, b.mesh.faces);
}

TEST(OffTest, QuadIsFanTriangulated) {
  const OffMesh m = read_off(kFixtures / "off" / "quad.off");
  ASSERT_EQ(m.mesh.faces.size(), 2u);
  EXPECT_EQ(m.mesh.faces[0], (std::array<std::uint32_t, 3>{0, 1, 2}));
  EXPECT_EQ(m.mesh.faces[1], (std::array<std::uint32_t, 3>{0, 2, 3}));
}

TEST(OffTest, DegenerateFacesDroppedAndCounted) {
  const OffMesh m = parse_off("OFF\n4 3 0\n0 0 0\n1 0 0\n2 0 0\n0 1 0\n3 0 1 2\n3 0 0 3\n3 0 1 3\n");
  EXPECT_EQ(m.mesh.faces.size(), 1u);
  EXPECT_EQ(m.degenerate_faces, 2u);
}

TEST(OffTest, ErrorsCarryLineNumbers) {
  auto line_of = [](const char* text) {
    try {
      parse_off(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("PLY\n"), 1u);
  EXPECT_EQ(line_of("OFF\n3 1 0\n0 0 0\n1 x 0\n0 1 0\n3 0 1 2\n"), 4u);
  EXPECT_EQ(line_of("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n"), 6u);
  EXPECT_EQ(line_of("OFF\n3 1 0\n0 0 0\n1 0 0\n"), 4u);
  EXPECT_EQ(line_of("OFF\n900000000 1 0\n0 0 0\n"), 3u);
  EXPECT_THROW(read_off(kFixtures / "off" / "missing.off"), LoadError);
}

class RawTreeTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = mrfgat::testing::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    mrfgat::testing::write_sphere_box_tree(root_ / "raw", 10, 4, 5);
  }
  fs::path root_;
};

TEST_F(RawTreeTest, ManifestIsSortedAndDense) {
  const Manifest m = scan_manifest(root_ / "raw");
  EXPECT_EQ(m.class_names, (std::vector<std::string>{"box", "sphere"}));
  EXPECT_EQ(m.count(Split::Train), 20u);
  EXPECT_EQ(m.count(Split::Test), 8u);
  for (const auto& e : m.entries) {
    EXPECT_EQ(m.class_names[static_cast<std::size_t>(e.label)], e.class_name);
    EXPECT_EQ(e.path.parent_path().filename().string(), split_name(e.split));
  }
  EXPECT_THROW(scan_manifest(root_ / "nope"), ValidationError);
}

TEST_F(RawTreeTest, StratifiedSubsetKeepsEveryGroup) {
  const Manifest m = scan_manifest(root_ / "raw");
  const Manifest s = stratified_subset(m, 0.3, 9);
  // round(0.3 * 10) = 3 train and round(0.3 * 4) = 1 test per class.
  EXPECT_EQ(s.count(Split::Train), 6u);
  EXPECT_EQ(s.count(Split::Test), 2u);
  const Manifest again = stratified_subset(m, 0.3, 9);
  ASSERT_EQ(again.entries.size(), s.entries.size());
  for (std::size_t i = 0; i < s.entries.size(); ++i) EXPECT_EQ(again.entries[i].path, s.entries[i].path);
  EXPECT_EQ(stratified_subset(m, 1.0, 1).entries.size(), m.entries.size());
  EXPECT_THROW(stratified_subset(m, 0.0, 1), ValidationError);
}

TEST_F(RawTreeTest, BuildCacheIsDeterministicAndNormalized) {
  const Manifest m = scan_manifest(root_ / "raw");
  const BuildResult a = build_cache(m, 128, 3);
  const BuildResult b = build_cache(m, 128, 3);
  EXPECT_EQ(encode_cache(a.cache), encode_cache(b.cache));
  EXPECT_NE(encode_cache(a.cache), encode_cache(build_cache(m, 128, 4).cache));
  EXPECT_EQ(a.summary.train, 20u);
  EXPECT_EQ(a.summary.test, 8u);
  EXPECT_EQ(a.summary.per_class.at("box"), (std::pair<std::size_t, std::size_t>{10, 4}));
  EXPECT_TRUE(a.summary.skipped.empty());
  for (const auto& pc : a.cache.clouds) {
    ASSERT_EQ(pc.size(), 128u);
    geo::Vec3 centroid{0, 0, 0};
    double max_norm = 0.0;
    for (const auto& p : pc.points) {
      for (int k = 0; k < 3; ++k) centroid[k] += p[k] / 128.0;
      max_norm = std::max(max_norm, std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    }
    EXPECT_LT(std::abs(centroid[0]) + std::abs(centroid[1]) + std::abs(centroid[2]), 1e-9);
    EXPECT_NEAR(max_norm, 1.0, 1e-12);
  }
}

TEST_F(RawTreeTest, CorruptMeshIsSkippedAndReported) {
  {
    std::ofstream bad(root_ / "raw" / "box" / "train" / "zz_bad.off");
    bad << "OFF\n3 1 0\n0 0 0\n1 0 0\n";
  }
  const BuildResult r = build_cache(scan_manifest(root_ / "raw"), 32, 1);
  ASSERT_EQ(r.summary.skipped.size(), 1u);
  EXPECT_EQ(r.summary.skipped[0].path.filename(), "zz_bad.off");
  EXPECT_EQ(r.summary.train, 20u);
}

CacheFile small_cache() {
  CacheFile c;
  c.point_count = 3;
  c.class_names = {"a", "b\xC3\xA9"};
  Rng rng(1);
  for (int i = 0; i < 5; ++i) {
    geo::PointCloud pc = mrfgat::testing::random_cloud(3, rng);
    pc.label = i % 2;
    c.clouds.push_back(pc);
    c.splits.push_back(i < 3 ? Split::Train : Split::Test);
  }
  return c;
}

TEST(CacheTest, ByteLayout) {
  CacheFile c;
  c.point_count = 1;
  c.class_names = {"ab"};
  c.clouds.push_back(geo::PointCloud{{{1.0, -2.0, 0.5}}, 0});
  c.splits.push_back(Split::Test);
  const std::string bytes = encode_cache(c);
  // 4 magic + 2 version + 12 counts + (4 + 2) name + (4 + 1 + 24) record.
  ASSERT_EQ(bytes.size(), 53u);
  EXPECT_EQ(bytes.substr(0, 6), std::string("MRFG\x01\x00", 6));
  EXPECT_EQ(bytes.substr(6, 12), std::string("\x01\0\0\0\x01\0\0\0\x01\0\0\0", 12));
  EXPECT_EQ(bytes.substr(18, 6), std::string("\x02\0\0\0ab", 6));
  EXPECT_EQ(bytes.substr(24, 5), std::string("\0\0\0\0\x01", 5));
  // 1.0 = 0x3FF0000000000000, stored low byte first.
  EXPECT_EQ(bytes.substr(29, 8), std::string("\0\0\0\0\0\0\xF0\x3F", 8));
}

TEST(CacheTest, RoundTripIsBitIdentical) {
  const CacheFile c = small_cache();
  const auto dir = mrfgat::testing::scratch_dir("cache_roundtrip");
  write_cache(c, dir / "c.bin");
  const CacheFile back = read_cache(dir / "c.bin");
  EXPECT_EQ(back, c);
  EXPECT_EQ(encode_cache(back), encode_cache(c));
  EXPECT_EQ(back.indices(Split::Test), (std::vector<std::size_t>{3, 4}));
}

TEST(CacheTest, CorruptionIsLoud) {
  const std::string bytes = encode_cache(small_cache());
  EXPECT_THROW(decode_cache(bytes.substr(0, bytes.size() - 1)), LoadError);
  EXPECT_THROW(decode_cache(bytes + "x"), LoadError);
  EXPECT_THROW(decode_cache(bytes.substr(0, 10)), LoadError);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_cache(bad_magic), LoadError);
  std::string bad_version = bytes;
  bad_version[4] = 2;
  EXPECT_THROW(decode_cache(bad_version), LoadError);
  std::string bad_label = bytes;
  // First record starts after header (18) and names (4+1, 4+3).
  bad_label[18 + 5 + 7] = 9;
  EXPECT_THROW(decode_cache(bad_label), LoadError);
}

TEST(AugmentTest, AllOffIsIdentity) {
  Rng rng(1);
  const geo::PointCloud pc = mrfgat::testing::random_cloud(50, rng);
  EXPECT_EQ(augment(pc, AugmentConfig::none(), rng).points, pc.points);
}

TEST(AugmentTest, RotationPreservesDistancesAndZ) {
  Rng rng(2);
  AugmentConfig cfg = AugmentConfig::none();
  cfg.rotate = true;
  for (int trial = 0; trial < 20; ++trial) {
    geo::PointCloud pc = mrfgat::testing::random_cloud(40, rng);
    pc.label = 3;
    const geo::PointCloud out = augment(pc, cfg, rng);
    EXPECT_EQ(out.label, 3);
    ASSERT_EQ(out.size(), pc.size());
    for (std::size_t i = 0; i < pc.size(); ++i) {
      EXPECT_EQ(out.points[i][2], pc.points[i][2]);
      for (std::size_t j = 0; j < i; ++j) {
        EXPECT_NEAR(std::sqrt(geo::squared_distance(out.points[i], out.points[j])),
                    std::sqrt(geo::squared_distance(pc.points[i], pc.points[j])), 1e-9);
      }
    }
  }
}

TEST(AugmentTest, ScaleStaysInRange) {
  Rng rng(3);
  AugmentConfig cfg = AugmentConfig::none();
  cfg.scale_low = 0.8;
  cfg.scale_high = 1.25;
  const geo::PointCloud pc{{{1, 0, 0}, {0, 2, 0}}, {}};
  for (int trial = 0; trial < 1000; ++trial) {
    const geo::PointCloud out = augment(pc, cfg, rng);
    const double s = out.points[0][0];
    EXPECT_GE(s, 0.8);
    EXPECT_LT(s, 1.25);
    EXPECT_DOUBLE_EQ(out.points[1][1], 2 * s);
  }
  cfg.scale_low = 0.0;
  EXPECT_THROW(augment(pc, cfg, rng), ValidationError);
}

TEST(AugmentTest, JitterStatistics) {
  AugmentConfig cfg = AugmentConfig::none();
  cfg.jitter_sigma = 0.01;
  cfg.jitter_clip = 0.05;
  Rng rng(4);
  geo::PointCloud zero;
  zero.points.assign(1000, geo::Vec3{0, 0, 0});
  double sum = 0.0;
  double sum_sq = 0.0;
  double max_abs = 0.0;
  std::size_t n = 0;
  // 334 clouds x 1000 points x 3 coordinates > 10^6 draws.
  for (int c = 0; c < 334; ++c) {
    for (const auto& p : augment(zero, cfg, rng).points) {
      for (double v : p) {
        sum += v;
        sum_sq += v * v;
        max_abs = std::max(max_abs, std::abs(v));
        ++n;
      }
    }
  }
  const double mean = sum / static_cast<double>(n);
  const double sd = std::sqrt(sum_sq / static_cast<double>(n) - mean * mean);
  EXPECT_NEAR(sd, 0.01, 0.0005);
  EXPECT_LE(max_abs, 0.05);
}

CacheFile numbered_cache(std::size_t train, std::size_t test) {
  CacheFile c;
  c.point_count = 1;
  c.class_names = {"only"};
  for (std::size_t i = 0; i < train + test; ++i) {
    c.clouds.push_back(geo::PointCloud{{{static_cast<double>(i), 0, 0}}, 0});
    c.splits.push_back(i < train ? Split::Train : Split::Test);
  }
  return c;
}

TEST(BatchTest, PartialFinalBatchKept) {
  const CacheFile c = numbered_cache(10, 908);
  BatchIterator it(c, Split::Test, BatchOptions{});
  EXPECT_EQ(it.num_batches(), 57u);
  std::size_t count = 0;
  std::size_t last = 0;
  while (auto b = it.next()) {
    ++count;
    last = b->size();
  }
  EXPECT_EQ(count, 57u);
  EXPECT_EQ(last, 12u);
}

TEST(BatchTest, NoSeedKeepsCacheOrder) {
  const CacheFile c = numbered_cache(7, 2);
  BatchIterator it(c, Split::Train, BatchOptions{3});
  std::vector<std::size_t> seen;
  while (auto b = it.next()) seen.insert(seen.end(), b->indices.begin(), b->indices.end());
  std::vector<std::size_t> expected(7);
  std::iota(expected.begin(), expected.end(), 0u);
  EXPECT_EQ(seen, expected);
}

TEST(BatchTest, SeededOrderAndAugmentationAreReproducible) {
  const CacheFile c = numbered_cache(40, 0);
  auto run = [&](std::uint64_t epoch) {
    BatchOptions o;
    o.batch_size = 6;
    o.shuffle_seed = 11;
    o.augment = AugmentConfig{};
    o.augment_seed = 12;
    o.epoch = epoch;
    BatchIterator it(c, Split::Train, o);
    std::vector<geo::Vec3> out;
    while (auto b = it.next()) {
      for (const auto& pc : b->clouds) out.push_back(pc.points[0]);
    }
    return out;
  };
  EXPECT_EQ(run(0), run(0));
  EXPECT_NE(run(0), run(1));
}

TEST(BatchTest, EmptySplitAndZeroBatchRejected) {
  const CacheFile c = numbered_cache(3, 0);
  EXPECT_THROW(BatchIterator(c, Split::Test, BatchOptions{}), ValidationError);
  EXPECT_THROW(BatchIterator(c, Split::Train, BatchOptions{0}), ValidationError);
}

}  // namespace
}  // namespace mrfgat::data
