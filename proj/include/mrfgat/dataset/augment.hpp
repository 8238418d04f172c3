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

#include "mrfgat/geometry/point_cloud.hpp"
#include "mrfgat/rng.hpp"

namespace mrfgat::data {

struct AugmentConfig {
  /// Rotation about the z axis by an angle uniform in [0, 2pi).
  bool rotate = true;
  double scale_low = 0.8;
  double scale_high = 1.25;
  double jitter_sigma = 0.01;
  double jitter_clip = 0.05;

  /// Throws ValidationError unless 0 < low <= high, sigma >= 0, clip >= 0.
  void validate() const;
  bool operator==(const AugmentConfig&) const = default;
  /// Identity: no rotation, unit scale, no jitter.
  static AugmentConfig none();
};

/// Rotate, then scale, then add per-coordinate Gaussian jitter clipped to
/// [-clip, clip]. Label and point count are unchanged.
geo::PointCloud augment(const geo::PointCloud& pc, const AugmentConfig& cfg, Rng& rng);

}  // namespace mrfgat::data
