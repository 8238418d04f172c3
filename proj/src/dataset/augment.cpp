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

#include "mrfgat/dataset/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrfgat/errors.hpp"

namespace mrfgat::data {

void AugmentConfig::validate() const {
  if (!(scale_low > 0.0 && scale_low <= scale_high)) throw ValidationError("augment: need 0 < scale_low <= scale_high");
  if (!(jitter_sigma >= 0.0) || !(jitter_clip >= 0.0)) throw ValidationError("augment: jitter sigma and clip must be >= 0");
}

AugmentConfig AugmentConfig::none() { return {false, 1.0, 1.0, 0.0, 0.0}; }

geo::PointCloud augment(const geo::PointCloud& pc, const AugmentConfig& cfg, Rng& rng) {
  cfg.validate();
  geo::PointCloud out = pc;
  if (cfg.rotate) {
    const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (auto& p : out.points) {
      const double x = p[0];
      const double y = p[1];
      p[0] = c * x - s * y;
      p[1] = s * x + c * y;
    }
  }
  if (cfg.scale_low != 1.0 || cfg.scale_high != 1.0) {
    const double scale = uniform(rng, cfg.scale_low, cfg.scale_high);
    for (auto& p : out.points) {
      for (double& v : p) v *= scale;
    }
  }
  if (cfg.jitter_sigma > 0.0) {
    for (auto& p : out.points) {
      for (double& v : p) v += std::clamp(cfg.jitter_sigma * standard_normal(rng), -cfg.jitter_clip, cfg.jitter_clip);
    }
  }
  return out;
}

}  // namespace mrfgat::data
