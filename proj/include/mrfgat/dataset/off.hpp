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
#include <filesystem>
#include <string_view>

#include "mrfgat/geometry/point_cloud.hpp"

namespace mrfgat::data {

struct OffMesh {
  geo::TriangleMesh mesh;
  /// Triangles dropped because two of their corners share a vertex index or
  /// their area is zero.
  std::size_t degenerate_faces = 0;
};

/// Parses OFF text. Accepts the header fused with the counts ("OFF4 4 0"),
/// '#' comments and blank lines; polygons are fan-triangulated around their
/// first vertex. Throws ParseError carrying the 1-based line number.
OffMesh parse_off(std::string_view text);

/// Reads and parses a file; LoadError if it cannot be read.
OffMesh read_off(const std::filesystem::path& path);

}  // namespace mrfgat::data
