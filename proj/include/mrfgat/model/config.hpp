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
#include <map>
#include <string>
#include <vector>

namespace mrfgat::model {

/// Architectural hyperparameters of the classifier.
struct MRFGATConfig {
  /// Neighbor count K per attention branch (self included).
  std::vector<std::size_t> neighbors{8, 16, 24, 32};
  /// Output channels F' per attention branch.
  std::vector<std::size_t> channels{8, 16, 16, 24};
  /// Shared per-point MLP widths, applied in sequence.
  std::vector<std::size_t> mlp{128, 64, 64, 64};
  std::size_t global = 1024;
  std::vector<std::size_t> head{512, 256};
  std::size_t classes = 40;
  double leaky_slope = 0.2;
  double keep_prob = 0.5;

  std::size_t num_scales() const { return neighbors.size(); }
  std::size_t max_neighbors() const;
  /// Width of the concatenated attention contexts, 2 * sum F'.
  std::size_t context_width() const;
  /// Width of the concatenated per-branch edge features, sum F'.
  std::size_t edge_width() const;
  /// Width entering the global layer: all MLP outputs plus edge features.
  std::size_t skip_width() const;

  /// Throws ValidationError on an inconsistent configuration.
  void validate() const;

  bool operator==(const MRFGATConfig&) const = default;

  static MRFGATConfig modelnet40();
  static MRFGATConfig modelnet10();
  /// Small network for gradient checks and smoke tests: two branches with
  /// K = (4, 8) and F' = (4, 8), narrow MLPs.
  static MRFGATConfig reduced(std::size_t classes = 4);
};

using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; '#' starts a comment. Throws ParseError.
KeyValues parse_key_values(const std::string& text);
std::string format_key_values(const KeyValues& kv);

/// Writes model keys (neighbors, channels, mlp, global, head, classes,
/// leaky_slope, keep_prob) into `kv`.
void to_key_values(const MRFGATConfig& config, KeyValues& kv);
/// Overrides fields present in `kv`; other keys are ignored.
void apply_key_values(const KeyValues& kv, MRFGATConfig& config);

/// Comma-separated counts; an empty string is an empty list.
std::vector<std::size_t> parse_size_list(const std::string& text);
std::string format_size_list(const std::vector<std::size_t>& values);
/// Shortest text that parses back to the same double.
std::string format_real(double v);
/// ValidationError naming `key` on malformed text.
double parse_real(const std::string& key, const std::string& text);
std::size_t parse_count(const std::string& key, const std::string& text);

}  // namespace mrfgat::model
