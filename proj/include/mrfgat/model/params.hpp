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
#include <string>
#include <vector>

#include "mrfgat/autodiff/ops.hpp"
#include "mrfgat/autodiff/tensor.hpp"
#include "mrfgat/model/config.hpp"
#include "mrfgat/rng.hpp"

namespace mrfgat::model {

struct Affine {
  ad::Parameter weight;  // [in, out]
  ad::Parameter bias;    // [out]

  static Affine create(const std::string& name, std::size_t in, std::size_t out);
  std::size_t in() const { return weight.shape[0]; }
  std::size_t out() const { return weight.shape[1]; }
};

/// Weights of one single-receptive-field attention branch.
struct SrfgatParams {
  /// Neighbor count this branch expects in its graph.
  std::size_t neighbors = 0;
  Affine edge_transform;      // 3 -> F', followed by ReLU
  Affine neighbor_transform;  // 3 -> F', followed by ReLU
  Affine edge_scorer;         // F' -> 1, scores transformed edges
  Affine raw_edge_scorer;     // 3 -> 1, scores raw edge vectors

  static SrfgatParams create(const std::string& name, std::size_t neighbors, std::size_t channels);
  std::size_t channels() const { return edge_transform.out(); }
};

struct BatchNorm {
  ad::Parameter gamma;
  ad::Parameter beta;
  ad::BatchNormStats stats;

  static BatchNorm create(const std::string& name, std::size_t channels);
};

/// Bias-free affine map followed by batch norm and ReLU; the shift of the
/// batch norm plays the role of the bias.
struct DenseBnLayer {
  ad::Parameter weight;  // [in, out]
  BatchNorm bn;

  static DenseBnLayer create(const std::string& name, std::size_t in, std::size_t out);
  std::size_t in() const { return weight.shape[0]; }
  std::size_t out() const { return weight.shape[1]; }
};

struct NetworkParams {
  std::vector<SrfgatParams> scales;
  std::vector<DenseBnLayer> mlp;
  DenseBnLayer global;
  std::vector<DenseBnLayer> head;
  Affine classifier;

  /// Every learnable array in a fixed order (the optimizer and checkpoint
  /// order).
  std::vector<ad::Parameter*> parameters();
  std::vector<const ad::Parameter*> parameters() const;
  /// Batch-norm layers in the same traversal order.
  std::vector<BatchNorm*> batch_norms();
  std::vector<const BatchNorm*> batch_norms() const;

  /// Allocates zero-valued parameters laid out for `config`.
  static NetworkParams allocate(const MRFGATConfig& config);
};

/// Glorot-uniform affine weights (bound sqrt(6 / (fan_in + fan_out))), zero
/// biases, unit BN scale and zero BN shift. Deterministic per seed.
NetworkParams param_init(const MRFGATConfig& config, std::uint64_t seed);

/// Scalar learnable parameter count (affine weights and biases, BN scale and
/// shift; running statistics excluded), computed from the config alone.
std::size_t param_count(const MRFGATConfig& config);

/// Throws ContractError when `params` is not laid out for `config`.
void check_consistency(const NetworkParams& params, const MRFGATConfig& config);

}  // namespace mrfgat::model
