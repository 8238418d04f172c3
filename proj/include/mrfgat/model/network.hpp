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

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrfgat/autodiff/ops.hpp"
#include "mrfgat/autodiff/tensor.hpp"
#include "mrfgat/geometry/knn.hpp"
#include "mrfgat/geometry/point_cloud.hpp"
#include "mrfgat/model/config.hpp"
#include "mrfgat/model/params.hpp"
#include "mrfgat/rng.hpp"

namespace mrfgat::model {

/// Output of one attention branch over a batch of B clouds of N points.
struct SrfgatOutput {
  ad::Tensor context;     // [B, N, 2F']: ReLU(edge attention sum || neighbor attention sum)
  ad::Tensor edge_local;  // [B, N, F']: max over neighbors of transformed edges
  ad::Tensor alpha;       // [B, N, K]: edge attention
  ad::Tensor beta;        // [B, N, K]: neighbor attention
};

/// Single-receptive-field graph attention over precomputed graphs.
///
/// For every point i and neighbor j:
///   e'_ij = ReLU(edge_transform(e_ij)),  p'_ij = ReLU(neighbor_transform(p_ij))
///   a_ij  = LeakyReLU(edge_scorer(e'_ij)), b_ij = LeakyReLU(raw_edge_scorer(e_ij))
///   alpha_i = softmax_j(a_ij), beta_i = softmax_j(b_ij)
///   context_i = ReLU(sum_j alpha_ij e'_ij || sum_j beta_ij p'_ij)
///
/// All clouds must have the same size and each graph must have K equal to
/// `params.neighbors`; otherwise ContractError.
SrfgatOutput srfgat_forward(ad::Tape& tape, std::span<const geo::PointCloud> clouds,
                            std::span<const geo::NeighborGraph> graphs, SrfgatParams& params,
                            double leaky_slope);

/// Channel concatenation of per-branch contexts in branch order.
ad::Tensor mrfgat_concat(std::span<const ad::Tensor> contexts);

/// Named intermediate shapes recorded during a forward pass.
struct ForwardTrace {
  std::vector<std::pair<std::string, ad::Shape>> shapes;

  void add(std::string name, const ad::Shape& shape) { shapes.emplace_back(std::move(name), shape); }
  const ad::Shape* find(const std::string& name) const;
};

struct ForwardOptions {
  ad::Mode mode = ad::Mode::Infer;
  /// Required in train mode when the config's keep probability is below 1.
  Rng* dropout_rng = nullptr;
  geo::KnnBackend knn = geo::KnnBackend::KdTree;
  ForwardTrace* trace = nullptr;
};

/// Full classifier over a batch of normalized clouds; returns raw class
/// scores [B, classes].
ad::Tensor mrfgat_forward(ad::Tape& tape, std::span<const geo::PointCloud> batch, NetworkParams& params,
                          const MRFGATConfig& config, const ForwardOptions& options = {});

/// Infer-mode class scores for a single cloud.
std::vector<double> mrfgat_logits(const geo::PointCloud& cloud, NetworkParams& params,
                                  const MRFGATConfig& config);

}  // namespace mrfgat::model
