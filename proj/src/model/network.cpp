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

#include "mrfgat/model/network.hpp"

#include <algorithm>

#include "mrfgat/errors.hpp"

namespace mrfgat::model {

namespace {

using ad::Tensor;

// Rows of a K-graph are prefixes of the rows of any larger-K graph over the
// same cloud, because both follow the same (distance, index) order.
geo::NeighborGraph truncate_graph(const geo::NeighborGraph& g, std::size_t k) {
  if (k == g.k) return g;
  geo::NeighborGraph out;
  out.n = g.n;
  out.k = k;
  out.indices.resize(g.n * k);
  out.edges.resize(g.n * k * 3);
  for (std::size_t i = 0; i < g.n; ++i) {
    std::copy_n(g.indices.begin() + static_cast<std::ptrdiff_t>(i * g.k), k,
                out.indices.begin() + static_cast<std::ptrdiff_t>(i * k));
    std::copy_n(g.edges.begin() + static_cast<std::ptrdiff_t>(i * g.k * 3), k * 3,
                out.edges.begin() + static_cast<std::ptrdiff_t>(i * k * 3));
  }
  return out;
}

Tensor dense_bn_relu(ad::Tape& tape, const Tensor& x, DenseBnLayer& layer, ad::Mode mode) {
  const Tensor h = ad::linear(x, tape.parameter(layer.weight));
  return ad::relu(ad::batch_norm(h, tape.parameter(layer.bn.gamma), tape.parameter(layer.bn.beta),
                                 layer.bn.stats, mode));
}

}  // namespace

SrfgatOutput srfgat_forward(ad::Tape& tape, std::span<const geo::PointCloud> clouds,
                            std::span<const geo::NeighborGraph> graphs, SrfgatParams& params,
                            double leaky_slope) {
  if (clouds.empty() || clouds.size() != graphs.size()) {
    throw ContractError("srfgat_forward: need one graph per cloud");
  }
  const std::size_t batch = clouds.size();
  const std::size_t n = clouds[0].size();
  const std::size_t k = params.neighbors;
  std::vector<double> edges;
  std::vector<double> neighbors;
  edges.reserve(batch * n * k * 3);
  neighbors.reserve(batch * n * k * 3);
  for (std::size_t b = 0; b < batch; ++b) {
    const geo::NeighborGraph& g = graphs[b];
    if (clouds[b].size() != n || g.n != n) {
      throw ContractError("srfgat_forward: clouds and graphs must all have " + std::to_string(n) + " points");
    }
    if (g.k != k) {
      throw ContractError("srfgat_forward: graph has K=" + std::to_string(g.k) + " but branch expects K=" +
                          std::to_string(k));
    }
    edges.insert(edges.end(), g.edges.begin(), g.edges.end());
    for (std::uint32_t idx : g.indices) {
      const geo::Vec3& p = clouds[b].points[idx];
      neighbors.insert(neighbors.end(), p.begin(), p.end());
    }
  }
  const ad::Shape geometry_shape{batch, n, k, 3};
  const Tensor edge_in = tape.constant(geometry_shape, std::move(edges));
  const Tensor neighbor_in = tape.constant(geometry_shape, std::move(neighbors));

  auto affine = [&](const Tensor& x, Affine& a) {
    return ad::linear(x, tape.parameter(a.weight), tape.parameter(a.bias));
  };
  const Tensor edge_feat = ad::relu(affine(edge_in, params.edge_transform));
  const Tensor neighbor_feat = ad::relu(affine(neighbor_in, params.neighbor_transform));
  const Tensor edge_score =
      ad::leaky_relu(ad::reshape(affine(edge_feat, params.edge_scorer), {batch, n, k}), leaky_slope);
  const Tensor raw_score =
      ad::leaky_relu(ad::reshape(affine(edge_in, params.raw_edge_scorer), {batch, n, k}), leaky_slope);
  const Tensor alpha = ad::softmax_last(edge_score);
  const Tensor beta = ad::softmax_last(raw_score);
  const Tensor context =
      ad::relu(ad::concat_last({ad::attention_sum(alpha, edge_feat), ad::attention_sum(beta, neighbor_feat)}));
  const Tensor edge_local = ad::reduce_max_axis(edge_feat, 2);
  return {context, edge_local, alpha, beta};
}

Tensor mrfgat_concat(std::span<const Tensor> contexts) {
  if (contexts.empty()) throw DimensionError("mrfgat_concat: no branch outputs");
  return ad::concat_last(contexts);
}

const ad::Shape* ForwardTrace::find(const std::string& name) const {
  for (const auto& [n, s] : shapes) {
    if (n == name) return &s;
  }
  return nullptr;
}

Tensor mrfgat_forward(ad::Tape& tape, std::span<const geo::PointCloud> batch, NetworkParams& params,
                      const MRFGATConfig& config, const ForwardOptions& options) {
  check_consistency(params, config);
  if (batch.empty()) throw ValidationError("mrfgat_forward: empty batch");
  const std::size_t n = batch[0].size();
  for (const auto& cloud : batch) {
    if (cloud.size() != n) throw ValidationError("mrfgat_forward: clouds in a batch must have equal size");
  }
  if (n < config.max_neighbors()) {
    throw ValidationError("mrfgat_forward: " + std::to_string(n) + " points but a branch needs K=" +
                          std::to_string(config.max_neighbors()));
  }
  const bool train = options.mode == ad::Mode::Train;
  if (train && config.keep_prob < 1.0 && options.dropout_rng == nullptr) {
    throw ContractError("mrfgat_forward: train mode with dropout needs a generator");
  }
  auto trace = [&](const char* name, const Tensor& t) {
    if (options.trace != nullptr) options.trace->add(name, t.shape());
  };

  std::vector<geo::NeighborGraph> widest;
  widest.reserve(batch.size());
  for (const auto& cloud : batch) widest.push_back(geo::knn_graph(cloud, config.max_neighbors(), options.knn));

  std::vector<Tensor> contexts;
  std::vector<Tensor> edge_locals;
  for (std::size_t m = 0; m < config.num_scales(); ++m) {
    std::vector<geo::NeighborGraph> graphs;
    graphs.reserve(batch.size());
    for (const auto& g : widest) graphs.push_back(truncate_graph(g, config.neighbors[m]));
    SrfgatOutput out = srfgat_forward(tape, batch, graphs, params.scales[m], config.leaky_slope);
    contexts.push_back(out.context);
    edge_locals.push_back(out.edge_local);
  }

  Tensor x = mrfgat_concat(contexts);
  trace("context_concat", x);
  std::vector<Tensor> skips;
  for (std::size_t l = 0; l < params.mlp.size(); ++l) {
    x = dense_bn_relu(tape, x, params.mlp[l], options.mode);
    trace(("mlp" + std::to_string(l)).c_str(), x);
    skips.push_back(x);
  }
  const Tensor edge_features = ad::concat_last(edge_locals);
  trace("edge_features", edge_features);
  skips.push_back(edge_features);
  const Tensor joined = ad::concat_last(skips);
  trace("skip_concat", joined);
  const Tensor global = dense_bn_relu(tape, joined, params.global, options.mode);
  trace("global", global);
  Tensor h = ad::reduce_max_axis(global, 1);
  trace("pooled", h);
  for (std::size_t l = 0; l < params.head.size(); ++l) {
    h = dense_bn_relu(tape, h, params.head[l], options.mode);
    trace(("head" + std::to_string(l)).c_str(), h);
    if (train) h = ad::dropout(h, config.keep_prob, *options.dropout_rng);
  }
  const Tensor logits =
      ad::linear(h, tape.parameter(params.classifier.weight), tape.parameter(params.classifier.bias));
  trace("logits", logits);
  return logits;
}

std::vector<double> mrfgat_logits(const geo::PointCloud& cloud, NetworkParams& params,
                                  const MRFGATConfig& config) {
  ad::Tape tape(ad::GradMode::Disabled);
  const Tensor logits = mrfgat_forward(tape, std::span<const geo::PointCloud>(&cloud, 1), params, config);
  const auto d = logits.data();
  return {d.begin(), d.end()};
}

}  // namespace mrfgat::model
