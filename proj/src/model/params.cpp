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

#include "mrfgat/model/params.hpp"

#include <cmath>

#include "mrfgat/errors.hpp"

namespace mrfgat::model {

Affine Affine::create(const std::string& name, std::size_t in, std::size_t out) {
  return Affine{ad::Parameter(name + ".weight", {in, out}), ad::Parameter(name + ".bias", {out})};
}

SrfgatParams SrfgatParams::create(const std::string& name, std::size_t neighbors, std::size_t channels) {
  return SrfgatParams{neighbors,
                      Affine::create(name + ".edge_transform", 3, channels),
                      Affine::create(name + ".neighbor_transform", 3, channels),
                      Affine::create(name + ".edge_scorer", channels, 1),
                      Affine::create(name + ".raw_edge_scorer", 3, 1)};
}

BatchNorm BatchNorm::create(const std::string& name, std::size_t channels) {
  BatchNorm bn{ad::Parameter(name + ".gamma", {channels}), ad::Parameter(name + ".beta", {channels}),
               ad::BatchNormStats(channels)};
  std::fill(bn.gamma.value.begin(), bn.gamma.value.end(), 1.0);
  return bn;
}

DenseBnLayer DenseBnLayer::create(const std::string& name, std::size_t in, std::size_t out) {
  return DenseBnLayer{ad::Parameter(name + ".weight", {in, out}), BatchNorm::create(name + ".bn", out)};
}

NetworkParams NetworkParams::allocate(const MRFGATConfig& config) {
  config.validate();
  NetworkParams p;
  for (std::size_t m = 0; m < config.num_scales(); ++m) {
    p.scales.push_back(
        SrfgatParams::create("scale" + std::to_string(m), config.neighbors[m], config.channels[m]));
  }
  std::size_t width = config.context_width();
  for (std::size_t l = 0; l < config.mlp.size(); ++l) {
    p.mlp.push_back(DenseBnLayer::create("mlp" + std::to_string(l), width, config.mlp[l]));
    width = config.mlp[l];
  }
  p.global = DenseBnLayer::create("global", config.skip_width(), config.global);
  width = config.global;
  for (std::size_t l = 0; l < config.head.size(); ++l) {
    p.head.push_back(DenseBnLayer::create("head" + std::to_string(l), width, config.head[l]));
    width = config.head[l];
  }
  p.classifier = Affine::create("classifier", width, config.classes);
  return p;
}

std::vector<ad::Parameter*> NetworkParams::parameters() {
  std::vector<ad::Parameter*> out;
  auto affine = [&](Affine& a) {
    out.push_back(&a.weight);
    out.push_back(&a.bias);
  };
  auto dense = [&](DenseBnLayer& d) {
    out.push_back(&d.weight);
    out.push_back(&d.bn.gamma);
    out.push_back(&d.bn.beta);
  };
  for (auto& s : scales) {
    affine(s.edge_transform);
    affine(s.neighbor_transform);
    affine(s.edge_scorer);
    affine(s.raw_edge_scorer);
  }
  for (auto& l : mlp) dense(l);
  dense(global);
  for (auto& l : head) dense(l);
  affine(classifier);
  return out;
}

std::vector<const ad::Parameter*> NetworkParams::parameters() const {
  auto mutable_list = const_cast<NetworkParams*>(this)->parameters();
  return {mutable_list.begin(), mutable_list.end()};
}

std::vector<BatchNorm*> NetworkParams::batch_norms() {
  std::vector<BatchNorm*> out;
  for (auto& l : mlp) out.push_back(&l.bn);
  out.push_back(&global.bn);
  for (auto& l : head) out.push_back(&l.bn);
  return out;
}

std::vector<const BatchNorm*> NetworkParams::batch_norms() const {
  auto mutable_list = const_cast<NetworkParams*>(this)->batch_norms();
  return {mutable_list.begin(), mutable_list.end()};
}

NetworkParams param_init(const MRFGATConfig& config, std::uint64_t seed) {
  NetworkParams p = NetworkParams::allocate(config);
  Rng rng(derive_seed(seed, {0x1417}));
  for (ad::Parameter* param : p.parameters()) {
    if (param->shape.size() != 2) continue;  // biases and BN scale/shift keep their defaults
    const double fan_in = static_cast<double>(param->shape[0]);
    const double fan_out = static_cast<double>(param->shape[1]);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : param->value) w = uniform(rng, -bound, bound);
  }
  return p;
}

std::size_t param_count(const MRFGATConfig& config) {
  config.validate();
  auto affine = [](std::size_t in, std::size_t out) { return in * out + out; };
  auto dense = [](std::size_t in, std::size_t out) { return in * out + 2 * out; };
  std::size_t total = 0;
  for (std::size_t f : config.channels) {
    total += 2 * affine(3, f) + affine(f, 1) + affine(3, 1);
  }
  std::size_t width = config.context_width();
  for (std::size_t w : config.mlp) {
    total += dense(width, w);
    width = w;
  }
  total += dense(config.skip_width(), config.global);
  width = config.global;
  for (std::size_t w : config.head) {
    total += dense(width, w);
    width = w;
  }
  return total + affine(width, config.classes);
}

void check_consistency(const NetworkParams& params, const MRFGATConfig& config) {
  NetworkParams expected;
  try {
    expected = NetworkParams::allocate(config);
  } catch (const ValidationError& e) {
    throw ContractError(std::string("invalid config: ") + e.what());
  }
  const auto want = expected.parameters();
  const auto have = params.parameters();
  if (want.size() != have.size() || params.scales.size() != config.num_scales()) {
    throw ContractError("parameters have " + std::to_string(have.size()) + " arrays, config needs " +
                        std::to_string(want.size()));
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i]->shape != have[i]->shape || have[i]->value.size() != ad::shape_size(have[i]->shape)) {
      throw ContractError("parameter " + have[i]->name + " has shape " + ad::shape_string(have[i]->shape) +
                          ", config needs " + ad::shape_string(want[i]->shape) + " (" + want[i]->name + ")");
    }
  }
  for (std::size_t m = 0; m < config.num_scales(); ++m) {
    if (params.scales[m].neighbors != config.neighbors[m]) {
      throw ContractError("branch " + std::to_string(m) + " expects K=" +
                          std::to_string(params.scales[m].neighbors) + ", config has K=" +
                          std::to_string(config.neighbors[m]));
    }
  }
}

}  // namespace mrfgat::model
