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

#include <cstdint>
#include <string>
#include <vector>

#include "mrfgat/autodiff/grad_check.hpp"
#include "mrfgat/geometry/point_cloud.hpp"
#include "mrfgat/model/config.hpp"
#include "mrfgat/model/params.hpp"

namespace mrfgat::model {

/// A small labeled batch plus network weights on which the end-to-end loss
/// gradient is checked against central differences.
struct GradCheckProblem {
  MRFGATConfig config;
  NetworkParams params;
  std::vector<geo::PointCloud> clouds;
  std::vector<int> labels;
  std::uint64_t dropout_seed = 0;
  /// Infer mode normalizes with the running statistics. Train mode uses batch
  /// statistics and a fixed dropout mask; there a per-channel shift ahead of
  /// a later batch norm has an exactly zero gradient.
  ad::Mode mode = ad::Mode::Infer;

  /// Forward pass in `mode` and mean cross-entropy.
  ad::Tensor loss(ad::Tape& tape);
};

/// Random normalized clouds and labels, initialized weights with biases,
/// batch-norm scale/shift and running statistics moved off their initial
/// values so no activation sits exactly on a kink. Edge-scorer biases are
/// centered so attention scores take both signs; otherwise softmax shift
/// invariance makes their gradient vanish.
GradCheckProblem make_gradcheck_problem(const MRFGATConfig& config, std::size_t points, std::size_t batch,
                                        std::uint64_t seed);

struct NetworkGradReport {
  std::vector<ad::BlockReport> blocks;
  double tolerance = 1e-4;

  double max_error() const;
  bool passed() const { return max_error() < tolerance; }
  std::vector<std::string> failing_blocks() const;
};

NetworkGradReport check_network_gradients(GradCheckProblem& problem, double eps = 1e-4,
                                          double tolerance = 1e-4);

/// Per-block table followed by a PASS/FAIL line.
std::string format_gradient_report(const NetworkGradReport& report);

}  // namespace mrfgat::model
