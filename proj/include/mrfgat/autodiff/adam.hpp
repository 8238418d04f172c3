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
#include <span>
#include <vector>

#include "mrfgat/autodiff/tensor.hpp"

namespace mrfgat::ad {

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  /// One accumulator per parameter, in the order the parameters are passed
  /// to Adam::step.
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
};

/// Adam with bias correction. Gradients are zeroed after every update.
class Adam {
 public:
  explicit Adam(double learning_rate = 1e-3) { state_.learning_rate = learning_rate; }
  explicit Adam(AdamState state) : state_(std::move(state)) {}

  void step(std::span<Parameter* const> params);

  AdamState& state() { return state_; }
  const AdamState& state() const { return state_; }

 private:
  AdamState state_;
};

}  // namespace mrfgat::ad
