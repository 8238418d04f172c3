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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mrfgat/autodiff/tensor.hpp"

namespace mrfgat::ad {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  /// Coordinates whose +-eps probe crossed a kink and were re-probed with a
  /// smaller step.
  std::size_t reduced_steps = 0;
  /// Coordinates where no step down to eps * 4^-kMaxStepReductions stayed on
  /// one smooth piece; their last difference is still compared.
  std::size_t nonsmooth = 0;
};

/// A central difference is only meaningful when x - h, x and x + h lie on
/// the same smooth piece. Evaluations track the branch taken by every
/// relu, leaky_relu and max reduction; when a probe's branches differ from
/// the unperturbed pass the step is divided by 4, up to this many times.
inline constexpr int kMaxStepReductions = 6;

/// |a - n| / max(|a|, |n|, 1e-8).
double relative_error(double analytic, double numeric);

/// Compares the tape gradient of a scalar function of `x` against central
/// differences, coordinate by coordinate. Throws ContractError when two
/// evaluations at the same point disagree.
GradCheckResult grad_check(const std::function<Tensor(Tape&, const Tensor&)>& f, const Shape& shape,
                           const std::vector<double>& x, double eps);

struct BlockReport {
  std::string name;
  std::size_t checked = 0;
  GradCheckResult result;
};

/// Same check over every coordinate of every parameter. `loss` must record
/// a scalar on the supplied tape using the parameters' current values and
/// be deterministic (reseed any randomness inside it).
std::vector<BlockReport> grad_check_parameters(const std::function<Tensor(Tape&)>& loss,
                                               std::span<Parameter* const> params, double eps);

}  // namespace mrfgat::ad
