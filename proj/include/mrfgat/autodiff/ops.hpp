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
#include <span>
#include <vector>

#include "mrfgat/autodiff/tensor.hpp"
#include "mrfgat/rng.hpp"

namespace mrfgat::ad {

/// y[..., j] = sum_i x[..., i] * w[i, j] + b[j]. `w` is [Cin, Cout], `b` is [Cout].
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);
/// Affine map without the bias term.
Tensor linear(const Tensor& x, const Tensor& w);

Tensor relu(const Tensor& x);
/// max(x, slope * x). Derivative is `slope` for x < 0 and 1 for x >= 0.
Tensor leaky_relu(const Tensor& x, double slope);

/// Softmax over the last axis with the max-shift for stability.
Tensor softmax_last(const Tensor& x);

/// out[..., f] = sum_k weights[..., k] * values[..., k, f].
Tensor attention_sum(const Tensor& weights, const Tensor& values);

/// Maximum along `axis`. Gradient goes to the first maximal index.
Tensor reduce_max_axis(const Tensor& x, std::size_t axis);

Tensor concat_last(std::span<const Tensor> parts);
Tensor concat_last(std::initializer_list<Tensor> parts);
/// Columns [begin, end) of the last axis.
Tensor slice_last(const Tensor& x, std::size_t begin, std::size_t end);

Tensor reshape(const Tensor& x, Shape shape);

Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, double factor);
Tensor sum(const Tensor& x);

/// Inverted dropout: kept entries are scaled by 1/keep_prob.
Tensor dropout(const Tensor& x, double keep_prob, Rng& rng);

/// Mean over the batch of -log softmax(logits)[label]. `logits` is [B, c].
Tensor cross_entropy_with_logits(const Tensor& logits, std::span<const int> labels);

enum class Mode { Train, Infer };

/// Running statistics of one batch-norm layer.
struct BatchNormStats {
  explicit BatchNormStats(std::size_t channels = 0)
      : running_mean(channels, 0.0), running_var(channels, 1.0) {}

  std::vector<double> running_mean;
  std::vector<double> running_var;
  double momentum = 0.9;
  double eps = 1e-5;
};

/// Per-channel normalization over every non-channel position of `x` (last
/// axis is the channel axis). Train mode uses batch statistics and folds
/// them into `stats` by exponential moving average; infer mode reads
/// `stats` only.
Tensor batch_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, BatchNormStats& stats,
                  Mode mode);

}  // namespace mrfgat::ad
