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
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mrfgat::ad {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

/// A learnable array. Lives outside any tape; a tape binds it as a leaf and
/// backward() accumulates into `grad`.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Shape shape);

  std::string name;
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;

  std::size_t size() const { return value.size(); }
  void zero_grad();
};

class Tape;

/// Lightweight handle to a node recorded on a Tape. Copying a Tensor does
/// not copy data. A Tensor, and the shape and spans it returns, stay valid
/// for as long as its Tape is alive.
class Tensor {
 public:
  Tensor() = default;

  const Shape& shape() const;
  std::size_t size() const;
  std::size_t dim(std::size_t axis) const { return shape().at(axis); }
  std::size_t rank() const { return shape().size(); }
  std::span<const double> data() const;
  /// Gradient buffer after backward(); empty if the node did not receive one.
  std::span<const double> grad() const;
  bool requires_grad() const;
  /// Value of a single-element tensor.
  double item() const;

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Tensor(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

enum class GradMode { Enabled, Disabled };

/// Append-only record of forward operations. Each node stores its value,
/// its operands (which always precede it), and a rule that pushes its
/// gradient into the operands' gradients.
class Tape {
 public:
  /// Receives the tape and the id of the node whose gradient is final.
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  explicit Tape(GradMode mode = GradMode::Enabled) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor constant(Shape shape, std::vector<double> value);
  /// Leaf that receives a gradient (used for input sensitivities).
  Tensor variable(Shape shape, std::vector<double> value);
  /// Leaf bound to a Parameter; backward() adds into param.grad.
  Tensor parameter(Parameter& param);

  /// Records an operation result. `backward` is dropped when no input
  /// requires a gradient or the tape has gradients disabled.
  Tensor record(Shape shape, std::vector<double> value, std::initializer_list<Tensor> inputs,
                BackwardFn backward);
  Tensor record(Shape shape, std::vector<double> value, std::span<const Tensor> inputs,
                BackwardFn backward);

  /// Reverse sweep from a single-element tensor. Each node is visited once.
  void backward(const Tensor& loss);

  bool grad_enabled() const { return mode_ == GradMode::Enabled; }
  std::size_t size() const { return nodes_.size(); }

  /// When on, piecewise operations (relu, leaky_relu, max reductions) log
  /// which branch every element took. Two evaluations with equal logs lie on
  /// the same smooth piece of the function.
  void track_branches(bool on) { track_branches_ = on; }
  bool tracking_branches() const { return track_branches_; }
  void note_branch(std::uint32_t choice) { branches_.push_back(choice); }
  const std::vector<std::uint32_t>& branches() const { return branches_; }

  // Access used by operation implementations.
  const Shape& shape(std::size_t id) const { return nodes_[id].shape; }
  std::span<const double> value(std::size_t id) const { return nodes_[id].value; }
  std::span<const double> grad(std::size_t id) const { return nodes_[id].grad; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  /// Gradient accumulator of a node, allocated (zeroed) on first use.
  std::span<double> grad_buffer(std::size_t id);

 private:
  struct Node {
    Shape shape;
    std::vector<double> value;
    std::vector<double> grad;
    bool requires_grad = false;
    Parameter* param = nullptr;
    BackwardFn backward;
  };

  Tensor push(Node node);

  GradMode mode_;
  std::deque<Node> nodes_;  // stable references across push_back
  bool backward_done_ = false;
  bool track_branches_ = false;
  std::vector<std::uint32_t> branches_;
};

}  // namespace mrfgat::ad
