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

#include "mrfgat/autodiff/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "mrfgat/errors.hpp"

namespace mrfgat::ad {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Parameter::Parameter(std::string name_, Shape shape_)
    : name(std::move(name_)), shape(std::move(shape_)) {
  value.assign(shape_size(shape), 0.0);
  grad.assign(value.size(), 0.0);
}

void Parameter::zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }

const Shape& Tensor::shape() const { return tape_->shape(id_); }
std::size_t Tensor::size() const { return tape_->value(id_).size(); }
std::span<const double> Tensor::data() const { return tape_->value(id_); }
std::span<const double> Tensor::grad() const { return tape_->grad(id_); }
bool Tensor::requires_grad() const { return tape_->requires_grad(id_); }

double Tensor::item() const {
  if (size() != 1) {
    throw ContractError("item() on tensor of shape " + shape_string(shape()));
  }
  return data()[0];
}

namespace {

void check_leaf(const Shape& shape, const std::vector<double>& value) {
  for (std::size_t extent : shape) {
    if (extent == 0) throw DimensionError("zero extent in shape " + shape_string(shape));
  }
  if (shape_size(shape) != value.size()) {
    throw DimensionError("shape " + shape_string(shape) + " does not hold " +
                         std::to_string(value.size()) + " values");
  }
}

}  // namespace

Tensor Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return Tensor(this, nodes_.size() - 1);
}

Tensor Tape::constant(Shape shape, std::vector<double> value) {
  check_leaf(shape, value);
  return push(Node{std::move(shape), std::move(value), {}, false, nullptr, {}});
}

Tensor Tape::variable(Shape shape, std::vector<double> value) {
  check_leaf(shape, value);
  return push(Node{std::move(shape), std::move(value), {}, grad_enabled(), nullptr, {}});
}

Tensor Tape::parameter(Parameter& param) {
  check_leaf(param.shape, param.value);
  if (param.grad.size() != param.value.size()) param.grad.assign(param.value.size(), 0.0);
  return push(Node{param.shape, param.value, {}, grad_enabled(), grad_enabled() ? &param : nullptr,
                   {}});
}

Tensor Tape::record(Shape shape, std::vector<double> value, std::initializer_list<Tensor> inputs,
                    BackwardFn backward) {
  return record(std::move(shape), std::move(value),
                std::span<const Tensor>(inputs.begin(), inputs.size()), std::move(backward));
}

Tensor Tape::record(Shape shape, std::vector<double> value, std::span<const Tensor> inputs,
                    BackwardFn backward) {
  bool needs = false;
  for (const Tensor& t : inputs) {
    if (t.tape_ != this) throw ContractError("operand recorded on a different tape");
    needs = needs || nodes_[t.id_].requires_grad;
  }
  needs = needs && grad_enabled();
  Node node{std::move(shape), std::move(value), {}, needs, nullptr, {}};
  if (needs) node.backward = std::move(backward);
  return push(std::move(node));
}

std::span<double> Tape::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(n.value.size(), 0.0);
  return n.grad;
}

void Tape::backward(const Tensor& loss) {
  if (loss.tape_ != this) throw ContractError("backward: loss belongs to a different tape");
  if (nodes_[loss.id_].value.size() != 1) {
    throw ContractError("backward: loss must be a scalar, got shape " +
                        shape_string(nodes_[loss.id_].shape));
  }
  if (backward_done_) throw ContractError("backward: tape already differentiated");
  backward_done_ = true;
  if (!nodes_[loss.id_].requires_grad) return;
  grad_buffer(loss.id_)[0] = 1.0;
  // Operands always precede their results, so one reverse pass in
  // recording order visits each node after all of its consumers.
  for (std::size_t id = loss.id_ + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param != nullptr) {
      auto& dst = n.param->grad;
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += n.grad[i];
    }
  }
}

}  // namespace mrfgat::ad
