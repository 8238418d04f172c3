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

#include "mrfgat/autodiff/adam.hpp"

#include <cmath>

#include "mrfgat/errors.hpp"

namespace mrfgat::ad {

void Adam::step(std::span<Parameter* const> params) {
  AdamState& s = state_;
  if (s.first_moment.empty()) {
    for (const Parameter* p : params) {
      s.first_moment.emplace_back(p->size(), 0.0);
      s.second_moment.emplace_back(p->size(), 0.0);
    }
  }
  if (s.first_moment.size() != params.size()) {
    throw ContractError("Adam::step: optimizer state tracks " + std::to_string(s.first_moment.size()) +
                        " parameters, got " + std::to_string(params.size()));
  }
  ++s.step;
  const double t = static_cast<double>(s.step);
  const double correction1 = 1.0 - std::pow(s.beta1, t);
  const double correction2 = 1.0 - std::pow(s.beta2, t);
  for (std::size_t p = 0; p < params.size(); ++p) {
    Parameter& param = *params[p];
    auto& m = s.first_moment[p];
    auto& v = s.second_moment[p];
    if (m.size() != param.size() || param.grad.size() != param.size()) {
      throw ContractError("Adam::step: shape changed for parameter " + param.name);
    }
    for (std::size_t i = 0; i < param.size(); ++i) {
      const double g = param.grad[i];
      m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g;
      v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      param.value[i] -= s.learning_rate * m_hat / (std::sqrt(v_hat) + s.eps);
    }
    param.zero_grad();
  }
}

}  // namespace mrfgat::ad
