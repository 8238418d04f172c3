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

#include "mrfgat/autodiff/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mrfgat/errors.hpp"

namespace mrfgat::ad {

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

namespace {

struct Evaluation {
  double value = 0.0;
  std::vector<std::uint32_t> branches;
};

void update(GradCheckResult& r, std::size_t index, double analytic, double numeric) {
  const double err = relative_error(analytic, numeric);
  if (index == 0 || err > r.max_relative_error) {
    r.max_relative_error = err;
    r.worst_index = index;
    r.analytic = analytic;
    r.numeric = numeric;
  }
}

// Central difference of coordinate `slot` that stays on the branch pattern
// of `base`. `at(v)` evaluates with the coordinate set to v.
template <class Eval>
double central_difference(const Eval& at, double x, double eps, const Evaluation& base, GradCheckResult& r) {
  double h = eps;
  for (int attempt = 0;; ++attempt) {
    const Evaluation plus = at(x + h);
    const Evaluation minus = at(x - h);
    const double numeric = (plus.value - minus.value) / (2.0 * h);
    if (plus.branches == base.branches && minus.branches == base.branches) {
      if (attempt > 0) ++r.reduced_steps;
      return numeric;
    }
    if (attempt == kMaxStepReductions) {
      ++r.nonsmooth;
      return numeric;
    }
    h /= 4.0;
  }
}

}  // namespace

GradCheckResult grad_check(const std::function<Tensor(Tape&, const Tensor&)>& f, const Shape& shape,
                           const std::vector<double>& x, double eps) {
  if (!(eps > 0.0)) throw ValidationError("grad_check: eps must be positive");
  auto evaluate = [&](const std::vector<double>& point) {
    Tape tape(GradMode::Disabled);
    tape.track_branches(true);
    const Tensor in = tape.constant(shape, point);
    const Tensor out = f(tape, in);
    if (out.size() != 1) throw ContractError("grad_check: function must be scalar-valued");
    return Evaluation{out.item(), tape.branches()};
  };

  std::vector<double> analytic;
  Evaluation reference;
  {
    Tape tape;
    tape.track_branches(true);
    const Tensor in = tape.variable(shape, x);
    const Tensor out = f(tape, in);
    if (out.size() != 1) throw ContractError("grad_check: function must be scalar-valued");
    reference = {out.item(), tape.branches()};
    tape.backward(out);
    const auto g = in.grad();
    analytic.assign(x.size(), 0.0);
    std::copy(g.begin(), g.end(), analytic.begin());
  }
  if (evaluate(x).value != reference.value || evaluate(x).value != reference.value) {
    throw ContractError("grad_check: function is not deterministic");
  }

  GradCheckResult result;
  std::vector<double> probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto at = [&](double v) {
      probe[i] = v;
      Evaluation e = evaluate(probe);
      probe[i] = x[i];
      return e;
    };
    update(result, i, analytic[i], central_difference(at, x[i], eps, reference, result));
  }
  return result;
}

std::vector<BlockReport> grad_check_parameters(const std::function<Tensor(Tape&)>& loss,
                                               std::span<Parameter* const> params, double eps) {
  if (!(eps > 0.0)) throw ValidationError("grad_check: eps must be positive");
  auto evaluate = [&]() {
    Tape tape(GradMode::Disabled);
    tape.track_branches(true);
    const Tensor out = loss(tape);
    if (out.size() != 1) throw ContractError("grad_check: loss must be scalar-valued");
    return Evaluation{out.item(), tape.branches()};
  };

  for (Parameter* p : params) p->zero_grad();
  Evaluation reference;
  {
    Tape tape;
    tape.track_branches(true);
    const Tensor out = loss(tape);
    if (out.size() != 1) throw ContractError("grad_check: loss must be scalar-valued");
    reference = {out.item(), tape.branches()};
    tape.backward(out);
  }
  if (evaluate().value != reference.value || evaluate().value != reference.value) {
    throw ContractError("grad_check: loss is not deterministic");
  }

  std::vector<BlockReport> reports;
  for (Parameter* p : params) {
    BlockReport report{p->name, p->size(), {}};
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double saved = p->value[i];
      auto at = [&](double v) {
        p->value[i] = v;
        Evaluation e = evaluate();
        p->value[i] = saved;
        return e;
      };
      update(report.result, i, p->grad[i], central_difference(at, saved, eps, reference, report.result));
    }
    reports.push_back(std::move(report));
  }
  for (Parameter* p : params) p->zero_grad();
  return reports;
}

}  // namespace mrfgat::ad
