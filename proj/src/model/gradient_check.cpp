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

#include "mrfgat/model/gradient_check.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "mrfgat/autodiff/ops.hpp"
#include "mrfgat/model/network.hpp"
#include "mrfgat/rng.hpp"

namespace mrfgat::model {

ad::Tensor GradCheckProblem::loss(ad::Tape& tape) {
  Rng dropout(dropout_seed);
  ForwardOptions options;
  options.mode = mode;
  options.dropout_rng = &dropout;
  const ad::Tensor logits = mrfgat_forward(tape, clouds, params, config, options);
  return ad::cross_entropy_with_logits(logits, labels);
}

namespace {

// Shifts each edge scorer's bias so its scores on the problem's clouds
// straddle zero.
void center_edge_scorers(GradCheckProblem& problem) {
  for (SrfgatParams& branch : problem.params.scales) {
    std::vector<double> scores;
    for (const geo::PointCloud& pc : problem.clouds) {
      const geo::NeighborGraph g = geo::knn_graph(pc, branch.neighbors);
      ad::Tape tape(ad::GradMode::Disabled);
      const ad::Tensor edges = tape.constant({g.n, g.k, 3}, g.edges);
      const ad::Tensor feat = ad::relu(ad::linear(edges, tape.parameter(branch.edge_transform.weight),
                                                  tape.parameter(branch.edge_transform.bias)));
      const ad::Tensor s = ad::linear(feat, tape.parameter(branch.edge_scorer.weight));
      scores.insert(scores.end(), s.data().begin(), s.data().end());
    }
    // Threshold in the middle of the widest gap of the central half, away
    // from every score (the self-edge score repeats for every point).
    if (scores.size() < 2) continue;
    std::sort(scores.begin(), scores.end());
    const std::size_t lo = scores.size() / 4;
    const std::size_t hi = std::max(lo + 1, 3 * scores.size() / 4);
    std::size_t best = lo;
    for (std::size_t i = lo; i + 1 < hi && i + 1 < scores.size(); ++i) {
      if (scores[i + 1] - scores[i] > scores[best + 1] - scores[best]) best = i;
    }
    branch.edge_scorer.bias.value[0] = -0.5 * (scores[best] + scores[best + 1]);
  }
}

}  // namespace

GradCheckProblem make_gradcheck_problem(const MRFGATConfig& config, std::size_t points, std::size_t batch,
                                        std::uint64_t seed) {
  GradCheckProblem problem;
  problem.config = config;
  problem.params = param_init(config, seed);
  problem.dropout_seed = derive_seed(seed, {3});
  Rng rng(derive_seed(seed, {1}));
  for (ad::Parameter* p : problem.params.parameters()) {
    if (p->shape.size() == 2) continue;
    const bool is_scale = p->name.ends_with(".gamma");
    for (double& v : p->value) v = (is_scale ? 1.0 : 0.0) + uniform(rng, -0.2, 0.2);
  }
  for (std::size_t b = 0; b < batch; ++b) {
    geo::PointCloud pc;
    for (std::size_t i = 0; i < points; ++i) {
      pc.points.push_back({standard_normal(rng), standard_normal(rng), standard_normal(rng)});
    }
    problem.clouds.push_back(geo::normalize_unit_sphere(pc));
    problem.labels.push_back(static_cast<int>(b % config.classes));
  }
  for (BatchNorm* bn : problem.params.batch_norms()) {
    for (double& m : bn->stats.running_mean) m = uniform(rng, -0.3, 0.3);
    for (double& v : bn->stats.running_var) v = uniform(rng, 0.5, 1.5);
  }
  center_edge_scorers(problem);
  return problem;
}

double NetworkGradReport::max_error() const {
  double worst = 0.0;
  for (const auto& b : blocks) worst = std::max(worst, b.result.max_relative_error);
  return worst;
}

std::vector<std::string> NetworkGradReport::failing_blocks() const {
  std::vector<std::string> out;
  for (const auto& b : blocks) {
    if (!(b.result.max_relative_error < tolerance)) out.push_back(b.name);
  }
  return out;
}

NetworkGradReport check_network_gradients(GradCheckProblem& problem, double eps, double tolerance) {
  NetworkGradReport report;
  report.tolerance = tolerance;
  const auto params = problem.params.parameters();
  // Train mode updates running statistics on every evaluation; restore them
  // so repeated evaluations see the same state.
  std::vector<ad::BatchNormStats> saved;
  for (const BatchNorm* bn : problem.params.batch_norms()) saved.push_back(bn->stats);
  auto loss = [&](ad::Tape& tape) {
    const auto bns = problem.params.batch_norms();
    for (std::size_t i = 0; i < bns.size(); ++i) bns[i]->stats = saved[i];
    return problem.loss(tape);
  };
  report.blocks = ad::grad_check_parameters(loss, params, eps);
  const auto bns = problem.params.batch_norms();
  for (std::size_t i = 0; i < bns.size(); ++i) bns[i]->stats = saved[i];
  return report;
}

std::string format_gradient_report(const NetworkGradReport& report) {
  std::string out = fmt::format("{:<36} {:>7} {:>12} {:>14} {:>14} {:>8}\n", "block", "coords", "max_rel_err",
                                "analytic", "numeric", "reduced");
  std::size_t reduced = 0;
  std::size_t nonsmooth = 0;
  for (const auto& b : report.blocks) {
    out += fmt::format("{:<36} {:>7} {:>12.3e} {:>14.6e} {:>14.6e} {:>8}{}\n", b.name, b.checked,
                       b.result.max_relative_error, b.result.analytic, b.result.numeric, b.result.reduced_steps,
                       b.result.max_relative_error < report.tolerance ? "" : "  <-- FAIL");
    reduced += b.result.reduced_steps;
    nonsmooth += b.result.nonsmooth;
  }
  if (reduced > 0 || nonsmooth > 0) {
    out += fmt::format("{} coordinate(s) probed with a smaller step to stay off a kink, {} without a smooth step\n",
                       reduced, nonsmooth);
  }
  const auto failing = report.failing_blocks();
  if (failing.empty()) {
    out += fmt::format("PASS max relative error {:.3e} < {:.0e}\n", report.max_error(), report.tolerance);
  } else {
    out += fmt::format("FAIL max relative error {:.3e} >= {:.0e} in:", report.max_error(), report.tolerance);
    for (const auto& name : failing) out += " " + name;
    out += "\n";
  }
  return out;
}

}  // namespace mrfgat::model
