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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "mrfgat/autodiff/adam.hpp"
#include "mrfgat/autodiff/grad_check.hpp"
#include "mrfgat/autodiff/ops.hpp"
#include "mrfgat/errors.hpp"
#include "test_util.hpp"

namespace mrfgat::ad {
namespace {

using mrfgat::testing::random_vector;

std::vector<double> values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

TEST(LinearTest, IdentityAndHandSum) {
  Tape tape;
  const Tensor y = linear(tape.constant({2}, {1, 2}), tape.constant({2, 2}, {1, 0, 0, 1}),
                          tape.constant({2}, {0, 0}));
  EXPECT_EQ(values(y), (std::vector<double>{1, 2}));
  const Tensor z = linear(tape.constant({2}, {1, 1}), tape.constant({2, 1}, {1, 1}), tape.constant({1}, {3}));
  EXPECT_EQ(values(z), (std::vector<double>{5}));
}

TEST(LinearTest, MatchesTripleLoopOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_vector(12, rng);
    const auto w = random_vector(8, rng);
    const auto b = random_vector(2, rng);
    Tape tape;
    const Tensor y = linear(tape.constant({3, 4}, x), tape.constant({4, 2}, w), tape.constant({2}, b));
    ASSERT_EQ(y.shape(), (Shape{3, 2}));
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t j = 0; j < 2; ++j) {
        double expected = b[j];
        for (std::size_t i = 0; i < 4; ++i) expected += x[r * 4 + i] * w[i * 2 + j];
        EXPECT_NEAR(y.data()[r * 2 + j], expected, 1e-12);
      }
    }
  }
}

TEST(LinearTest, ShapeMismatchNamesBothShapes) {
  Tape tape;
  try {
    linear(tape.constant({2, 3}, std::vector<double>(6)), tape.constant({4, 2}, std::vector<double>(8)));
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("[2, 3]"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("[4, 2]"), std::string::npos);
  }
}

TEST(ActivationTest, LeakyReluValuesAndDerivative) {
  Tape tape;
  const Tensor x = tape.variable({4}, {5, -1, 0, -2});
  const Tensor y = leaky_relu(x, 0.2);
  EXPECT_EQ(y.data()[0], 5.0);
  EXPECT_DOUBLE_EQ(y.data()[1], -0.2);
  EXPECT_EQ(y.data()[2], 0.0);
  tape.backward(sum(y));
  EXPECT_EQ(values(x).size(), 4u);
  EXPECT_DOUBLE_EQ(x.grad()[0], 1.0);
  EXPECT_DOUBLE_EQ(x.grad()[1], 0.2);
  EXPECT_DOUBLE_EQ(x.grad()[2], 1.0);  // x >= 0 takes slope 1
  EXPECT_DOUBLE_EQ(x.grad()[3], 0.2);
}

TEST(ActivationTest, ReluValuesAndSubgradient) {
  Tape tape;
  const Tensor x = tape.variable({3}, {-3, 3, 0});
  const Tensor y = relu(x);
  EXPECT_EQ(values(y), (std::vector<double>{0, 3, 0}));
  tape.backward(sum(y));
  EXPECT_EQ(x.grad()[0], 0.0);
  EXPECT_EQ(x.grad()[1], 1.0);
  EXPECT_EQ(x.grad()[2], 0.0);
}

TEST(SoftmaxTest, ClosedForms) {
  Tape tape;
  const Tensor a = softmax_last(tape.constant({3}, {7.5, 7.5, 7.5}));
  for (double v : a.data()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
  const Tensor b = softmax_last(tape.constant({2}, {0, std::log(3.0)}));
  EXPECT_NEAR(b.data()[0], 0.25, 1e-15);
  EXPECT_NEAR(b.data()[1], 0.75, 1e-15);
  const Tensor c = softmax_last(tape.constant({2}, {1000, 1000}));
  EXPECT_EQ(c.data()[0], 0.5);
  EXPECT_EQ(c.data()[1], 0.5);
}

TEST(SoftmaxTest, RowsSumToOneAndShiftInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + uniform_index(rng, 12);
    auto x = random_vector(4 * k, rng, 20.0);
    const double shift = uniform(rng, -100, 100);
    auto shifted = x;
    for (double& v : shifted) v += shift;
    Tape tape;
    const Tensor y = softmax_last(tape.constant({4, k}, x));
    const Tensor ys = softmax_last(tape.constant({4, k}, shifted));
    for (std::size_t r = 0; r < 4; ++r) {
      double total = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        EXPECT_GE(y.data()[r * k + j], 0.0);
        EXPECT_NEAR(y.data()[r * k + j], ys.data()[r * k + j], 1e-12);
        total += y.data()[r * k + j];
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(BatchNormTest, AlreadyNormalizedBatchPassesThrough) {
  // Per-channel mean 0 and variance 1.
  const std::vector<double> x{1, -1, -1, 1, 1, -1, -1, 1};
  Tape tape;
  BatchNormStats stats(2);
  const Tensor y = batch_norm(tape.constant({4, 2}, x), tape.constant({2}, {1, 1}),
                              tape.constant({2}, {0, 0}), stats, Mode::Train);
  for (std::size_t i = 0; i < x.size(); ++i) {
    // Exact value is x / sqrt(1 + eps); eps = 1e-5 puts it 5e-6 * |x| from x.
    EXPECT_NEAR(y.data()[i], x[i] / std::sqrt(1.0 + stats.eps), 1e-15);
    EXPECT_NEAR(y.data()[i], x[i], 5e-6 * std::abs(x[i]) + 1e-12);
  }
}

TEST(BatchNormTest, ZeroScaleGivesShift) {
  Rng rng(3);
  Tape tape;
  BatchNormStats stats(3);
  const Tensor y = batch_norm(tape.constant({5, 3}, random_vector(15, rng)), tape.constant({3}, {0, 0, 0}),
                              tape.constant({3}, {0.5, -2, 7}), stats, Mode::Train);
  for (std::size_t r = 0; r < 5; ++r) {
    EXPECT_EQ(y.data()[r * 3 + 0], 0.5);
    EXPECT_EQ(y.data()[r * 3 + 1], -2.0);
    EXPECT_EQ(y.data()[r * 3 + 2], 7.0);
  }
}

TEST(BatchNormTest, NormalizedMomentsRecomputedDirectly) {
  Rng rng(9);
  const std::size_t rows = 64;
  const std::size_t c = 4;
  auto x = random_vector(rows * c, rng, 10.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += static_cast<double>(i % c) * 3.0;
  Tape tape;
  BatchNormStats stats(c);
  const Tensor y = batch_norm(tape.constant({2, 32, c}, x), tape.constant({c}, std::vector<double>(c, 1.0)),
                              tape.constant({c}, std::vector<double>(c, 0.0)), stats, Mode::Train);
  for (std::size_t j = 0; j < c; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < rows; ++r) mean += y.data()[r * c + j];
    mean /= rows;
    double var = 0.0;
    for (std::size_t r = 0; r < rows; ++r) var += (y.data()[r * c + j] - mean) * (y.data()[r * c + j] - mean);
    var /= rows;
    EXPECT_LE(std::abs(mean), 1e-10);
    EXPECT_NEAR(var, 1.0, 1e-6);
  }
}

TEST(BatchNormTest, InferModeUsesRunningStatsOnly) {
  Tape tape;
  BatchNormStats stats(1);
  stats.running_mean = {2.0};
  stats.running_var = {4.0};
  const Tensor y = batch_norm(tape.constant({2, 1}, {2, 6}), tape.constant({1}, {1}), tape.constant({1}, {0}),
                              stats, Mode::Infer);
  EXPECT_NEAR(y.data()[0], 0.0, 1e-15);
  EXPECT_NEAR(y.data()[1], 4.0 / std::sqrt(4.0 + 1e-5), 1e-15);
  EXPECT_EQ(stats.running_mean[0], 2.0);
  EXPECT_EQ(stats.running_var[0], 4.0);
}

TEST(BatchNormTest, TrainModeUpdatesRunningStats) {
  Tape tape;
  BatchNormStats stats(1);
  batch_norm(tape.constant({2, 1}, {1, 3}), tape.constant({1}, {1}), tape.constant({1}, {0}), stats,
             Mode::Train);
  EXPECT_NEAR(stats.running_mean[0], 0.1 * 2.0, 1e-15);
  EXPECT_NEAR(stats.running_var[0], 0.9 + 0.1 * 2.0, 1e-15);  // unbiased batch variance is 2
}

TEST(ReduceMaxTest, ValuesTiesAndErrors) {
  Tape tape;
  const Tensor x = tape.variable({2, 2}, {1, 5, 2, 2});
  const Tensor m = reduce_max_axis(x, 0);
  EXPECT_EQ(values(m), (std::vector<double>{2, 5}));
  const Tensor single = reduce_max_axis(tape.constant({1, 3}, {4, 5, 6}), 0);
  EXPECT_EQ(values(single), (std::vector<double>{4, 5, 6}));
  EXPECT_THROW(reduce_max_axis(x, 2), DimensionError);

  Tape tie_tape;
  const Tensor tie = tie_tape.variable({2}, {3, 3});
  tie_tape.backward(reduce_max_axis(tie, 0));
  EXPECT_EQ(tie.grad()[0], 1.0);
  EXPECT_EQ(tie.grad()[1], 0.0);
}

TEST(ConcatTest, OrderSingletonAndRoundTrip) {
  Tape tape;
  const Tensor a = tape.constant({2, 1}, {1, 2});
  const Tensor b = tape.constant({2, 2}, {3, 4, 5, 6});
  EXPECT_EQ(values(concat_last({a})), values(a));
  const Tensor c = concat_last({a, b});
  EXPECT_EQ(c.shape(), (Shape{2, 3}));
  EXPECT_EQ(values(c), (std::vector<double>{1, 3, 4, 2, 5, 6}));
  EXPECT_THROW(concat_last({a, tape.constant({3, 1}, {1, 2, 3})}), DimensionError);
}

TEST(ConcatTest, SlicingRecoversPartsBitForBit) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 1 + uniform_index(rng, 5);
    std::vector<std::size_t> widths;
    Tape tape;
    std::vector<Tensor> parts;
    for (std::size_t p = 0; p < 1 + uniform_index(rng, 4); ++p) {
      widths.push_back(1 + uniform_index(rng, 6));
      parts.push_back(tape.constant({rows, widths.back()}, random_vector(rows * widths.back(), rng, 1e3)));
    }
    const Tensor joined = concat_last(parts);
    std::size_t offset = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      EXPECT_EQ(values(slice_last(joined, offset, offset + widths[p])), values(parts[p]));
      offset += widths[p];
    }
  }
}

// Independent two-step reference: softmax, then -log of the true class.
double two_step_cross_entropy(const std::vector<double>& logits, const std::vector<int>& labels, std::size_t c) {
  double total = 0.0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    double denom = 0.0;
    for (std::size_t j = 0; j < c; ++j) denom += std::exp(logits[b * c + j]);
    total += -std::log(std::exp(logits[b * c + labels[b]]) / denom);
  }
  return total / static_cast<double>(labels.size());
}

TEST(CrossEntropyTest, ClosedFormsAndOracle) {
  Tape tape;
  const std::vector<int> zero{0};
  EXPECT_NEAR(cross_entropy_with_logits(tape.constant({1, 5}, {2, 2, 2, 2, 2}), zero).item(), std::log(5.0), 1e-15);
  EXPECT_NEAR(cross_entropy_with_logits(tape.constant({1, 3}, {50, 0, 0}), zero).item(), 0.0, 1e-20);

  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t batch = 1 + uniform_index(rng, 6);
    const std::size_t c = 2 + uniform_index(rng, 8);
    const auto logits = random_vector(batch * c, rng, 5.0);
    std::vector<int> labels(batch);
    for (int& l : labels) l = static_cast<int>(uniform_index(rng, c));
    const double fused = cross_entropy_with_logits(tape.constant({batch, c}, logits), labels).item();
    EXPECT_NEAR(fused, two_step_cross_entropy(logits, labels, c), 1e-10);
  }
}

TEST(CrossEntropyTest, LabelOutOfRangeRejected) {
  Tape tape;
  const std::vector<int> bad{3};
  EXPECT_THROW(cross_entropy_with_logits(tape.constant({1, 3}, {1, 2, 3}), bad), ValidationError);
  const std::vector<int> negative{-1};
  EXPECT_THROW(cross_entropy_with_logits(tape.constant({1, 3}, {1, 2, 3}), negative), ValidationError);
}

TEST(BackwardTest, LinearFormGradientAndUnusedParameter) {
  Parameter w("w", {3});
  w.value = {0.5, -1, 2};
  Parameter unused("unused", {2});
  Tape tape;
  const Tensor x = tape.constant({3}, {4, 5, 6});
  const Tensor loss = sum(mul(tape.parameter(w), x));
  tape.parameter(unused);
  tape.backward(loss);
  EXPECT_EQ(w.grad, (std::vector<double>{4, 5, 6}));
  EXPECT_EQ(unused.grad, (std::vector<double>{0, 0}));
}

TEST(BackwardTest, NonScalarLossRejected) {
  Tape tape;
  const Tensor x = tape.variable({2}, {1, 2});
  EXPECT_THROW(tape.backward(x), ContractError);
}

TEST(BackwardTest, ParameterUsedTwiceAccumulates) {
  Parameter w("w", {1});
  w.value = {3};
  Tape tape;
  const Tensor a = tape.parameter(w);
  const Tensor b = tape.parameter(w);
  tape.backward(sum(mul(a, b)));
  EXPECT_DOUBLE_EQ(w.grad[0], 6.0);
}

TEST(AdamTest, ZeroGradientIsIdentity) {
  Parameter p("p", {3});
  p.value = {1, -2, 3};
  Adam adam(0.1);
  std::vector<Parameter*> ps{&p};
  for (int i = 0; i < 5; ++i) adam.step(ps);
  EXPECT_EQ(p.value, (std::vector<double>{1, -2, 3}));
  EXPECT_EQ(adam.state().step, 5u);
}

TEST(AdamTest, FirstStepMovesBySignTimesRate) {
  Parameter p("p", {3});
  p.value = {0, 0, 0};
  p.grad = {0.3, -7, 1e-3};
  Adam adam(0.01);
  std::vector<Parameter*> ps{&p};
  adam.step(ps);
  EXPECT_NEAR(p.value[0], -0.01, 1e-9);
  EXPECT_NEAR(p.value[1], 0.01, 1e-9);
  EXPECT_NEAR(p.value[2], -0.01, 1e-7);
  EXPECT_EQ(p.grad, (std::vector<double>{0, 0, 0}));
}

TEST(AdamTest, ConvergesOnShiftedQuadratic) {
  Parameter w("w", {1});
  Adam adam(0.1);
  std::vector<Parameter*> ps{&w};
  for (int step = 0; step < 200; ++step) {
    Tape tape;
    const Tensor d = add(tape.parameter(w), tape.constant({1}, {-3}));
    tape.backward(sum(mul(d, d)));
    adam.step(ps);
  }
  EXPECT_LT(std::abs(w.value[0] - 3.0), 0.1);
}

TEST(GradCheckTest, SumOfSquaresIsExact) {
  Rng rng(1);
  const auto x = random_vector(10, rng);
  const auto r = grad_check([](Tape&, const Tensor& t) { return sum(mul(t, t)); }, {10}, x, 1e-5);
  EXPECT_LT(r.max_relative_error, 1e-8);
}

TEST(GradCheckTest, SoftmaxCrossEntropy) {
  Rng rng(2);
  const std::vector<int> labels{1, 0, 2};
  const auto r = grad_check(
      [&](Tape& tape, const Tensor& t) {
        const Tensor p = softmax_last(t);
        return cross_entropy_with_logits(add(p, scale(t, 0.5)), labels);
      },
      {3, 3}, random_vector(9, rng, 2.0), 1e-5);
  EXPECT_LT(r.max_relative_error, 1e-6);
}

TEST(GradCheckTest, NonDeterministicFunctionRejected) {
  int calls = 0;
  auto f = [&](Tape& tape, const Tensor& t) { return add(sum(t), tape.constant({1}, {1e-3 * ++calls})); };
  EXPECT_THROW(grad_check(f, {2}, {1, 2}, 1e-5), ContractError);
}

// Every differentiable primitive against central differences on random
// shapes and inputs.
TEST(GradCheckTest, ProbeCrossingAKinkIsShrunk) {
  // relu(x) * 3 with x 2e-5 above the kink: a 1e-4 step straddles it.
  auto f = [](Tape&, const Tensor& t) { return scale(sum(relu(t)), 3.0); };
  const auto r = grad_check(f, {2}, {2e-5, 0.5}, 1e-4);
  EXPECT_EQ(r.reduced_steps, 1u);
  EXPECT_EQ(r.nonsmooth, 0u);
  EXPECT_LT(r.max_relative_error, 1e-9);
  // Max reduction with a 1e-6 gap between the two largest entries.
  auto g = [](Tape&, const Tensor& t) { return sum(mul(reduce_max_axis(t, 0), reduce_max_axis(t, 0))); };
  const auto m = grad_check(g, {3}, {0.3, 0.3 + 1e-6, -1.0}, 1e-4);
  EXPECT_EQ(m.reduced_steps, 2u);
  EXPECT_LT(m.max_relative_error, 1e-6);
}

TEST(GradCheckTest, PointOnAKinkIsReportedNonSmooth) {
  auto f = [](Tape&, const Tensor& t) { return sum(relu(t)); };
  const auto r = grad_check(f, {1}, {0.0}, 1e-4);
  EXPECT_EQ(r.nonsmooth, 1u);
  // Subgradient 0 against a one-sided average of 0.5.
  EXPECT_GT(r.max_relative_error, 0.5);
}

TEST(TapeTest, BranchLogOnlyWhenTracking) {
  Tape off(GradMode::Disabled);
  relu(off.constant({3}, {-1, 0, 2}));
  EXPECT_TRUE(off.branches().empty());
  Tape on(GradMode::Disabled);
  on.track_branches(true);
  const Tensor x = on.constant({2, 3}, {-1, 0, 2, 5, -4, 1});
  relu(x);
  leaky_relu(x, 0.2);
  reduce_max_axis(x, 1);
  EXPECT_EQ(on.branches(), (std::vector<std::uint32_t>{0, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0, 1, 2, 3}));
}

TEST(GradCheckTest, PrimitivesOnRandomShapes) {
  Rng rng(31);
  using Fn = std::function<Tensor(Tape&, const Tensor&, Rng&, std::size_t, std::size_t)>;
  // Each entry receives the input [rows, cols] and reduces to a scalar by a
  // random weighted sum so every output coordinate matters.
  const std::vector<std::pair<const char*, Fn>> primitives{
      {"linear", [](Tape& t, const Tensor& x, Rng& r, std::size_t, std::size_t cols) {
         return linear(x, t.constant({cols, 3}, random_vector(cols * 3, r)), t.constant({3}, random_vector(3, r)));
       }},
      {"relu", [](Tape&, const Tensor& x, Rng&, std::size_t, std::size_t) { return relu(x); }},
      {"leaky_relu", [](Tape&, const Tensor& x, Rng&, std::size_t, std::size_t) { return leaky_relu(x, 0.2); }},
      {"softmax", [](Tape&, const Tensor& x, Rng&, std::size_t, std::size_t) { return softmax_last(x); }},
      {"reduce_max0", [](Tape&, const Tensor& x, Rng&, std::size_t, std::size_t) { return reduce_max_axis(x, 0); }},
      {"reduce_max1", [](Tape&, const Tensor& x, Rng&, std::size_t, std::size_t) { return reduce_max_axis(x, 1); }},
      {"concat_slice", [](Tape&, const Tensor& x, Rng&, std::size_t, std::size_t cols) {
         return slice_last(concat_last({x, relu(x)}), cols / 2, cols + 1);
       }},
      {"attention_sum", [](Tape& t, const Tensor& x, Rng& r, std::size_t rows, std::size_t cols) {
         return attention_sum(softmax_last(x), t.constant({rows, cols, 2}, random_vector(rows * cols * 2, r)));
       }},
      {"attention_values", [](Tape& t, const Tensor& x, Rng& r, std::size_t rows, std::size_t cols) {
         return attention_sum(t.constant({rows}, random_vector(rows, r)), reshape(x, {rows, cols}));
       }},
      {"batch_norm_train", [](Tape& t, const Tensor& x, Rng& r, std::size_t, std::size_t cols) {
         BatchNormStats stats(cols);
         return batch_norm(x, t.constant({cols}, random_vector(cols, r)), t.constant({cols}, random_vector(cols, r)),
                           stats, Mode::Train);
       }},
      {"batch_norm_infer", [](Tape& t, const Tensor& x, Rng& r, std::size_t, std::size_t cols) {
         BatchNormStats stats(cols);
         for (double& v : stats.running_var) v = 0.5 + uniform01(r);
         return batch_norm(x, t.constant({cols}, random_vector(cols, r)), t.constant({cols}, random_vector(cols, r)),
                           stats, Mode::Infer);
       }},
      {"cross_entropy", [](Tape& t, const Tensor& x, Rng& r, std::size_t rows, std::size_t cols) {
         std::vector<int> labels(rows);
         for (int& l : labels) l = static_cast<int>(uniform_index(r, cols));
         return cross_entropy_with_logits(x, labels);
       }},
      {"mul_add_scale", [](Tape&, const Tensor& x, Rng&, std::size_t, std::size_t) {
         return scale(add(mul(x, x), x), -1.5);
       }},
  };
  for (const auto& [name, fn] : primitives) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t rows = 2 + uniform_index(rng, 5);
      const std::size_t cols = 2 + uniform_index(rng, 5);
      const auto x = random_vector(rows * cols, rng, 2.0);
      const std::uint64_t seed = rng();
      const auto result = grad_check(
          [&](Tape& tape, const Tensor& in) {
            Rng local(seed);
            const Tensor out = fn(tape, in, local, rows, cols);
            if (out.size() == 1) return out;
            return sum(mul(out, tape.constant(out.shape(), random_vector(out.size(), local))));
          },
          {rows, cols}, x, 1e-6);
      EXPECT_LT(result.max_relative_error, 1e-4) << name << " trial " << trial;
    }
  }
}

TEST(GradCheckTest, LinearWeightGradient) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t cin = 1 + uniform_index(rng, 5);
    const std::size_t cout = 1 + uniform_index(rng, 5);
    const auto inputs = random_vector(3 * 2 * cin, rng);
    const auto weights = random_vector(3 * 2 * cout, rng);
    const auto result = grad_check(
        [&](Tape& tape, const Tensor& w) {
          const Tensor y = linear(tape.constant({3, 2, cin}, inputs), w);
          return sum(mul(y, tape.constant(y.shape(), weights)));
        },
        {cin, cout}, random_vector(cin * cout, rng), 1e-6);
    EXPECT_LT(result.max_relative_error, 1e-4);
  }
}

TEST(TapeTest, ReplayIsBitIdentical) {
  Rng a(99);
  Rng b(99);
  auto run = [](Rng& rng) {
    Tape tape;
    const Tensor x = tape.constant({8, 5}, random_vector(40, rng));
    const Tensor w = tape.constant({5, 3}, random_vector(15, rng));
    BatchNormStats stats(3);
    const Tensor y = softmax_last(batch_norm(linear(x, w), tape.constant({3}, {1, 1, 1}),
                                             tape.constant({3}, {0, 0, 0}), stats, Mode::Train));
    return std::vector<double>(y.data().begin(), y.data().end());
  };
  EXPECT_EQ(run(a), run(b));
}

TEST(TapeTest, DisabledTapeRecordsNoGradient) {
  Tape tape(GradMode::Disabled);
  const Tensor x = tape.variable({2}, {1, 2});
  EXPECT_FALSE(x.requires_grad());
  const Tensor y = sum(x);
  EXPECT_FALSE(y.requires_grad());
}

}  // namespace
}  // namespace mrfgat::ad
