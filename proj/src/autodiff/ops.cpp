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

#include "mrfgat/autodiff/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "mrfgat/errors.hpp"

namespace mrfgat::ad {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

Tape& tape_of(const Tensor& t) {
  if (!t.valid()) throw ContractError("operation on an empty tensor handle");
  return *t.tape();
}

void require_same_tape(const Tensor& a, const Tensor& b) {
  if (a.tape() != b.tape()) throw ContractError("operands recorded on different tapes");
}

std::size_t last_extent(const Shape& s) { return s.empty() ? 1 : s.back(); }

Shape with_last(Shape s, std::size_t last) {
  if (s.empty()) return {last};
  s.back() = last;
  return s;
}

Tensor linear_impl(const Tensor& x, const Tensor& w, const Tensor* b) {
  Tape& tape = tape_of(x);
  require_same_tape(x, w);
  const Shape& xs = x.shape();
  const Shape& ws = w.shape();
  if (ws.size() != 2 || last_extent(xs) != ws[0]) {
    throw DimensionError("linear: input " + shape_string(xs) + " incompatible with weight " +
                         shape_string(ws));
  }
  const std::size_t cin = ws[0];
  const std::size_t cout = ws[1];
  if (b != nullptr) {
    require_same_tape(x, *b);
    if (b->shape() != Shape{cout}) {
      throw DimensionError("linear: bias " + shape_string(b->shape()) + " does not match weight " +
                           shape_string(ws));
    }
  }
  const std::size_t rows = x.size() / cin;
  std::vector<double> out(rows * cout);
  {
    ConstMap xm(x.data().data(), rows, cin);
    ConstMap wm(w.data().data(), cin, cout);
    MutMap ym(out.data(), rows, cout);
    ym.noalias() = xm * wm;
    if (b != nullptr) {
      const auto bv = b->data();
      for (std::size_t r = 0; r < rows; ++r) {
        double* row = out.data() + r * cout;
        for (std::size_t j = 0; j < cout; ++j) row[j] += bv[j];
      }
    }
  }
  const std::size_t xid = x.id();
  const std::size_t wid = w.id();
  const bool has_bias = b != nullptr;
  const std::size_t bid = has_bias ? b->id() : 0;
  auto backward = [xid, wid, bid, has_bias, rows, cin, cout](Tape& t, std::size_t self) {
    ConstMap dy(t.grad(self).data(), rows, cout);
    if (t.requires_grad(xid)) {
      MutMap dx(t.grad_buffer(xid).data(), rows, cin);
      ConstMap wm(t.value(wid).data(), cin, cout);
      dx.noalias() += dy * wm.transpose();
    }
    if (t.requires_grad(wid)) {
      MutMap dw(t.grad_buffer(wid).data(), cin, cout);
      ConstMap xm(t.value(xid).data(), rows, cin);
      dw.noalias() += xm.transpose() * dy;
    }
    if (has_bias && t.requires_grad(bid)) {
      auto db = t.grad_buffer(bid);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < cout; ++j) db[j] += dy(r, j);
      }
    }
  };
  Shape shape = with_last(xs, cout);
  if (has_bias) return tape.record(std::move(shape), std::move(out), {x, w, *b}, backward);
  return tape.record(std::move(shape), std::move(out), {x, w}, backward);
}

}  // namespace

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) { return linear_impl(x, w, &b); }
Tensor linear(const Tensor& x, const Tensor& w) { return linear_impl(x, w, nullptr); }

Tensor leaky_relu(const Tensor& x, double slope) {
  if (!(slope > 0.0 && slope < 1.0)) throw ValidationError("leaky_relu: slope must lie in (0, 1)");
  const auto in = x.data();
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] >= 0.0 ? in[i] : slope * in[i];
  if (tape_of(x).tracking_branches()) {
    for (double v : in) tape_of(x).note_branch(v >= 0.0);
  }
  const std::size_t xid = x.id();
  return tape_of(x).record(x.shape(), std::move(out), {x}, [xid, slope](Tape& t, std::size_t self) {
    const auto dy = t.grad(self);
    const auto xv = t.value(xid);
    auto dx = t.grad_buffer(xid);
    for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += xv[i] >= 0.0 ? dy[i] : slope * dy[i];
  });
}

Tensor relu(const Tensor& x) {
  const auto in = x.data();
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
  if (tape_of(x).tracking_branches()) {
    for (double v : in) tape_of(x).note_branch(v > 0.0);
  }
  const std::size_t xid = x.id();
  return tape_of(x).record(x.shape(), std::move(out), {x}, [xid](Tape& t, std::size_t self) {
    const auto dy = t.grad(self);
    const auto xv = t.value(xid);
    auto dx = t.grad_buffer(xid);
    for (std::size_t i = 0; i < dy.size(); ++i) {
      if (xv[i] > 0.0) dx[i] += dy[i];
    }
  });
}

Tensor softmax_last(const Tensor& x) {
  const std::size_t k = last_extent(x.shape());
  const auto in = x.data();
  const std::size_t rows = in.size() / k;
  std::vector<double> out(in.size());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = in.data() + r * k;
    double* dst = out.data() + r * k;
    const double m = *std::max_element(src, src + k);
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      dst[j] = std::exp(src[j] - m);
      total += dst[j];
    }
    for (std::size_t j = 0; j < k; ++j) dst[j] /= total;
  }
  const std::size_t xid = x.id();
  return tape_of(x).record(x.shape(), std::move(out), {x}, [xid, rows, k](Tape& t, std::size_t self) {
    const auto dy = t.grad(self);
    const auto y = t.value(self);
    auto dx = t.grad_buffer(xid);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t o = r * k;
      double dot = 0.0;
      for (std::size_t j = 0; j < k; ++j) dot += dy[o + j] * y[o + j];
      for (std::size_t j = 0; j < k; ++j) dx[o + j] += y[o + j] * (dy[o + j] - dot);
    }
  });
}

Tensor attention_sum(const Tensor& weights, const Tensor& values) {
  require_same_tape(weights, values);
  const Shape& ws = weights.shape();
  const Shape& vs = values.shape();
  if (vs.size() != ws.size() + 1 || !std::equal(ws.begin(), ws.end(), vs.begin())) {
    throw DimensionError("attention_sum: weights " + shape_string(ws) +
                         " incompatible with values " + shape_string(vs));
  }
  const std::size_t k = ws.back();
  const std::size_t f = vs.back();
  const std::size_t rows = weights.size() / k;
  const auto w = weights.data();
  const auto v = values.data();
  std::vector<double> out(rows * f, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double* dst = out.data() + r * f;
    for (std::size_t j = 0; j < k; ++j) {
      const double a = w[r * k + j];
      const double* src = v.data() + (r * k + j) * f;
      for (std::size_t c = 0; c < f; ++c) dst[c] += a * src[c];
    }
  }
  Shape shape(ws.begin(), ws.end() - 1);
  shape.push_back(f);
  const std::size_t wid = weights.id();
  const std::size_t vid = values.id();
  return tape_of(weights).record(
      std::move(shape), std::move(out), {weights, values},
      [wid, vid, rows, k, f](Tape& t, std::size_t self) {
        const auto dy = t.grad(self);
        if (t.requires_grad(wid)) {
          const auto vv = t.value(vid);
          auto dw = t.grad_buffer(wid);
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < k; ++j) {
              const double* src = vv.data() + (r * k + j) * f;
              double acc = 0.0;
              for (std::size_t c = 0; c < f; ++c) acc += dy[r * f + c] * src[c];
              dw[r * k + j] += acc;
            }
          }
        }
        if (t.requires_grad(vid)) {
          const auto wv = t.value(wid);
          auto dv = t.grad_buffer(vid);
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < k; ++j) {
              const double a = wv[r * k + j];
              double* dst = dv.data() + (r * k + j) * f;
              for (std::size_t c = 0; c < f; ++c) dst[c] += a * dy[r * f + c];
            }
          }
        }
      });
}

Tensor reduce_max_axis(const Tensor& x, std::size_t axis) {
  const Shape& xs = x.shape();
  if (axis >= xs.size()) {
    throw DimensionError("reduce_max_axis: axis " + std::to_string(axis) + " out of range for " +
                         shape_string(xs));
  }
  std::size_t outer = 1;
  std::size_t inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= xs[i];
  for (std::size_t i = axis + 1; i < xs.size(); ++i) inner *= xs[i];
  const std::size_t n = xs[axis];
  const auto in = x.data();
  std::vector<double> out(outer * inner);
  auto argmax = std::make_shared<std::vector<std::size_t>>(outer * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      std::size_t best = 0;
      double best_value = in[base];
      for (std::size_t j = 1; j < n; ++j) {
        const double v = in[base + j * inner];
        if (v > best_value) {
          best_value = v;
          best = j;
        }
      }
      out[o * inner + i] = best_value;
      (*argmax)[o * inner + i] = base + best * inner;
    }
  }
  if (tape_of(x).tracking_branches()) {
    for (std::size_t a : *argmax) tape_of(x).note_branch(static_cast<std::uint32_t>(a));
  }
  Shape shape;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != axis) shape.push_back(xs[i]);
  }
  if (shape.empty()) shape.push_back(1);
  const std::size_t xid = x.id();
  return tape_of(x).record(std::move(shape), std::move(out), {x},
                           [xid, argmax](Tape& t, std::size_t self) {
                             const auto dy = t.grad(self);
                             auto dx = t.grad_buffer(xid);
                             for (std::size_t i = 0; i < dy.size(); ++i) dx[(*argmax)[i]] += dy[i];
                           });
}

Tensor concat_last(std::initializer_list<Tensor> parts) {
  return concat_last(std::span<const Tensor>(parts.begin(), parts.size()));
}

Tensor concat_last(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_last: no parts");
  const Shape& first = parts[0].shape();
  const Shape lead(first.begin(), first.end() - 1);
  std::vector<std::size_t> widths;
  std::vector<std::size_t> ids;
  std::size_t total = 0;
  for (const Tensor& p : parts) {
    require_same_tape(parts[0], p);
    const Shape& s = p.shape();
    if (s.size() != first.size() || !std::equal(lead.begin(), lead.end(), s.begin())) {
      throw DimensionError("concat_last: part " + shape_string(s) + " does not match " +
                           shape_string(first));
    }
    widths.push_back(s.back());
    ids.push_back(p.id());
    total += s.back();
  }
  const std::size_t rows = parts[0].size() / widths[0];
  std::vector<double> out(rows * total);
  std::size_t offset = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto src = parts[p].data();
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(src.data() + r * widths[p], widths[p], out.data() + r * total + offset);
    }
    offset += widths[p];
  }
  return tape_of(parts[0]).record(
      with_last(first, total), std::move(out), parts,
      [ids, widths, rows, total](Tape& t, std::size_t self) {
        const auto dy = t.grad(self);
        std::size_t off = 0;
        for (std::size_t p = 0; p < ids.size(); ++p) {
          if (t.requires_grad(ids[p])) {
            auto dx = t.grad_buffer(ids[p]);
            for (std::size_t r = 0; r < rows; ++r) {
              for (std::size_t c = 0; c < widths[p]; ++c) {
                dx[r * widths[p] + c] += dy[r * total + off + c];
              }
            }
          }
          off += widths[p];
        }
      });
}

Tensor slice_last(const Tensor& x, std::size_t begin, std::size_t end) {
  const std::size_t width = last_extent(x.shape());
  if (begin >= end || end > width) {
    throw DimensionError("slice_last: range [" + std::to_string(begin) + ", " +
                         std::to_string(end) + ") invalid for " + shape_string(x.shape()));
  }
  const std::size_t rows = x.size() / width;
  const std::size_t w = end - begin;
  const auto in = x.data();
  std::vector<double> out(rows * w);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(in.data() + r * width + begin, w, out.data() + r * w);
  }
  const std::size_t xid = x.id();
  return tape_of(x).record(with_last(x.shape(), w), std::move(out), {x},
                           [xid, rows, width, begin, w](Tape& t, std::size_t self) {
                             const auto dy = t.grad(self);
                             auto dx = t.grad_buffer(xid);
                             for (std::size_t r = 0; r < rows; ++r) {
                               for (std::size_t c = 0; c < w; ++c) {
                                 dx[r * width + begin + c] += dy[r * w + c];
                               }
                             }
                           });
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_size(shape) != x.size()) {
    throw DimensionError("reshape: " + shape_string(x.shape()) + " cannot become " +
                         shape_string(shape));
  }
  const auto in = x.data();
  const std::size_t xid = x.id();
  return tape_of(x).record(std::move(shape), std::vector<double>(in.begin(), in.end()), {x},
                           [xid](Tape& t, std::size_t self) {
                             const auto dy = t.grad(self);
                             auto dx = t.grad_buffer(xid);
                             for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i];
                           });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_tape(a, b);
  if (a.shape() != b.shape()) {
    throw DimensionError("add: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
  const auto av = a.data();
  const auto bv = b.data();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] + bv[i];
  const std::size_t aid = a.id();
  const std::size_t bid = b.id();
  return tape_of(a).record(a.shape(), std::move(out), {a, b}, [aid, bid](Tape& t, std::size_t self) {
    const auto dy = t.grad(self);
    for (std::size_t id : {aid, bid}) {
      if (!t.requires_grad(id)) continue;
      auto dx = t.grad_buffer(id);
      for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_tape(a, b);
  if (a.shape() != b.shape()) {
    throw DimensionError("mul: " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  }
  const auto av = a.data();
  const auto bv = b.data();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = av[i] * bv[i];
  const std::size_t aid = a.id();
  const std::size_t bid = b.id();
  return tape_of(a).record(a.shape(), std::move(out), {a, b}, [aid, bid](Tape& t, std::size_t self) {
    const auto dy = t.grad(self);
    if (t.requires_grad(aid)) {
      const auto other = t.value(bid);
      auto dx = t.grad_buffer(aid);
      for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i] * other[i];
    }
    if (t.requires_grad(bid)) {
      const auto other = t.value(aid);
      auto dx = t.grad_buffer(bid);
      for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i] * other[i];
    }
  });
}

Tensor scale(const Tensor& x, double factor) {
  const auto in = x.data();
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * factor;
  const std::size_t xid = x.id();
  return tape_of(x).record(x.shape(), std::move(out), {x}, [xid, factor](Tape& t, std::size_t self) {
    const auto dy = t.grad(self);
    auto dx = t.grad_buffer(xid);
    for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i] * factor;
  });
}

Tensor sum(const Tensor& x) {
  double total = 0.0;
  for (double v : x.data()) total += v;
  const std::size_t xid = x.id();
  return tape_of(x).record({1}, {total}, {x}, [xid](Tape& t, std::size_t self) {
    const double dy = t.grad(self)[0];
    auto dx = t.grad_buffer(xid);
    for (double& g : dx) g += dy;
  });
}

Tensor dropout(const Tensor& x, double keep_prob, Rng& rng) {
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) {
    throw ValidationError("dropout: keep probability must lie in (0, 1]");
  }
  if (keep_prob == 1.0) return x;
  const auto in = x.data();
  auto mask = std::make_shared<std::vector<double>>(in.size());
  std::vector<double> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    (*mask)[i] = uniform01(rng) < keep_prob ? 1.0 / keep_prob : 0.0;
    out[i] = in[i] * (*mask)[i];
  }
  const std::size_t xid = x.id();
  return tape_of(x).record(x.shape(), std::move(out), {x}, [xid, mask](Tape& t, std::size_t self) {
    const auto dy = t.grad(self);
    auto dx = t.grad_buffer(xid);
    for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += dy[i] * (*mask)[i];
  });
}

Tensor cross_entropy_with_logits(const Tensor& logits, std::span<const int> labels) {
  const Shape& s = logits.shape();
  if (s.size() != 2) throw DimensionError("cross_entropy: logits must be [B, c], got " + shape_string(s));
  const std::size_t batch = s[0];
  const std::size_t classes = s[1];
  if (labels.size() != batch) {
    throw ValidationError("cross_entropy: " + std::to_string(labels.size()) + " labels for batch of " +
                          std::to_string(batch));
  }
  for (int label : labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw ValidationError("cross_entropy: label " + std::to_string(label) + " outside [0, " +
                            std::to_string(classes) + ")");
    }
  }
  const auto z = logits.data();
  auto probs = std::make_shared<std::vector<double>>(z.size());
  double loss = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const double* row = z.data() + b * classes;
    const double m = *std::max_element(row, row + classes);
    double total = 0.0;
    for (std::size_t j = 0; j < classes; ++j) total += std::exp(row[j] - m);
    const double lse = m + std::log(total);
    loss += lse - row[labels[b]];
    for (std::size_t j = 0; j < classes; ++j) (*probs)[b * classes + j] = std::exp(row[j] - lse);
  }
  loss /= static_cast<double>(batch);
  std::vector<int> targets(labels.begin(), labels.end());
  const std::size_t zid = logits.id();
  return tape_of(logits).record(
      {1}, {loss}, {logits}, [zid, probs, targets, batch, classes](Tape& t, std::size_t self) {
        const double dy = t.grad(self)[0] / static_cast<double>(batch);
        auto dz = t.grad_buffer(zid);
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t j = 0; j < classes; ++j) {
            const double onehot = static_cast<std::size_t>(targets[b]) == j ? 1.0 : 0.0;
            dz[b * classes + j] += dy * ((*probs)[b * classes + j] - onehot);
          }
        }
      });
}

Tensor batch_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, BatchNormStats& stats,
                  Mode mode) {
  require_same_tape(x, gamma);
  require_same_tape(x, beta);
  const std::size_t c = last_extent(x.shape());
  if (gamma.shape() != Shape{c} || beta.shape() != Shape{c} || stats.running_mean.size() != c ||
      stats.running_var.size() != c) {
    throw DimensionError("batch_norm: input " + shape_string(x.shape()) + " vs scale " +
                         shape_string(gamma.shape()) + " / shift " + shape_string(beta.shape()));
  }
  const std::size_t rows = x.size() / c;
  const auto in = x.data();
  const auto g = gamma.data();
  const auto bt = beta.data();
  std::vector<double> mean(c, 0.0);
  std::vector<double> var(c, 0.0);
  if (mode == Mode::Train) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < c; ++j) mean[j] += in[r * c + j];
    }
    for (double& m : mean) m /= static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < c; ++j) {
        const double d = in[r * c + j] - mean[j];
        var[j] += d * d;
      }
    }
    for (double& v : var) v /= static_cast<double>(rows);
    const double unbias = rows > 1 ? static_cast<double>(rows) / static_cast<double>(rows - 1) : 1.0;
    for (std::size_t j = 0; j < c; ++j) {
      stats.running_mean[j] = stats.momentum * stats.running_mean[j] + (1.0 - stats.momentum) * mean[j];
      stats.running_var[j] =
          stats.momentum * stats.running_var[j] + (1.0 - stats.momentum) * var[j] * unbias;
    }
  } else {
    mean = stats.running_mean;
    var = stats.running_var;
  }
  auto inv_std = std::make_shared<std::vector<double>>(c);
  for (std::size_t j = 0; j < c; ++j) (*inv_std)[j] = 1.0 / std::sqrt(var[j] + stats.eps);
  auto xhat = std::make_shared<std::vector<double>>(in.size());
  std::vector<double> out(in.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < c; ++j) {
      const std::size_t i = r * c + j;
      (*xhat)[i] = (in[i] - mean[j]) * (*inv_std)[j];
      out[i] = g[j] * (*xhat)[i] + bt[j];
    }
  }
  const std::size_t xid = x.id();
  const std::size_t gid = gamma.id();
  const std::size_t bid = beta.id();
  const bool batch_stats = mode == Mode::Train;
  return tape_of(x).record(
      x.shape(), std::move(out), {x, gamma, beta},
      [xid, gid, bid, rows, c, inv_std, xhat, batch_stats](Tape& t, std::size_t self) {
        const auto dy = t.grad(self);
        std::vector<double> dy_sum(c, 0.0);
        std::vector<double> dy_xhat_sum(c, 0.0);
        for (std::size_t r = 0; r < rows; ++r) {
          for (std::size_t j = 0; j < c; ++j) {
            dy_sum[j] += dy[r * c + j];
            dy_xhat_sum[j] += dy[r * c + j] * (*xhat)[r * c + j];
          }
        }
        if (t.requires_grad(gid)) {
          auto dg = t.grad_buffer(gid);
          for (std::size_t j = 0; j < c; ++j) dg[j] += dy_xhat_sum[j];
        }
        if (t.requires_grad(bid)) {
          auto db = t.grad_buffer(bid);
          for (std::size_t j = 0; j < c; ++j) db[j] += dy_sum[j];
        }
        if (t.requires_grad(xid)) {
          const auto g = t.value(gid);
          auto dx = t.grad_buffer(xid);
          const double n = static_cast<double>(rows);
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < c; ++j) {
              const std::size_t i = r * c + j;
              const double scale_j = g[j] * (*inv_std)[j];
              if (batch_stats) {
                dx[i] += scale_j * (dy[i] - dy_sum[j] / n - (*xhat)[i] * dy_xhat_sum[j] / n);
              } else {
                dx[i] += scale_j * dy[i];
              }
            }
          }
        }
      });
}

}  // namespace mrfgat::ad
