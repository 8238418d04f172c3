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

#include "mrfgat/training/metrics.hpp"

#include <fmt/format.h>

#include "mrfgat/dataset/batch.hpp"
#include "mrfgat/errors.hpp"
#include "mrfgat/model/network.hpp"

namespace mrfgat::train {

std::uint64_t Metrics::total() const {
  std::uint64_t n = 0;
  for (const auto& row : confusion) {
    for (auto v : row) n += v;
  }
  return n;
}

Metrics metrics_from_confusion(std::vector<std::vector<std::uint64_t>> confusion) {
  Metrics m;
  m.confusion = std::move(confusion);
  const std::size_t c = m.confusion.size();
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  double class_sum = 0.0;
  std::size_t supported = 0;
  for (std::size_t i = 0; i < c; ++i) {
    if (m.confusion[i].size() != c) throw ValidationError("confusion matrix must be square");
    std::uint64_t row = 0;
    for (auto v : m.confusion[i]) row += v;
    correct += m.confusion[i][i];
    total += row;
    if (row == 0) {
      m.per_class.emplace_back();
      m.zero_support.push_back(i);
    } else {
      const double acc = static_cast<double>(m.confusion[i][i]) / static_cast<double>(row);
      m.per_class.emplace_back(acc);
      class_sum += acc;
      ++supported;
    }
  }
  m.overall_accuracy = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  m.mean_class_accuracy = supported == 0 ? 0.0 : class_sum / static_cast<double>(supported);
  return m;
}

Metrics metrics_from_predictions(std::span<const int> labels, std::span<const int> predictions, std::size_t classes) {
  if (labels.size() != predictions.size()) throw ValidationError("labels and predictions differ in length");
  std::vector<std::vector<std::uint64_t>> confusion(classes, std::vector<std::uint64_t>(classes, 0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int t = labels[i];
    const int p = predictions[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= classes || static_cast<std::size_t>(p) >= classes) {
      throw ValidationError("class index out of range at sample " + std::to_string(i));
    }
    ++confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  return metrics_from_confusion(std::move(confusion));
}

int argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<int>(best);
}

std::vector<int> predict(const model::NetworkParams& params, const model::MRFGATConfig& config,
                         const data::CacheFile& cache, data::Split split, std::size_t batch_size) {
  if (cache.num_classes() != config.classes) {
    throw ValidationError("cache has " + std::to_string(cache.num_classes()) + " classes but the model has " +
                          std::to_string(config.classes));
  }
  model::NetworkParams local = params;
  data::BatchOptions options;
  options.batch_size = batch_size;
  data::BatchIterator it(cache, split, options);
  std::vector<int> out;
  while (auto batch = it.next()) {
    ad::Tape tape(ad::GradMode::Disabled);
    const ad::Tensor logits = model::mrfgat_forward(tape, batch->clouds, local, config);
    const auto data = logits.data();
    for (std::size_t b = 0; b < batch->size(); ++b) out.push_back(argmax(data.subspan(b * config.classes, config.classes)));
  }
  return out;
}

Metrics evaluate(const model::NetworkParams& params, const model::MRFGATConfig& config, const data::CacheFile& cache,
                 data::Split split, std::size_t batch_size) {
  const std::vector<int> predictions = predict(params, config, cache, split, batch_size);
  std::vector<int> labels;
  for (std::size_t i : cache.indices(split)) labels.push_back(*cache.clouds[i].label);
  return metrics_from_predictions(labels, predictions, config.classes);
}

std::string format_metrics(const Metrics& m, const std::vector<std::string>& class_names) {
  std::string out = fmt::format("OA={:.4f} MA={:.4f}\n", m.overall_accuracy, m.mean_class_accuracy);
  out += fmt::format("{:<20} {:>8} {:>8} {:>9}\n", "class", "support", "correct", "accuracy");
  for (std::size_t i = 0; i < m.confusion.size(); ++i) {
    std::uint64_t support = 0;
    for (auto v : m.confusion[i]) support += v;
    const std::string name = i < class_names.size() ? class_names[i] : std::to_string(i);
    if (m.per_class[i]) {
      out += fmt::format("{:<20} {:>8} {:>8} {:>9.4f}\n", name, support, m.confusion[i][i], *m.per_class[i]);
    } else {
      out += fmt::format("{:<20} {:>8} {:>8} {:>9}\n", name, support, 0, "n/a");
    }
  }
  if (!m.zero_support.empty()) {
    out += fmt::format("{} class(es) without samples excluded from MA\n", m.zero_support.size());
  }
  return out;
}

}  // namespace mrfgat::train
