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

#include "mrfgat/training/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include "mrfgat/binary_io.hpp"
#include "mrfgat/errors.hpp"

namespace mrfgat::train {

double TrainConfig::lr_at(std::size_t epoch) const {
  if (lr_decay_every == 0) return learning_rate;
  return learning_rate * std::pow(lr_decay, static_cast<double>(epoch / lr_decay_every));
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ValidationError("train: batch_size must be at least 1");
  if (!(learning_rate > 0.0)) throw ValidationError("train: learning_rate must be positive");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ValidationError("train: lr_decay must lie in (0, 1]");
  augmentation.validate();
}

std::vector<std::string> preset_names() { return {"modelnet40-default", "modelnet10-default", "reduced"}; }

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "modelnet40-default") {
    c.model = model::MRFGATConfig::modelnet40();
  } else if (name == "modelnet10-default") {
    c.model = model::MRFGATConfig::modelnet10();
  } else if (name == "reduced") {
    c.model = model::MRFGATConfig::reduced();
    c.train.epochs = 20;
    c.train.batch_size = 4;
    c.train.lr_decay_every = 0;
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return c;
}

model::KeyValues to_key_values(const ExperimentConfig& c) {
  model::KeyValues kv;
  model::to_key_values(c.model, kv);
  const TrainConfig& t = c.train;
  kv["epochs"] = std::to_string(t.epochs);
  kv["batch_size"] = std::to_string(t.batch_size);
  kv["learning_rate"] = model::format_real(t.learning_rate);
  kv["lr_decay"] = model::format_real(t.lr_decay);
  kv["lr_decay_every"] = std::to_string(t.lr_decay_every);
  kv["seed"] = std::to_string(t.seed);
  kv["eval_every"] = std::to_string(t.eval_every);
  kv["augment"] = t.augment ? "true" : "false";
  kv["rotate"] = t.augmentation.rotate ? "true" : "false";
  kv["scale_low"] = model::format_real(t.augmentation.scale_low);
  kv["scale_high"] = model::format_real(t.augmentation.scale_high);
  kv["jitter_sigma"] = model::format_real(t.augmentation.jitter_sigma);
  kv["jitter_clip"] = model::format_real(t.augmentation.jitter_clip);
  kv["cache"] = t.cache_path;
  kv["checkpoint_dir"] = t.checkpoint_dir;
  kv["log"] = t.log_path;
  return kv;
}

namespace {

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ValidationError("config: expected true or false for " + key + ", got '" + v + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || v[0] == '-') throw ValidationError("config: bad integer '" + v + "' for " + key);
  return out;
}

}  // namespace

ExperimentConfig experiment_from_key_values(const model::KeyValues& kv) {
  ExperimentConfig c;
  if (const auto it = kv.find("preset"); it != kv.end()) c = preset(it->second);
  static const std::set<std::string> model_keys{"neighbors", "channels", "mlp",     "global",
                                                "head",      "classes",  "leaky_slope", "keep_prob"};
  model::apply_key_values(kv, c.model);
  TrainConfig& t = c.train;
  for (const auto& [key, v] : kv) {
    if (key == "preset" || model_keys.contains(key)) continue;
    if (key == "epochs") t.epochs = model::parse_count(key, v);
    else if (key == "batch_size") t.batch_size = model::parse_count(key, v);
    else if (key == "learning_rate") t.learning_rate = model::parse_real(key, v);
    else if (key == "lr_decay") t.lr_decay = model::parse_real(key, v);
    else if (key == "lr_decay_every") t.lr_decay_every = model::parse_count(key, v);
    else if (key == "seed") t.seed = parse_u64(key, v);
    else if (key == "eval_every") t.eval_every = model::parse_count(key, v);
    else if (key == "augment") t.augment = parse_bool(key, v);
    else if (key == "rotate") t.augmentation.rotate = parse_bool(key, v);
    else if (key == "scale_low") t.augmentation.scale_low = model::parse_real(key, v);
    else if (key == "scale_high") t.augmentation.scale_high = model::parse_real(key, v);
    else if (key == "jitter_sigma") t.augmentation.jitter_sigma = model::parse_real(key, v);
    else if (key == "jitter_clip") t.augmentation.jitter_clip = model::parse_real(key, v);
    else if (key == "cache") t.cache_path = v;
    else if (key == "checkpoint_dir") t.checkpoint_dir = v;
    else if (key == "log") t.log_path = v;
    else throw ValidationError("config: unknown key '" + key + "'");
  }
  c.model.validate();
  t.validate();
  return c;
}

ExperimentConfig load_experiment(const std::string& name_or_path) {
  for (const auto& name : preset_names()) {
    if (name == name_or_path) return preset(name);
  }
  if (!std::filesystem::exists(name_or_path)) {
    throw ValidationError("'" + name_or_path + "' is neither a preset nor an existing config file");
  }
  return experiment_from_key_values(model::parse_key_values(io::read_file(name_or_path)));
}

std::string format_experiment(const ExperimentConfig& config) {
  return model::format_key_values(to_key_values(config));
}

}  // namespace mrfgat::train
