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

#include "mrfgat/training/checkpoint.hpp"

#include "mrfgat/binary_io.hpp"
#include "mrfgat/errors.hpp"

namespace mrfgat::train {

namespace {

constexpr std::string_view kMagic = "MRFC";
constexpr std::string_view kSections[] = {"CONF", "PARM", "BNST", "ADAM", "TRST", "END "};

std::string bn_name(const model::BatchNorm& bn) {
  const std::string& g = bn.gamma.name;
  return g.ends_with(".gamma") ? g.substr(0, g.size() - 6) : g;
}

void put_section(io::ByteWriter& out, std::string_view tag, const std::string& payload) {
  out.raw(tag);
  out.u64(payload.size());
  out.raw(payload);
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& ckpt) {
  io::ByteWriter out;
  out.raw(kMagic);
  out.u16(Checkpoint::kVersion);

  io::ByteWriter conf;
  conf.str(format_experiment(ckpt.experiment));
  put_section(out, "CONF", conf.bytes());

  const auto params = ckpt.params.parameters();
  io::ByteWriter parm;
  parm.u32(static_cast<std::uint32_t>(params.size()));
  for (const ad::Parameter* p : params) {
    parm.str(p->name);
    parm.u32(static_cast<std::uint32_t>(p->shape.size()));
    for (std::size_t d : p->shape) parm.u64(d);
    parm.f64s(p->value);
  }
  put_section(out, "PARM", parm.bytes());

  const auto bns = ckpt.params.batch_norms();
  io::ByteWriter bnst;
  bnst.u32(static_cast<std::uint32_t>(bns.size()));
  for (const model::BatchNorm* bn : bns) {
    bnst.str(bn_name(*bn));
    bnst.u64(bn->stats.running_mean.size());
    bnst.f64(bn->stats.momentum);
    bnst.f64(bn->stats.eps);
    bnst.f64s(bn->stats.running_mean);
    bnst.f64s(bn->stats.running_var);
  }
  put_section(out, "BNST", bnst.bytes());

  const ad::AdamState& a = ckpt.adam;
  if (a.first_moment.size() != a.second_moment.size()) throw ContractError("checkpoint: Adam moment lists differ");
  io::ByteWriter adam;
  adam.f64(a.learning_rate);
  adam.f64(a.beta1);
  adam.f64(a.beta2);
  adam.f64(a.eps);
  adam.u64(a.step);
  adam.u32(static_cast<std::uint32_t>(a.first_moment.size()));
  for (std::size_t i = 0; i < a.first_moment.size(); ++i) {
    if (a.first_moment[i].size() != a.second_moment[i].size()) throw ContractError("checkpoint: Adam moment sizes differ");
    adam.u64(a.first_moment[i].size());
    adam.f64s(a.first_moment[i]);
    adam.f64s(a.second_moment[i]);
  }
  put_section(out, "ADAM", adam.bytes());

  io::ByteWriter trst;
  trst.u64(ckpt.progress.epochs_done);
  trst.u64(ckpt.progress.seed);
  trst.f64(ckpt.progress.best_oa);
  trst.u64(ckpt.progress.best_epoch);
  put_section(out, "TRST", trst.bytes());

  put_section(out, "END ", "");
  return out.take();
}

Checkpoint decode_checkpoint(std::string_view bytes) {
  io::ByteReader r(bytes);
  r.section("checkpoint header");
  if (r.raw(4) != kMagic) throw LoadError("not a checkpoint (bad magic)");
  const std::uint16_t version = r.u16();
  if (version != Checkpoint::kVersion) {
    throw LoadError("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                    std::to_string(Checkpoint::kVersion) + ")");
  }

  std::string_view payloads[std::size(kSections)];
  for (std::size_t s = 0; s < std::size(kSections); ++s) {
    const std::string tag(kSections[s]);
    if (r.remaining() < 12) throw LoadError("truncated checkpoint: section " + tag + " is missing");
    const std::string_view found = r.raw(4);
    if (found != kSections[s]) {
      throw LoadError("corrupt checkpoint: expected section " + tag + ", found '" + std::string(found) + "'");
    }
    const std::uint64_t length = r.u64();
    if (length > r.remaining()) throw LoadError("truncated checkpoint: section " + tag + " is cut short");
    payloads[s] = r.raw(length);
  }
  if (!r.done()) throw LoadError("corrupt checkpoint: trailing bytes after END");

  auto reader = [&](std::size_t s) {
    io::ByteReader sub(payloads[s]);
    sub.section("checkpoint section " + std::string(kSections[s]));
    return sub;
  };
  auto finish = [](const io::ByteReader& sub) {
    if (!sub.done()) throw LoadError("corrupt " + sub.context() + ": unused trailing bytes");
  };

  Checkpoint ckpt;
  {
    io::ByteReader conf = reader(0);
    try {
      ckpt.experiment = experiment_from_key_values(model::parse_key_values(conf.str()));
    } catch (const LoadError&) {
      throw;
    } catch (const std::exception& e) {
      throw LoadError(std::string("corrupt checkpoint section CONF: ") + e.what());
    }
    finish(conf);
  }
  ckpt.params = model::NetworkParams::allocate(ckpt.experiment.model);
  {
    io::ByteReader parm = reader(1);
    const auto params = ckpt.params.parameters();
    if (parm.u32() != params.size()) throw LoadError("checkpoint section PARM: parameter count does not match config");
    for (ad::Parameter* p : params) {
      const std::string name = parm.str();
      ad::Shape shape(parm.u32());
      for (auto& d : shape) d = parm.u64();
      if (name != p->name || shape != p->shape) {
        throw LoadError("checkpoint section PARM: found " + name + " " + ad::shape_string(shape) + ", config expects " +
                        p->name + " " + ad::shape_string(p->shape));
      }
      p->value = parm.f64s(p->value.size());
    }
    finish(parm);
  }
  {
    io::ByteReader bnst = reader(2);
    const auto bns = ckpt.params.batch_norms();
    if (bnst.u32() != bns.size()) throw LoadError("checkpoint section BNST: batch norm count does not match config");
    for (model::BatchNorm* bn : bns) {
      const std::string name = bnst.str();
      const std::uint64_t channels = bnst.u64();
      if (name != bn_name(*bn) || channels != bn->stats.running_mean.size()) {
        throw LoadError("checkpoint section BNST: unexpected entry " + name);
      }
      bn->stats.momentum = bnst.f64();
      bn->stats.eps = bnst.f64();
      bn->stats.running_mean = bnst.f64s(channels);
      bn->stats.running_var = bnst.f64s(channels);
    }
    finish(bnst);
  }
  {
    io::ByteReader adam = reader(3);
    ad::AdamState& a = ckpt.adam;
    a.learning_rate = adam.f64();
    a.beta1 = adam.f64();
    a.beta2 = adam.f64();
    a.eps = adam.f64();
    a.step = adam.u64();
    const std::uint32_t count = adam.u32();
    const auto params = ckpt.params.parameters();
    if (count != 0 && count != params.size()) throw LoadError("checkpoint section ADAM: moment count does not match config");
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::uint64_t n = adam.u64();
      if (n != params[i]->size()) throw LoadError("checkpoint section ADAM: moment size mismatch for " + params[i]->name);
      a.first_moment.push_back(adam.f64s(n));
      a.second_moment.push_back(adam.f64s(n));
    }
    finish(adam);
  }
  {
    io::ByteReader trst = reader(4);
    ckpt.progress.epochs_done = trst.u64();
    ckpt.progress.seed = trst.u64();
    ckpt.progress.best_oa = trst.f64();
    ckpt.progress.best_epoch = trst.u64();
    finish(trst);
  }
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  io::write_file_atomic(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(io::read_file(path)); }

}  // namespace mrfgat::train
