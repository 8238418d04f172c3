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

#include "mrfgat/model/config.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "mrfgat/errors.hpp"

namespace mrfgat::model {

std::size_t MRFGATConfig::max_neighbors() const {
  return neighbors.empty() ? 0 : *std::max_element(neighbors.begin(), neighbors.end());
}

std::size_t MRFGATConfig::context_width() const { return 2 * edge_width(); }

std::size_t MRFGATConfig::edge_width() const {
  return std::accumulate(channels.begin(), channels.end(), std::size_t{0});
}

std::size_t MRFGATConfig::skip_width() const {
  return std::accumulate(mlp.begin(), mlp.end(), std::size_t{0}) + edge_width();
}

void MRFGATConfig::validate() const {
  auto positive = [](const std::vector<std::size_t>& v) {
    return std::all_of(v.begin(), v.end(), [](std::size_t x) { return x > 0; });
  };
  if (neighbors.empty()) throw ValidationError("config: at least one attention branch is required");
  if (neighbors.size() != channels.size()) {
    throw ValidationError("config: " + std::to_string(neighbors.size()) + " neighbor counts but " +
                          std::to_string(channels.size()) + " channel counts");
  }
  if (!positive(neighbors) || !positive(channels)) {
    throw ValidationError("config: neighbor and channel counts must be positive");
  }
  if (mlp.empty() || !positive(mlp)) throw ValidationError("config: shared MLP widths must be positive");
  if (global == 0 || !positive(head)) throw ValidationError("config: layer widths must be positive");
  if (classes < 1) throw ValidationError("config: class count must be positive");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0)) throw ValidationError("config: leaky_slope must lie in (0, 1)");
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) throw ValidationError("config: keep_prob must lie in (0, 1]");
}

MRFGATConfig MRFGATConfig::modelnet40() { return MRFGATConfig{}; }

MRFGATConfig MRFGATConfig::modelnet10() {
  MRFGATConfig c;
  c.classes = 10;
  return c;
}

MRFGATConfig MRFGATConfig::reduced(std::size_t classes) {
  MRFGATConfig c;
  c.neighbors = {4, 8};
  c.channels = {4, 8};
  c.mlp = {16, 16, 16, 16};
  c.global = 32;
  c.head = {16, 16};
  c.classes = classes;
  return c;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(number, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(number, "empty key");
    kv[key] = value;
  }
  return kv;
}

std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  if (text.find_first_not_of(" \t") == std::string::npos) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ValidationError("empty entry in list '" + text + "'");
    std::size_t value = 0;
    const char* first = item.data() + b;
    const char* last = item.data() + e + 1;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ValidationError("bad integer '" + item + "' in list '" + text + "'");
    out.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_size_list(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(values[i]);
  }
  return out;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("config: bad real '" + text + "' for " + key);
  }
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  const auto list = parse_size_list(text);
  if (list.size() != 1) throw ValidationError("config: expected a single integer for " + key);
  return list[0];
}

void to_key_values(const MRFGATConfig& c, KeyValues& kv) {
  kv["neighbors"] = format_size_list(c.neighbors);
  kv["channels"] = format_size_list(c.channels);
  kv["mlp"] = format_size_list(c.mlp);
  kv["global"] = std::to_string(c.global);
  kv["head"] = format_size_list(c.head);
  kv["classes"] = std::to_string(c.classes);
  kv["leaky_slope"] = format_real(c.leaky_slope);
  kv["keep_prob"] = format_real(c.keep_prob);
}

void apply_key_values(const KeyValues& kv, MRFGATConfig& c) {
  auto get = [&](const char* key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("neighbors")) c.neighbors = parse_size_list(*v);
  if (auto v = get("channels")) c.channels = parse_size_list(*v);
  if (auto v = get("mlp")) c.mlp = parse_size_list(*v);
  if (auto v = get("global")) c.global = parse_count("global", *v);
  if (auto v = get("head")) c.head = parse_size_list(*v);
  if (auto v = get("classes")) c.classes = parse_count("classes", *v);
  if (auto v = get("leaky_slope")) c.leaky_slope = parse_real("leaky_slope", *v);
  if (auto v = get("keep_prob")) c.keep_prob = parse_real("keep_prob", *v);
}

}  // namespace mrfgat::model
