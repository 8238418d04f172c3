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

#include "mrfgat/dataset/off.hpp"

#include <charconv>
#include <string>
#include <vector>

#include "mrfgat/binary_io.hpp"
#include "mrfgat/errors.hpp"

namespace mrfgat::data {

namespace {

// Whitespace-separated tokens with the line each came from.
class TokenStream {
 public:
  explicit TokenStream(std::string_view text) {
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (c == '\n') {
        ++line;
        ++i;
      } else if (c == '#') {
        while (i < text.size() && text[i] != '\n') ++i;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
      } else {
        const std::size_t start = i;
        while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r' && text[i] != '\n' &&
               text[i] != '#') {
          ++i;
        }
        tokens_.push_back({text.substr(start, i - start), line});
      }
    }
    last_line_ = tokens_.empty() ? 1 : tokens_.back().line;
  }

  bool done() const { return pos_ >= tokens_.size(); }
  std::size_t remaining() const { return tokens_.size() - pos_; }
  std::size_t line() const { return done() ? last_line_ : tokens_[pos_].line; }

  std::string_view next(const char* what) {
    if (done()) throw ParseError(last_line_, std::string("unexpected end of file, expected ") + what);
    return tokens_[pos_++].text;
  }

  // Splits the current token, used for the fused "OFF4" header.
  void push_front(std::string_view text, std::size_t line) {
    tokens_.insert(tokens_.begin() + static_cast<std::ptrdiff_t>(pos_), {text, line});
  }

  template <typename T>
  T number(const char* what) {
    const std::size_t l = line();
    const std::string_view tok = next(what);
    T value{};
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || end != tok.data() + tok.size()) {
      throw ParseError(l, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
    }
    return value;
  }

 private:
  struct Token {
    std::string_view text;
    std::size_t line;
  };
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t last_line_ = 1;
};

}  // namespace

OffMesh parse_off(std::string_view text) {
  TokenStream in(text);
  const std::size_t header_line = in.line();
  const std::string_view header = in.next("OFF header");
  if (header.substr(0, 3) != "OFF") throw ParseError(header_line, "missing OFF header");
  if (header.size() > 3) in.push_front(header.substr(3), header_line);

  const auto vertex_count = in.number<std::size_t>("vertex count");
  const auto face_count = in.number<std::size_t>("face count");
  in.number<std::size_t>("edge count");

  OffMesh out;
  // Do not trust the header count with an allocation.
  if (vertex_count > in.remaining()) {
    throw ParseError(in.line(), "header declares " + std::to_string(vertex_count) + " vertices but the file is shorter");
  }
  out.mesh.vertices.reserve(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    geo::Vec3 p;
    for (double& c : p) c = in.number<double>("vertex coordinate");
    out.mesh.vertices.push_back(p);
  }
  for (std::size_t f = 0; f < face_count; ++f) {
    const std::size_t line = in.line();
    const auto n = in.number<std::size_t>("face vertex count");
    if (n < 3 || n > in.remaining()) throw ParseError(line, "face with " + std::to_string(n) + " vertices");
    std::vector<std::uint32_t> idx(n);
    for (auto& i : idx) {
      const std::size_t l = in.line();
      i = in.number<std::uint32_t>("vertex index");
      if (i >= vertex_count) {
        throw ParseError(l, "vertex index " + std::to_string(i) + " out of range for " +
                                std::to_string(vertex_count) + " vertices");
      }
    }
    for (std::size_t t = 1; t + 1 < n; ++t) {
      const std::array<std::uint32_t, 3> tri{idx[0], idx[t], idx[t + 1]};
      const auto& vs = out.mesh.vertices;
      if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] ||
          geo::triangle_area(vs[tri[0]], vs[tri[1]], vs[tri[2]]) == 0.0) {
        ++out.degenerate_faces;
        continue;
      }
      out.mesh.faces.push_back(tri);
    }
  }
  return out;
}

OffMesh read_off(const std::filesystem::path& path) { return parse_off(io::read_file(path)); }

}  // namespace mrfgat::data
