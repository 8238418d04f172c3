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

#include "mrfgat/binary_io.hpp"

#include <fstream>
#include <sstream>

#include "mrfgat/errors.hpp"

namespace mrfgat::io {

void ByteWriter::str(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  raw(s);
}

std::uint64_t ByteReader::get(int n) {
  if (remaining() < static_cast<std::size_t>(n)) {
    throw LoadError("truncated " + context_ + ": needed " + std::to_string(n) + " bytes at offset " +
                    std::to_string(pos_) + ", " + std::to_string(remaining()) + " left");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
  pos_ += static_cast<std::size_t>(n);
  return v;
}

std::string_view ByteReader::raw(std::size_t n) {
  if (remaining() < n) {
    throw LoadError("truncated " + context_ + ": needed " + std::to_string(n) + " bytes at offset " +
                    std::to_string(pos_) + ", " + std::to_string(remaining()) + " left");
  }
  const std::string_view out = bytes_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::string ByteReader::str() {
  const std::uint32_t n = u32();
  return std::string(raw(n));
}

std::vector<double> ByteReader::f64s(std::size_t n) {
  if (remaining() / 8 < n) {
    throw LoadError("truncated " + context_ + ": needed " + std::to_string(n) + " reals at offset " +
                    std::to_string(pos_));
  }
  std::vector<double> out(n);
  for (double& x : out) x = f64();
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw LoadError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mrfgat::io
