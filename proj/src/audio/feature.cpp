// Copyright 2026 lanstyle authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lanstyle/audio/feature.h"

#include <cstring>
#include <fstream>

#include "lanstyle/common/errors.h"

namespace lanstyle {

namespace {
constexpr char kMagic[4] = {'L', 'S', 'T', 'F'};
constexpr uint8_t kVersion = 1;

void write_u32le(std::ostream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

uint32_t read_u32le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}
}  // namespace

void write_feature(const std::string& path, FeatureKind kind,
                   const Mat<float>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kMagic, 4);
  out.put(static_cast<char>(kVersion));
  out.put(static_cast<char>(kind));
  write_u32le(out, static_cast<uint32_t>(data.rows()));
  write_u32le(out, static_cast<uint32_t>(data.cols()));
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      float v = data(r, c);
      uint32_t bits;
      std::memcpy(&bits, &v, 4);
      write_u32le(out, bits);
    }
  }
  if (!out) throw IoError("failed writing " + path);
}

FeatureFile read_feature(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError(path + " is not a feature cache file");
  }
  int version = in.get();
  if (version != kVersion) {
    throw IoError(path + ": unsupported feature cache version");
  }
  int kind = in.get();
  if (kind != 0 && kind != 1) {
    throw IoError(path + ": unknown feature kind");
  }
  uint32_t rows = read_u32le(in);
  uint32_t cols = read_u32le(in);
  FeatureFile f;
  f.kind = static_cast<FeatureKind>(kind);
  f.data.resize(static_cast<Eigen::Index>(rows),
                static_cast<Eigen::Index>(cols));
  for (uint32_t r = 0; r < rows; ++r) {
    for (uint32_t c = 0; c < cols; ++c) {
      uint32_t bits = read_u32le(in);
      float v;
      std::memcpy(&v, &bits, 4);
      f.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  if (!in) throw IoError(path + ": truncated feature cache");
  return f;
}

}  // namespace lanstyle
