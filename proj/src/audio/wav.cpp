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

#include "lanstyle/audio/wav.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "lanstyle/common/errors.h"

namespace lanstyle {

namespace {

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

bool read_tag(std::istream& in, char tag[4]) {
  in.read(tag, 4);
  return in.good();
}

}  // namespace

Wav read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  char tag[4];
  if (!read_tag(in, tag) || std::memcmp(tag, "RIFF", 4) != 0) {
    throw InputError("audio", path + " is not a RIFF file");
  }
  read_u32(in);  // overall size, unused
  if (!read_tag(in, tag) || std::memcmp(tag, "WAVE", 4) != 0) {
    throw InputError("audio", path + " is not a WAVE file");
  }

  Wav wav;
  bool got_fmt = false;
  uint16_t channels = 0, bits = 0, format = 0;
  while (read_tag(in, tag)) {
    uint32_t size = read_u32(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      format = read_u16(in);
      channels = read_u16(in);
      wav.sample_rate = static_cast<int>(read_u32(in));
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (size > 16) in.seekg(size - 16, std::ios::cur);
      got_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!got_fmt) throw InputError("audio", path + ": data before fmt");
      if (format != 1 || bits != 16) {
        throw InputError("audio", path + ": only 16-bit PCM is supported");
      }
      if (channels != 1) {
        throw InputError("audio", path + ": only mono is supported");
      }
      size_t n = size / 2;
      wav.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t s = static_cast<int16_t>(read_u16(in));
        wav.samples[i] = static_cast<float>(s) / 32767.0f;
      }
      if (!in) throw IoError(path + ": truncated data chunk");
      return wav;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);  // chunks are word-aligned
    }
    if (!in) break;
  }
  throw InputError("audio", path + ": no data chunk found");
}

void write_wav(const std::string& path, const std::vector<float>& samples,
               int sample_rate) {
  if (sample_rate <= 0) throw ConfigError("sample rate must be positive");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);

  uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(sample_rate));
  write_u32(out, static_cast<uint32_t>(sample_rate * 2));
  write_u16(out, 2);   // block align
  write_u16(out, 16);  // bits
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (float s : samples) {
    double v = std::lrint(static_cast<double>(s) * 32767.0);
    if (v > 32767.0) v = 32767.0;
    if (v < -32768.0) v = -32768.0;
    write_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace lanstyle
