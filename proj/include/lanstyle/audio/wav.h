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

#pragma once

#include <string>
#include <vector>

namespace lanstyle {

struct Wav {
  int sample_rate = 0;
  std::vector<float> samples;  // mono, nominally in [-1, 1]
};

// Reads a mono 16-bit PCM RIFF file. Unreadable files raise IoError;
// unsupported layouts (stereo, other encodings) raise InputError.
Wav read_wav(const std::string& path);

// Writes mono 16-bit PCM, clipping samples outside [-1, 1].
void write_wav(const std::string& path, const std::vector<float>& samples,
               int sample_rate);

}  // namespace lanstyle
