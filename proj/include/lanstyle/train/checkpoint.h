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
#include <utility>
#include <vector>

#include "lanstyle/audio/autoencoder.h"
#include "lanstyle/audio/dsp.h"
#include "lanstyle/model/config.h"
#include "lanstyle/nn/core.h"

namespace lanstyle {

// Single-file parameter container. Layout (little-endian):
//   magic "LSCK", u8 version = 1, u64 step,
//   u32 config length, config JSON bytes,
//   u32 tensor count, then per tensor:
//     u16 name length, name bytes, u32 rows, u32 cols,
//     rows*cols float32 values, column-major.
// Tensors round-trip bit-exactly.
struct Checkpoint {
  long step = 0;
  std::string config_json;
  std::vector<std::pair<std::string, Mat<float>>> tensors;

  // nullptr when absent.
  const Mat<float>* find(const std::string& name) const;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

// Model/audio config <-> the checkpoint's JSON blob.
std::string configs_to_json(const ModelConfig& model, const MelConfig& mel);
void configs_from_json(const std::string& json_text, ModelConfig* model,
                       MelConfig* mel);

// Autoencoder weights travel in the same container, tagged by their own
// config block so the two checkpoint kinds cannot be confused.
void save_autoencoder(const std::string& path, Autoencoder<float>& ae,
                      const MelConfig& mel);
Autoencoder<float> load_autoencoder(const std::string& path, MelConfig* mel);

}  // namespace lanstyle
