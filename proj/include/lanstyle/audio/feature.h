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

#include <cstdint>
#include <string>

#include "lanstyle/nn/core.h"

namespace lanstyle {

// What a feature matrix holds: log-mel frames or autoencoder latents.
enum class FeatureKind : uint8_t { mel = 0, latent = 1 };

inline const char* to_string(FeatureKind k) {
  return k == FeatureKind::mel ? "mel" : "latent";
}

struct FeatureFile {
  FeatureKind kind = FeatureKind::mel;
  Mat<float> data;  // feature_dim x frames
};

// Binary feature cache: magic "LSTF", u8 version, u8 kind, u32 rows,
// u32 cols, then float32 little-endian values in row-major order.
void write_feature(const std::string& path, FeatureKind kind,
                   const Mat<float>& data);
FeatureFile read_feature(const std::string& path);

}  // namespace lanstyle
