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

#include "lanstyle/audio/feature.h"
#include "lanstyle/common/errors.h"

namespace lanstyle {

struct ModelConfig {
  int phoneme_vocab = 83;
  int style_vocab = 10;
  int embed_dim = 256;        // M
  int encoder_layers = 4;
  int decoder_layers = 4;
  int heads = 2;
  int hidden_dim = 1024;      // F, conv1 channels inside each block
  int conv1_kernel = 9;
  int conv2_kernel = 1;
  int duration_kernel = 3;
  double dropout = 0.1;
  bool share_streams = false;  // reuse phoneme-stream weights for styles
  int feature_dim = 80;        // N, rows of the decoder output
  FeatureKind feature_kind = FeatureKind::mel;
  double weight_tts = 1.0;
  double weight_duration = 1.0;

  void validate() const {
    if (embed_dim < 2 || embed_dim % 2 != 0) {
      throw ConfigError("embed_dim must be even and >= 2");
    }
    if (heads < 1 || embed_dim % heads != 0) {
      throw ConfigError("heads must divide embed_dim");
    }
    if (encoder_layers < 1 || decoder_layers < 1) {
      throw ConfigError("need at least one encoder and decoder layer");
    }
    if (feature_dim < 1 || hidden_dim < 1) {
      throw ConfigError("feature_dim and hidden_dim must be positive");
    }
    if (conv1_kernel < 1 || conv2_kernel < 1 || duration_kernel < 1) {
      throw ConfigError("kernel sizes must be positive");
    }
    if (dropout < 0.0 || dropout >= 1.0) {
      throw ConfigError("dropout must lie in [0, 1)");
    }
    if (phoneme_vocab < 3 || style_vocab < 2) {
      throw ConfigError("vocabulary too small");
    }
  }

  // Desk-scale preset used by the toy corpus round trip.
  static ModelConfig desk() {
    ModelConfig c;
    c.embed_dim = 32;
    c.encoder_layers = 2;
    c.decoder_layers = 2;
    c.hidden_dim = 64;
    c.dropout = 0.0;
    c.feature_dim = 80;
    return c;
  }
};

}  // namespace lanstyle
