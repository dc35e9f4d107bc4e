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

#include "lanstyle/audio/autoencoder.h"
#include "lanstyle/audio/dsp.h"
#include "lanstyle/model/acoustic_model.h"
#include "lanstyle/text/tokenizer.h"
#include "lanstyle/train/checkpoint.h"
#include "lanstyle/train/manifest.h"
#include "lanstyle/train/optimizer.h"

namespace lanstyle {

struct TrainConfig {
  int batch_size = 32;
  long max_steps = 2000;
  double base_lr = 1.0;     // multiplies the warmup schedule
  long warmup_steps = 4000;
  uint32_t seed = 1;
  long checkpoint_every = 0;  // 0 = final checkpoint only
  double clip_norm = 0.0;     // global gradient-norm cap; 0 = off
  double weight_decay = 0.0;  // decoupled decay; 0 = off

  void validate() const {
    if (batch_size < 1 || max_steps < 1 || warmup_steps < 1 ||
        base_lr <= 0.0 || clip_norm < 0.0 || weight_decay < 0.0) {
      throw ConfigError("training config values must be positive");
    }
  }
};

// A tokenized utterance with its cached target features.
struct TrainExample {
  std::string id;
  std::vector<int> phoneme_ids;
  std::vector<int> style_ids;
  std::vector<int> durations;  // per token, > 0 on real tokens
  Mat<float> features;         // feature_dim x sum(durations)
};

// Token rows padded to the widest item, features padded to the most frames;
// zero is the pad value everywhere and masks mark the real columns.
struct Batch {
  std::vector<std::vector<int>> phoneme_ids;
  std::vector<std::vector<int>> style_ids;
  std::vector<std::vector<int>> durations;
  std::vector<Mask> token_masks;
  std::vector<Mat<float>> features;  // feature_dim x max_frames each
  std::vector<long> frames;          // true frame count per item
  int max_tokens = 0;
  long max_frames = 0;

  size_t size() const { return phoneme_ids.size(); }
};

Batch make_batch(const std::vector<TrainExample>& examples,
                 const std::vector<size_t>& indices);

// Reads each record's audio and builds its target features: log-mel frames,
// or autoencoder latents when `ae` is given. Durations must be present and
// must tile the feature length exactly.
std::vector<TrainExample> prepare_examples(
    const std::vector<UtteranceRecord>& records, const std::string& manifest_path,
    const Tokenizer& tokenizer, const MelConfig& mel,
    const Autoencoder<float>* ae);

struct LossRow {
  long step = 0;
  double total = 0.0, tts = 0.0, duration = 0.0, lr = 0.0;
};

void write_loss_csv(const std::string& path, const std::vector<LossRow>& rows);

// Single-writer optimization loop. Batches are sampled statelessly from
// (seed, step), so a resumed run continues bit-exactly.
class Trainer {
 public:
  Trainer(AcousticModel<float>& model, MelConfig mel,
          std::vector<TrainExample> examples, TrainConfig cfg);

  void init();  // seeded parameter init, fresh optimizer state
  LossRow step();

  // Full loop from the current step to max_steps: appends to history,
  // writes loss.csv and ckpt-final.lsck (plus periodic ckpt-<step>.lsck)
  // under out_dir.
  void run(const std::string& out_dir);

  Checkpoint snapshot() const;
  void restore(const Checkpoint& ck);  // params, moments, step

  long current_step() const { return step_; }
  const std::vector<LossRow>& history() const { return history_; }
  AcousticModel<float>& model() { return *model_; }

 private:
  AcousticModel<float>* model_;
  MelConfig mel_;
  std::vector<TrainExample> examples_;
  TrainConfig cfg_;
  Adam<float> adam_;
  long step_ = 0;  // completed steps
  std::vector<LossRow> history_;
};

}  // namespace lanstyle
