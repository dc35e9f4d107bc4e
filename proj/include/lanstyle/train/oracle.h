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

#include <vector>

#include "lanstyle/train/toy_corpus.h"

namespace lanstyle {

// Independent transcription check for toy-corpus audio: each frame's
// dominant DFT frequency must match the frequency the utterance's phonemes
// and tone contours prescribe. Works on any waveform aligned with the
// token/duration grid (generated or synthesized), and never looks at the
// model.
struct OracleConfig {
  double tolerance_octaves = 1.0 / 24.0;
  int window = 1024;          // samples analyzed around each frame center
  double silence_rms = 1e-3;  // cap on the RMS of expected-silent samples
};

struct OracleFrame {
  int frame = 0;
  double expected_hz = 0.0;
  double estimated_hz = 0.0;
  bool ok = false;
};

struct OracleReport {
  int phoneme_frames = 0;
  int recovered = 0;
  int silence_frames = 0;
  int silence_violations = 0;
  std::vector<OracleFrame> frames;  // phoneme frames, in order

  double recovery_rate() const {
    return phoneme_frames > 0
               ? static_cast<double>(recovered) / phoneme_frames
               : 1.0;
  }
};

// Per-frame classification of `audio` against the expected contour of the
// utterance. A phoneme frame is recovered when its DFT peak is within
// tolerance_octaves of a frequency its analysis window covers; at a phoneme
// junction the window genuinely contains both tones, so either side counts.
OracleReport oracle_check(const std::vector<float>& audio,
                          const TokenSequence& seq,
                          const std::vector<int>& durations,
                          const PhonemeInventory& inv,
                          const StyleInventory& styles, const MelConfig& mel,
                          const ToyConfig& toy, const OracleConfig& oc = {});

// Pitch slope in octaves per frame across the second half of the last
// speakable token, where the Mandarin tone contours separate: rising tones
// fit positive, falling tones negative. Frames without a detectable peak
// are skipped; returns 0 when fewer than two frames remain.
double oracle_pitch_slope(const std::vector<float>& audio,
                          const TokenSequence& seq,
                          const std::vector<int>& durations,
                          const PhonemeInventory& inv, const MelConfig& mel,
                          const OracleConfig& oc = {});

}  // namespace lanstyle
