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
#include <vector>

#include "lanstyle/audio/dsp.h"
#include "lanstyle/text/tokenizer.h"
#include "lanstyle/train/manifest.h"

namespace lanstyle {

// Synthetic sine-tone corpus. Every phoneme renders as a fixed-length tone
// whose frequency encodes its identity, so a DFT peak picker can later act
// as an independent transcription check. Tone styles bend the contour in
// semitones; stress styles scale amplitude.
struct ToyConfig {
  int frames_per_phoneme = 8;
  int frames_per_separator = 4;  // separators render as silence
  double base_hz = 220.0;        // identity pitch: base * 2^(rank / 24)
  double amplitude = 0.4;
  double tone_span_semitones = 4.0;  // full excursion of tones 2/3/4
  int edge_ramp = 64;  // anti-click samples where a tone meets silence
};

// Identity frequency of a speakable symbol (quarter-tone ladder).
double toy_frequency(int rank, const ToyConfig& c = {});

// Per-token frame counts: speakables get frames_per_phoneme, separators
// frames_per_separator.
std::vector<int> toy_durations(const TokenSequence& seq, const ToyConfig& c);

// Semitone offset of frame k within a token of duration d for a style id:
// tone 1 flat 0, tone 2 linear rise to +span, tone 3 sinusoidal dip to
// -span, tone 4 linear fall to -span, tone 5 flat at -span/2; stress and
// none are flat 0.
double toy_contour_semitones(const StyleInventory& styles, int style_id, int k,
                             int d, const ToyConfig& c);

// Amplitude scale for a style id: stress 0/1/2 -> 0.6/1.0/1.3, else 1.0.
double toy_amplitude_scale(const StyleInventory& styles, int style_id);

// Ground-truth per-sample tracks for one utterance, the single source of
// truth shared by the renderer and the verification oracle. Audio length is
// sum(durations)*hop + (n_fft - hop) so that extract_mel yields exactly
// sum(durations) frames. Silent samples carry frequency 0.
struct ToyTracks {
  std::vector<double> freq_hz;
  std::vector<double> amplitude;
};
ToyTracks toy_tracks(const TokenSequence& seq, const std::vector<int>& durations,
                     const PhonemeInventory& inv, const StyleInventory& styles,
                     const MelConfig& mel, const ToyConfig& c);

// Phase-continuous rendering of the tracks.
std::vector<float> render_toy_audio(const ToyTracks& tracks,
                                    const MelConfig& mel, const ToyConfig& c);

struct ToyUtterance {
  std::string id;
  Language language = Language::en;
  std::string text;
  TokenSequence tokens;
  std::vector<int> durations;
  std::vector<float> audio;
};

// Deterministic sampling of n utterances from a fixed word/syllable list.
// The first two records are always the Mandarin minimal pair "ma2" / "ma4"
// so tone-direction checks have a guaranteed probe.
std::vector<ToyUtterance> make_toy_utterances(int n, uint32_t seed,
                                              const Tokenizer& ipa_tokenizer,
                                              const MelConfig& mel,
                                              const ToyConfig& c = {});

// Renders WAVs plus manifest.jsonl under out_dir and returns the records.
std::vector<UtteranceRecord> generate_toy_corpus(
    int n, uint32_t seed, const std::string& out_dir,
    const Tokenizer& ipa_tokenizer, const MelConfig& mel,
    const ToyConfig& c = {});

}  // namespace lanstyle
