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

#include "lanstyle/train/toy_corpus.h"

#include <cmath>
#include <filesystem>
#include <random>

#include "lanstyle/audio/wav.h"
#include "lanstyle/common/errors.h"

namespace lanstyle {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Fixed sampling vocabulary. Words are chosen from the pronunciation
// lexicon so every phoneme sits in the band where the mel inversion of the
// vocoder tracks a tone well within a quarter tone.
const char* const kEnglishWords[] = {"see",  "tea", "my",   "no",  "new",
                                     "moon", "sun", "star", "good", "day",
                                     "light"};
const char* const kPinyinSyllables[] = {"ma", "ni", "lu", "xi", "hao", "tian"};

}  // namespace

double toy_frequency(int rank, const ToyConfig& c) {
  if (rank < 0) throw IdOutOfRangeError("toy frequency of a non-speakable id");
  return c.base_hz * std::pow(2.0, static_cast<double>(rank) / 24.0);
}

std::vector<int> toy_durations(const TokenSequence& seq, const ToyConfig& c) {
  std::vector<int> d(seq.size());
  for (size_t i = 0; i < seq.size(); ++i) {
    d[i] = seq.phoneme_ids[i] == 1 ? c.frames_per_separator
                                   : c.frames_per_phoneme;
  }
  return d;
}

double toy_contour_semitones(const StyleInventory& styles, int style_id, int k,
                             int d, const ToyConfig& c) {
  if (!styles.is_tone(style_id)) return 0.0;
  double span = c.tone_span_semitones;
  double u = d > 1 ? static_cast<double>(k) / static_cast<double>(d - 1) : 0.0;
  switch (styles.tone_value(style_id)) {
    case 1:
      return 0.0;
    case 2:
      return span * u;
    case 3:
      return -span * std::sin(kPi * u);
    case 4:
      return -span * u;
    case 5:
      return -span / 2.0;
    default:
      return 0.0;
  }
}

double toy_amplitude_scale(const StyleInventory& styles, int style_id) {
  if (!styles.is_stress(style_id)) return 1.0;
  switch (styles.stress_value(style_id)) {
    case 0:
      return 0.6;
    case 2:
      return 1.3;
    default:
      return 1.0;
  }
}

ToyTracks toy_tracks(const TokenSequence& seq,
                     const std::vector<int>& durations,
                     const PhonemeInventory& inv, const StyleInventory& styles,
                     const MelConfig& mel, const ToyConfig& c) {
  if (seq.size() != durations.size()) {
    throw DurationMismatchError("token and duration counts differ");
  }
  long total_frames = 0;
  for (int d : durations) {
    if (d < 0) throw DurationMismatchError("negative duration");
    total_frames += d;
  }
  // The tail keeps the final analysis window inside the signal so the frame
  // count of extract_mel equals the duration sum exactly.
  long len = total_frames * mel.hop + (mel.n_fft - mel.hop);
  ToyTracks tracks;
  tracks.freq_hz.assign(static_cast<size_t>(len), 0.0);
  tracks.amplitude.assign(static_cast<size_t>(len), 0.0);

  long frame = 0;
  for (size_t i = 0; i < seq.size(); ++i) {
    int d = durations[i];
    int pid = seq.phoneme_ids[i];
    int sid = seq.style_ids[i];
    if (inv.is_speakable(pid)) {
      double f0 = toy_frequency(inv.rank_of(pid), c);
      double amp = c.amplitude * toy_amplitude_scale(styles, sid);
      for (int k = 0; k < d; ++k) {
        double semi = toy_contour_semitones(styles, sid, k, d, c);
        double f = f0 * std::pow(2.0, semi / 12.0);
        long s0 = (frame + k) * mel.hop;
        for (long s = s0; s < s0 + mel.hop; ++s) {
          tracks.freq_hz[static_cast<size_t>(s)] = f;
          tracks.amplitude[static_cast<size_t>(s)] = amp;
        }
      }
    }
    frame += d;
  }
  return tracks;
}

std::vector<float> render_toy_audio(const ToyTracks& tracks,
                                    const MelConfig& mel, const ToyConfig& c) {
  size_t len = tracks.freq_hz.size();
  std::vector<float> x(len, 0.0f);
  // Anti-click ramps: scan for silence<->tone transitions and taper the
  // amplitude across edge_ramp samples on the tone side.
  std::vector<double> amp = tracks.amplitude;
  if (c.edge_ramp > 0) {
    for (size_t s = 0; s < len; ++s) {
      bool on = tracks.amplitude[s] > 0.0;
      bool prev_on = s > 0 && tracks.amplitude[s - 1] > 0.0;
      if (on && !prev_on) {  // fade in
        for (int k = 0; k < c.edge_ramp && s + static_cast<size_t>(k) < len;
             ++k) {
          size_t j = s + static_cast<size_t>(k);
          if (tracks.amplitude[j] <= 0.0) break;
          amp[j] *= static_cast<double>(k) / c.edge_ramp;
        }
      }
      if (!on && prev_on) {  // fade out before this silence
        for (int k = 0; k < c.edge_ramp && static_cast<long>(s) - 1 - k >= 0;
             ++k) {
          size_t j = s - 1 - static_cast<size_t>(k);
          if (tracks.amplitude[j] <= 0.0) break;
          amp[j] *= static_cast<double>(k) / c.edge_ramp;
        }
      }
    }
  }
  double phase = 0.0;
  for (size_t s = 0; s < len; ++s) {
    phase += 2.0 * kPi * tracks.freq_hz[s] / mel.sample_rate;
    x[s] = static_cast<float>(amp[s] * std::sin(phase));
  }
  return x;
}

std::vector<ToyUtterance> make_toy_utterances(int n, uint32_t seed,
                                              const Tokenizer& ipa_tokenizer,
                                              const MelConfig& mel,
                                              const ToyConfig& c) {
  if (n < 1) throw ConfigError("toy corpus needs at least one utterance");
  std::mt19937 rng(seed);
  const size_t n_en = sizeof(kEnglishWords) / sizeof(kEnglishWords[0]);
  const size_t n_zh = sizeof(kPinyinSyllables) / sizeof(kPinyinSyllables[0]);

  std::vector<ToyUtterance> utts;
  utts.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    ToyUtterance u;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "toy_%04d", i);
    u.id = buf;
    if (i == 0 || i == 1) {
      // Guaranteed tone minimal pair for pitch-direction checks.
      u.language = Language::zh;
      u.text = i == 0 ? "ma2" : "ma4";
    } else if (rng() % 2 == 0) {
      u.language = Language::en;
      int words = 1 + static_cast<int>(rng() % 2);
      for (int w = 0; w < words; ++w) {
        if (w) u.text += ' ';
        u.text += kEnglishWords[rng() % n_en];
      }
    } else {
      u.language = Language::zh;
      int words = 1 + static_cast<int>(rng() % 2);
      for (int w = 0; w < words; ++w) {
        if (w) u.text += ' ';
        u.text += kPinyinSyllables[rng() % n_zh];
        u.text += static_cast<char>('1' + rng() % 5);
      }
    }
    u.tokens = ipa_tokenizer.tokenize(u.text, u.language);
    u.durations = toy_durations(u.tokens, c);
    ToyTracks tracks =
        toy_tracks(u.tokens, u.durations, ipa_tokenizer.inventory(),
                   ipa_tokenizer.styles(), mel, c);
    u.audio = render_toy_audio(tracks, mel, c);
    utts.push_back(std::move(u));
  }
  return utts;
}

std::vector<UtteranceRecord> generate_toy_corpus(
    int n, uint32_t seed, const std::string& out_dir,
    const Tokenizer& ipa_tokenizer, const MelConfig& mel, const ToyConfig& c) {
  std::filesystem::create_directories(out_dir);
  std::vector<ToyUtterance> utts =
      make_toy_utterances(n, seed, ipa_tokenizer, mel, c);
  std::vector<UtteranceRecord> records;
  records.reserve(utts.size());
  for (const ToyUtterance& u : utts) {
    std::string wav_name = u.id + ".wav";
    write_wav((std::filesystem::path(out_dir) / wav_name).string(), u.audio,
              mel.sample_rate);
    UtteranceRecord r;
    r.id = u.id;
    r.language = u.language;
    r.text = u.text;
    r.audio_path = wav_name;
    r.durations = u.durations;
    r.has_durations = true;
    records.push_back(std::move(r));
  }
  write_manifest((std::filesystem::path(out_dir) / "manifest.jsonl").string(),
                 records);
  return records;
}

}  // namespace lanstyle
