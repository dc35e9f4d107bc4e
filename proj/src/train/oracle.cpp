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

#include "lanstyle/train/oracle.h"

#include <algorithm>
#include <cmath>

#include "lanstyle/common/errors.h"

namespace lanstyle {
namespace {

// Peak estimate for the window centered on frame t's analysis window.
double frame_peak(const std::vector<float>& audio, long center, int window,
                  int sample_rate, double silence_rms) {
  long half = window / 2;
  long s0 = std::clamp<long>(center - half, 0,
                             std::max<long>(0, static_cast<long>(audio.size()) -
                                                   window));
  int len = static_cast<int>(
      std::min<long>(window, static_cast<long>(audio.size()) - s0));
  if (len < 4) return 0.0;
  return estimate_peak_frequency(audio.data() + s0, len, sample_rate,
                                 silence_rms);
}

// RMS over only the window samples the contour marks silent: a window that
// straddles a tone/silence junction legitimately contains tone energy, so
// judging the whole window would flag every separator next to a phoneme.
double silent_rms(const std::vector<float>& audio, const ToyTracks& tracks,
                  long center, int window) {
  long half = window / 2;
  long s0 = std::max<long>(0, center - half);
  long s1 = std::min<long>(static_cast<long>(audio.size()), center + half);
  s1 = std::min<long>(s1, static_cast<long>(tracks.freq_hz.size()));
  double acc = 0.0;
  long n = 0;
  for (long s = s0; s < s1; ++s) {
    if (tracks.freq_hz[static_cast<size_t>(s)] > 0.0) continue;
    acc += static_cast<double>(audio[static_cast<size_t>(s)]) *
           static_cast<double>(audio[static_cast<size_t>(s)]);
    ++n;
  }
  return n > 0 ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
}

}  // namespace

OracleReport oracle_check(const std::vector<float>& audio,
                          const TokenSequence& seq,
                          const std::vector<int>& durations,
                          const PhonemeInventory& inv,
                          const StyleInventory& styles, const MelConfig& mel,
                          const ToyConfig& toy, const OracleConfig& oc) {
  ToyTracks tracks = toy_tracks(seq, durations, inv, styles, mel, toy);
  long total_frames = 0;
  for (int d : durations) total_frames += d;

  OracleReport report;
  const long track_len = static_cast<long>(tracks.freq_hz.size());
  for (long t = 0; t < total_frames; ++t) {
    // A frame's content is what its analysis window sees, so ground truth
    // is read at the window center, and any frequency the window covers is
    // an admissible match (junction windows genuinely contain two tones).
    long center = t * mel.hop + mel.win / 2;
    double expected = tracks.freq_hz[static_cast<size_t>(
        std::min<long>(center, track_len - 1))];
    if (expected <= 0.0) {
      ++report.silence_frames;
      if (silent_rms(audio, tracks, center, oc.window) > oc.silence_rms) {
        ++report.silence_violations;
      }
      continue;
    }
    OracleFrame fr;
    fr.frame = static_cast<int>(t);
    fr.expected_hz = expected;
    fr.estimated_hz = frame_peak(audio, center, oc.window, mel.sample_rate,
                                 oc.silence_rms / 10.0);
    if (fr.estimated_hz > 0.0) {
      long lo = std::max<long>(0, center - oc.window / 2);
      long hi = std::min<long>(track_len, center + oc.window / 2);
      for (long s = lo; s < hi && !fr.ok; ++s) {
        double cand = tracks.freq_hz[static_cast<size_t>(s)];
        fr.ok = cand > 0.0 && std::fabs(std::log2(fr.estimated_hz / cand)) <
                                  oc.tolerance_octaves;
      }
    }
    ++report.phoneme_frames;
    if (fr.ok) ++report.recovered;
    report.frames.push_back(fr);
  }
  return report;
}

double oracle_pitch_slope(const std::vector<float>& audio,
                          const TokenSequence& seq,
                          const std::vector<int>& durations,
                          const PhonemeInventory& inv, const MelConfig& mel,
                          const OracleConfig& oc) {
  if (seq.size() != durations.size()) {
    throw DurationMismatchError("token and duration counts differ");
  }
  // Locate the last speakable token and its frame span.
  long frame = 0;
  long span_begin = -1, span_end = -1;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (inv.is_speakable(seq.phoneme_ids[i])) {
      span_begin = frame;
      span_end = frame + durations[i];
    }
    frame += durations[i];
  }
  if (span_begin < 0) return 0.0;

  long lo = span_begin + (span_end - span_begin) / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (long t = lo; t < span_end; ++t) {
    long center = t * mel.hop + mel.win / 2;
    double est = frame_peak(audio, center, oc.window, mel.sample_rate,
                            oc.silence_rms / 10.0);
    if (est <= 0.0) continue;
    double x = static_cast<double>(t - lo);
    double y = std::log2(est);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return 0.0;
  double denom = m * sxx - sx * sx;
  if (std::fabs(denom) < 1e-12) return 0.0;
  return (m * sxy - sx * sy) / denom;
}

}  // namespace lanstyle
