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

#include <complex>
#include <vector>

#include "lanstyle/nn/core.h"

namespace lanstyle {

struct MelConfig {
  int sample_rate = 16000;
  int n_fft = 1024;
  int hop = 256;
  int win = 1024;
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-5;

  int bins() const { return n_fft / 2 + 1; }
  void validate() const;
};

// In-place complex FFT; size must be a power of two. The inverse transform
// includes the 1/n factor.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Real-input transform zero-padded to n; returns the n/2+1 one-sided bins.
std::vector<std::complex<double>> rfft(const std::vector<double>& x, int n);

// Periodic Hann window of the given length.
std::vector<double> hann_periodic(int len);

// Complex STFT, no centering: frame t covers samples [t*hop, t*hop + win).
// Result is bins x T with T = 1 + (len - win) / hop; shorter signals raise
// InputTooShortError.
Mat<std::complex<double>> stft(const std::vector<float>& x,
                               const MelConfig& cfg);

Mat<double> stft_magnitude(const std::vector<float>& x, const MelConfig& cfg);

// HTK-mel triangular filterbank, n_mels x bins.
Mat<double> mel_filterbank(const MelConfig& cfg);

// Center frequency in Hz of each mel filter.
std::vector<double> mel_center_freqs(const MelConfig& cfg);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Log mel spectrogram: log(max(filterbank * |STFT|, log_floor)).
Mat<float> extract_mel(const std::vector<float>& x, const MelConfig& cfg);

// Dominant frequency of a short segment: Hann window, 4x zero-padded FFT,
// parabolic interpolation around the magnitude peak. Returns 0 for silence
// (RMS below `silence_rms`).
double estimate_peak_frequency(const float* x, int len, int sample_rate,
                               double silence_rms = 1e-4);

}  // namespace lanstyle
