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

#include "lanstyle/audio/dsp.h"

namespace lanstyle {

// Nonnegative least squares: argmin_{s >= 0} ||A s - b||_2 (active-set
// method). Returns a sparse solution with at most rank(A) nonzeros.
Eigen::VectorXd nnls(const Mat<double>& A, const Eigen::VectorXd& b,
                     int max_iter = 0);

// Invert a log-mel spectrogram to a linear magnitude spectrogram by solving
// per-frame NNLS against the filterbank.
Mat<double> mel_to_linear(const Mat<float>& log_mel, const MelConfig& cfg);

// Weighted overlap-add inverse STFT. Output length is (T-1)*hop + win.
// `exact_ls` selects the true least-squares inverse (divide by window power
// wherever it is nonzero); the default clamps the normalizer near the
// boundaries so inconsistent spectrogram edges cannot blow up into spikes.
std::vector<float> istft(const Mat<std::complex<double>>& S,
                         const MelConfig& cfg, bool exact_ls = false);

// Phase reconstruction from a magnitude spectrogram. iters == 0 returns the
// reconstruction from the deterministic initial phase. When `errors` is
// given it receives the magnitude mismatch ||(|STFT(x_k)|) - target||_F for
// each iterate; with the exact least-squares inverse used inside the loop
// this sequence is non-increasing. Peaks above 1 are normalized to 0.99.
std::vector<float> griffin_lim(const Mat<double>& magnitude,
                               const MelConfig& cfg, int iters,
                               std::vector<double>* errors = nullptr);

// Full vocoder path: log-mel -> NNLS inversion -> Griffin-Lim.
std::vector<float> mel_to_audio(const Mat<float>& log_mel,
                                const MelConfig& cfg, int gl_iters);

}  // namespace lanstyle
