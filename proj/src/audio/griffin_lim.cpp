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

#include "lanstyle/audio/griffin_lim.h"

#include <cmath>
#include <numeric>

#include "lanstyle/common/errors.h"

namespace lanstyle {

Eigen::VectorXd nnls(const Mat<double>& A, const Eigen::VectorXd& b,
                     int max_iter) {
  const Eigen::Index n = A.cols();
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<size_t>(n), false);
  Eigen::Index npassive = 0;

  const double tol = 1e-10 * A.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff();
  Eigen::VectorXd w = A.transpose() * (b - A * s);

  auto solve_passive = [&](Eigen::VectorXd& z) {
    Mat<double> Ap(A.rows(), npassive);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<size_t>(j)]) Ap.col(c++) = A.col(j);
    }
    Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(b);
    z.setZero(n);
    c = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<size_t>(j)]) z(j) = zp(c++);
    }
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;  // optimal
    passive[static_cast<size_t>(best)] = true;
    ++npassive;

    Eigen::VectorXd z;
    solve_passive(z);
    while (true) {
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<size_t>(j)] && z(j) <= 0) {
          feasible = false;
          double a = s(j) / (s(j) - z(j));
          if (a < alpha) alpha = a;
        }
      }
      if (feasible) {
        s = z;
        break;
      }
      s += alpha * (z - s);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<size_t>(j)] && s(j) <= 1e-14) {
          passive[static_cast<size_t>(j)] = false;
          --npassive;
          s(j) = 0.0;
        }
      }
      if (npassive == 0) break;
      solve_passive(z);
    }
    w = A.transpose() * (b - A * s);
  }
  return s.cwiseMax(0.0);
}

Mat<double> mel_to_linear(const Mat<float>& log_mel, const MelConfig& cfg) {
  if (log_mel.rows() != cfg.n_mels) {
    throw ShapeMismatchError("mel row count does not match config");
  }
  Mat<double> fb = mel_filterbank(cfg);
  Mat<double> mag(cfg.bins(), log_mel.cols());
  for (Eigen::Index t = 0; t < log_mel.cols(); ++t) {
    Eigen::VectorXd m(cfg.n_mels);
    for (int i = 0; i < cfg.n_mels; ++i) {
      m(i) = std::exp(static_cast<double>(log_mel(i, t)));
    }
    mag.col(t) = nnls(fb, m);
  }
  return mag;
}

std::vector<float> istft(const Mat<std::complex<double>>& S,
                         const MelConfig& cfg, bool exact_ls) {
  cfg.validate();
  if (S.rows() != cfg.bins()) {
    throw ShapeMismatchError("spectrogram bin count does not match config");
  }
  int frames = static_cast<int>(S.cols());
  int out_len = (frames - 1) * cfg.hop + cfg.win;
  std::vector<double> acc(static_cast<size_t>(out_len), 0.0);
  std::vector<double> norm(static_cast<size_t>(out_len), 0.0);
  std::vector<double> window = hann_periodic(cfg.win);

  std::vector<std::complex<double>> full(static_cast<size_t>(cfg.n_fft));
  for (int t = 0; t < frames; ++t) {
    for (int k = 0; k < cfg.bins(); ++k) {
      full[static_cast<size_t>(k)] = S(k, t);
    }
    for (int k = cfg.bins(); k < cfg.n_fft; ++k) {
      full[static_cast<size_t>(k)] =
          std::conj(full[static_cast<size_t>(cfg.n_fft - k)]);
    }
    fft_inplace(full, true);
    int start = t * cfg.hop;
    for (int i = 0; i < cfg.win; ++i) {
      double wv = window[static_cast<size_t>(i)];
      acc[static_cast<size_t>(start + i)] +=
          wv * full[static_cast<size_t>(i)].real();
      norm[static_cast<size_t>(start + i)] += wv * wv;
    }
  }
  // Exact least-squares inverse divides by the window power wherever it is
  // nonzero. The clamped variant floors the normalizer near the boundaries,
  // where coverage decays to zero and an inconsistent spectrogram would
  // otherwise blow up into edge spikes; the interior stays exact either way.
  double norm_floor = 1e-12;
  if (!exact_ls) {
    double max_norm = 0.0;
    for (double v : norm) max_norm = std::max(max_norm, v);
    norm_floor = std::max(1e-9, 0.05 * max_norm);
  }
  std::vector<float> out(static_cast<size_t>(out_len));
  for (int i = 0; i < out_len; ++i) {
    double d = norm[static_cast<size_t>(i)];
    out[static_cast<size_t>(i)] =
        d > norm_floor
            ? static_cast<float>(acc[static_cast<size_t>(i)] / d)
            : (exact_ls ? 0.0f
                        : static_cast<float>(acc[static_cast<size_t>(i)] /
                                             norm_floor));
  }
  return out;
}

std::vector<float> griffin_lim(const Mat<double>& magnitude,
                               const MelConfig& cfg, int iters,
                               std::vector<double>* errors) {
  if (iters < 0) throw ConfigError("griffin-lim iterations must be >= 0");
  if (errors) errors->clear();

  // Deterministic globally-coherent start: every bin is treated as a
  // sinusoid that keeps advancing across frames, so frame t of bin k gets
  // phase -2*pi*k*(t*hop)/n_fft (plus a half-window shift that keeps frame
  // energy away from the window edges). A constant per-frame phase would
  // leave successive frames misaligned by pi*k*hop*2/n_fft and overlap-add
  // would comb-cancel most bins.
  const double kPi = 3.14159265358979323846;
  auto init_phase = [&](Eigen::Index k, Eigen::Index t) {
    double ang = -2.0 * kPi * static_cast<double>(k) *
                 (static_cast<double>(t) * cfg.hop + cfg.win / 2) / cfg.n_fft;
    return std::complex<double>(std::cos(ang), std::sin(ang));
  };
  Mat<std::complex<double>> S(magnitude.rows(), magnitude.cols());
  for (Eigen::Index j = 0; j < S.cols(); ++j) {
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
      S(i, j) = magnitude(i, j) * init_phase(i, j);
    }
  }
  // The iteration uses the exact least-squares inverse; that is what makes
  // the recorded magnitude-mismatch sequence non-increasing.
  std::vector<float> x = istft(S, cfg, /*exact_ls=*/true);
  for (int it = 0; it < iters; ++it) {
    Mat<std::complex<double>> S2 = stft(x, cfg);
    if (errors) {
      errors->push_back((S2.cwiseAbs() - magnitude).norm());
    }
    for (Eigen::Index j = 0; j < S2.cols(); ++j) {
      for (Eigen::Index i = 0; i < S2.rows(); ++i) {
        double m = std::abs(S2(i, j));
        S2(i, j) = m > 1e-12 ? S2(i, j) / m * magnitude(i, j)
                             : magnitude(i, j) * init_phase(i, j);
      }
    }
    S = S2;
    x = istft(S, cfg, /*exact_ls=*/true);
  }

  // Synthesize the deliverable waveform with the clamped normalizer so
  // residual inconsistency cannot spike at the boundaries.
  std::vector<float> out = istft(S, cfg, /*exact_ls=*/false);
  float peak = 0.0f;
  for (float v : out) peak = std::max(peak, std::abs(v));
  if (peak > 1.0f) {
    float scale = 0.99f / peak;
    for (float& v : out) v *= scale;
  }
  return out;
}

std::vector<float> mel_to_audio(const Mat<float>& log_mel,
                                const MelConfig& cfg, int gl_iters) {
  return griffin_lim(mel_to_linear(log_mel, cfg), cfg, gl_iters);
}

}  // namespace lanstyle
