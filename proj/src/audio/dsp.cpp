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

#include "lanstyle/audio/dsp.h"

#include <cmath>

#include "lanstyle/common/errors.h"

namespace lanstyle {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

void MelConfig::validate() const {
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  if (!is_pow2(n_fft)) throw ConfigError("n_fft must be a power of two");
  if (hop <= 0 || win <= 0 || hop > win || win > n_fft) {
    throw ConfigError("need 0 < hop <= win <= n_fft");
  }
  if (n_mels < 1) throw ConfigError("n_mels must be positive");
  if (fmin < 0 || fmax <= fmin) throw ConfigError("need 0 <= fmin < fmax");
  if (fmax > sample_rate / 2.0) throw ConfigError("fmax above Nyquist");
  if (log_floor <= 0) throw ConfigError("log_floor must be positive");
}

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  size_t n = a.size();
  if (!is_pow2(static_cast<int>(n))) {
    throw ConfigError("fft size must be a power of two");
  }
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2 * kPi / static_cast<double>(len) * (inverse ? 1 : -1);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

std::vector<std::complex<double>> rfft(const std::vector<double>& x, int n) {
  std::vector<std::complex<double>> a(static_cast<size_t>(n));
  size_t copy = std::min(x.size(), static_cast<size_t>(n));
  for (size_t i = 0; i < copy; ++i) a[i] = x[i];
  fft_inplace(a, false);
  a.resize(static_cast<size_t>(n / 2 + 1));
  return a;
}

std::vector<double> hann_periodic(int len) {
  std::vector<double> w(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) {
    w[static_cast<size_t>(i)] =
        0.5 - 0.5 * std::cos(2 * kPi * i / static_cast<double>(len));
  }
  return w;
}

Mat<std::complex<double>> stft(const std::vector<float>& x,
                               const MelConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(x.size()) < cfg.win) {
    throw InputTooShortError("signal shorter than one analysis window");
  }
  int frames = 1 + (static_cast<int>(x.size()) - cfg.win) / cfg.hop;
  std::vector<double> window = hann_periodic(cfg.win);
  Mat<std::complex<double>> S(cfg.bins(), frames);
  std::vector<double> seg(static_cast<size_t>(cfg.win));
  for (int t = 0; t < frames; ++t) {
    int start = t * cfg.hop;
    for (int i = 0; i < cfg.win; ++i) {
      seg[static_cast<size_t>(i)] =
          static_cast<double>(x[static_cast<size_t>(start + i)]) *
          window[static_cast<size_t>(i)];
    }
    std::vector<std::complex<double>> spec = rfft(seg, cfg.n_fft);
    for (int k = 0; k < cfg.bins(); ++k) {
      S(k, t) = spec[static_cast<size_t>(k)];
    }
  }
  return S;
}

Mat<double> stft_magnitude(const std::vector<float>& x, const MelConfig& cfg) {
  return stft(x, cfg).cwiseAbs();
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

namespace {
std::vector<double> mel_edges(const MelConfig& cfg) {
  std::vector<double> edges(static_cast<size_t>(cfg.n_mels + 2));
  double lo = hz_to_mel(cfg.fmin), hi = hz_to_mel(cfg.fmax);
  for (int i = 0; i < cfg.n_mels + 2; ++i) {
    edges[static_cast<size_t>(i)] =
        mel_to_hz(lo + (hi - lo) * i / static_cast<double>(cfg.n_mels + 1));
  }
  return edges;
}
}  // namespace

Mat<double> mel_filterbank(const MelConfig& cfg) {
  cfg.validate();
  std::vector<double> edges = mel_edges(cfg);
  Mat<double> fb = Mat<double>::Zero(cfg.n_mels, cfg.bins());
  double bin_hz = static_cast<double>(cfg.sample_rate) / cfg.n_fft;
  for (int m = 0; m < cfg.n_mels; ++m) {
    double left = edges[static_cast<size_t>(m)];
    double center = edges[static_cast<size_t>(m + 1)];
    double right = edges[static_cast<size_t>(m + 2)];
    for (int k = 0; k < cfg.bins(); ++k) {
      double f = k * bin_hz;
      double v = 0.0;
      if (f > left && f < center) {
        v = (f - left) / (center - left);
      } else if (f == center) {
        v = 1.0;
      } else if (f > center && f < right) {
        v = (right - f) / (right - center);
      }
      fb(m, k) = v;
    }
  }
  return fb;
}

std::vector<double> mel_center_freqs(const MelConfig& cfg) {
  std::vector<double> edges = mel_edges(cfg);
  return std::vector<double>(edges.begin() + 1, edges.end() - 1);
}

Mat<float> extract_mel(const std::vector<float>& x, const MelConfig& cfg) {
  Mat<double> mag = stft_magnitude(x, cfg);
  Mat<double> mel = mel_filterbank(cfg) * mag;
  Mat<float> out(mel.rows(), mel.cols());
  for (Eigen::Index j = 0; j < mel.cols(); ++j) {
    for (Eigen::Index i = 0; i < mel.rows(); ++i) {
      out(i, j) =
          static_cast<float>(std::log(std::max(mel(i, j), cfg.log_floor)));
    }
  }
  return out;
}

double estimate_peak_frequency(const float* x, int len, int sample_rate,
                               double silence_rms) {
  if (len <= 1) return 0.0;
  double rms = 0.0;
  for (int i = 0; i < len; ++i) {
    rms += static_cast<double>(x[i]) * static_cast<double>(x[i]);
  }
  rms = std::sqrt(rms / len);
  if (rms < silence_rms) return 0.0;

  int nfft = 4;
  while (nfft < 4 * len) nfft <<= 1;
  std::vector<double> window = hann_periodic(len);
  std::vector<double> seg(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) {
    seg[static_cast<size_t>(i)] =
        static_cast<double>(x[i]) * window[static_cast<size_t>(i)];
  }
  std::vector<std::complex<double>> spec = rfft(seg, nfft);

  size_t peak = 1;
  double best = -1.0;
  for (size_t k = 1; k + 1 < spec.size(); ++k) {
    double m = std::abs(spec[k]);
    if (m > best) {
      best = m;
      peak = k;
    }
  }
  // Parabolic refinement on log magnitude.
  double eps = 1e-12;
  double a = std::log(std::abs(spec[peak - 1]) + eps);
  double b = std::log(std::abs(spec[peak]) + eps);
  double c = std::log(std::abs(spec[peak + 1]) + eps);
  double denom = a - 2 * b + c;
  double p = std::abs(denom) < 1e-12 ? 0.0 : 0.5 * (a - c) / denom;
  if (p > 0.5) p = 0.5;
  if (p < -0.5) p = -0.5;
  return (static_cast<double>(peak) + p) * sample_rate /
         static_cast<double>(nfft);
}

}  // namespace lanstyle
