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

#include "lanstyle/common/errors.h"
#include "lanstyle/nn/layers.h"

namespace lanstyle {

// Strided convolutional autoencoder over either raw samples (input_dim = 1)
// or mel frames (input_dim = n_mels). The encoder halves/quarters the time
// axis by each layer's stride; the decoder mirrors it with transposed
// convolutions, so the frame-rate reduction factor is R = prod(strides).
struct AutoencoderConfig {
  enum class Domain { raw, mel };
  Domain domain = Domain::raw;
  int input_dim = 1;
  int latent_dim = 32;
  std::vector<int> channels = {96, 192, 384};  // hidden widths, per layer
  std::vector<int> strides = {4, 4, 4, 4};     // channels.size() + 1 entries
  std::vector<int> kernels = {8, 8, 8, 8};

  long reduction() const {
    long r = 1;
    for (int s : strides) r *= s;
    return r;
  }

  void validate() const {
    if (input_dim < 1 || latent_dim < 1) {
      throw ConfigError("autoencoder dims must be positive");
    }
    if (strides.empty() || strides.size() != kernels.size() ||
        channels.size() + 1 != strides.size()) {
      throw ConfigError("autoencoder needs channels.size()+1 == strides.size()"
                        " == kernels.size()");
    }
    for (size_t i = 0; i < strides.size(); ++i) {
      if (strides[i] < 1 || kernels[i] < strides[i]) {
        throw ConfigError("autoencoder kernel must cover its stride");
      }
      if ((kernels[i] - strides[i]) % 2 != 0) {
        throw ConfigError("autoencoder kernel-stride difference must be even");
      }
    }
    for (int c : channels) {
      if (c < 1) throw ConfigError("autoencoder channels must be positive");
    }
  }

  // Raw-sample autoencoder, R = 256, laptop-sized. Latent width 16 keeps
  // held-out reconstruction above 15 dB on the toy corpus; 8 does not.
  static AutoencoderConfig desk_raw() {
    AutoencoderConfig c;
    c.domain = Domain::raw;
    c.input_dim = 1;
    c.latent_dim = 16;
    c.channels = {24, 48, 96};
    return c;
  }

  // Mel-frame autoencoder, R = 4.
  static AutoencoderConfig desk_mel(int n_mels) {
    AutoencoderConfig c;
    c.domain = Domain::mel;
    c.input_dim = n_mels;
    c.latent_dim = 8;
    c.channels = {48, 24};
    c.strides = {2, 2, 1};
    c.kernels = {4, 4, 3};
    return c;
  }

  // Single k=1 layer, R = 1; identity-initialized round trips exactly.
  static AutoencoderConfig identity(int dim) {
    AutoencoderConfig c;
    c.domain = Domain::mel;
    c.input_dim = dim;
    c.latent_dim = dim;
    c.channels = {};
    c.strides = {1};
    c.kernels = {1};
    return c;
  }
};

template <class T>
class Autoencoder {
 public:
  AutoencoderConfig cfg;

  explicit Autoencoder(AutoencoderConfig config) : cfg(std::move(config)) {
    cfg.validate();
    size_t n = cfg.strides.size();
    enc_.resize(n);
    dec_.resize(n);
    for (size_t i = 0; i < n; ++i) {
      Eigen::Index in = i == 0 ? cfg.input_dim : cfg.channels[i - 1];
      Eigen::Index out = i + 1 == n ? cfg.latent_dim : cfg.channels[i];
      Eigen::Index k = cfg.kernels[i];
      Eigen::Index s = cfg.strides[i];
      Eigen::Index p = (k - s) / 2;
      enc_[i].build("ae.enc." + std::to_string(i), in, out, k, s, p,
                    k - s - p);
      // Decoder mirrors the encoder geometry in reverse order.
      dec_[i].build("ae.dec." + std::to_string(i), out, in, k, s, p);
    }
  }

  void init(std::mt19937& rng) {
    for (auto& l : enc_) l.init(rng);
    for (auto& l : dec_) l.init(rng);
  }

  // W = I, b = 0 on a single k=1 s=1 layer pair.
  void init_identity() {
    if (enc_.size() != 1 || cfg.kernels[0] != 1 || cfg.strides[0] != 1 ||
        cfg.latent_dim != cfg.input_dim) {
      throw ConfigError("identity init needs the identity configuration");
    }
    enc_[0].w.v.setIdentity();
    enc_[0].b.v.setZero();
    dec_[0].w.v.setIdentity();
    dec_[0].b.v.setZero();
  }

  std::vector<Param<T>*> params() {
    std::vector<Param<T>*> out;
    for (auto& l : enc_) l.collect(out);
    for (auto& l : dec_) l.collect(out);
    return out;
  }

  long param_count() {
    long n = 0;
    for (Param<T>* p : params()) n += p->count();
    return n;
  }

  long encoder_param_count() {
    long n = 0;
    for (auto& l : enc_) n += l.w.count() + l.b.count();
    return n;
  }

  long decoder_param_count() {
    long n = 0;
    for (auto& l : dec_) n += l.w.count() + l.b.count();
    return n;
  }

  void zero_grad() {
    for (Param<T>* p : params()) p->zero_grad();
  }

  // Frames (columns) must be divisible by every stride along the way.
  Mat<T> encode(const Mat<T>& x) const {
    if (x.rows() != cfg.input_dim) {
      throw ShapeMismatchError("autoencoder input dim");
    }
    if (x.cols() % cfg.reduction() != 0) {
      throw ShapeMismatchError("autoencoder input length not divisible by "
                               "the reduction factor");
    }
    Mat<T> h = x;
    for (size_t i = 0; i < enc_.size(); ++i) {
      h = enc_[i].forward(h, nullptr);
      if (i + 1 < enc_.size()) h = h.cwiseMax(T(0));
    }
    return h;
  }

  Mat<T> decode(const Mat<T>& z) const {
    if (z.rows() != cfg.latent_dim) {
      throw KindMismatchError("latent dim does not match autoencoder");
    }
    Mat<T> h = z;
    for (size_t i = dec_.size(); i-- > 0;) {
      h = dec_[i].forward(h, nullptr);
      if (i > 0) h = h.cwiseMax(T(0));
    }
    return h;
  }

  // Round-trip MSE; gradients (scaled by `scale`) accumulate when
  // do_backward is set.
  T reconstruction_step(const Mat<T>& x, T scale, bool do_backward) {
    std::vector<Conv1dCache<T>> ecache(enc_.size());
    std::vector<Mat<T>> eact(enc_.size());  // post-activation outputs
    Mat<T> h = x;
    for (size_t i = 0; i < enc_.size(); ++i) {
      h = enc_[i].forward(h, &ecache[i]);
      if (i + 1 < enc_.size()) h = h.cwiseMax(T(0));
      eact[i] = h;
    }
    std::vector<ConvTranspose1dCache<T>> dcache(dec_.size());
    std::vector<Mat<T>> dact(dec_.size());
    for (size_t i = dec_.size(); i-- > 0;) {
      h = dec_[i].forward(h, &dcache[i]);
      if (i > 0) h = h.cwiseMax(T(0));
      dact[i] = h;
    }
    Mat<T> diff = h - x;
    T loss = diff.squaredNorm() / static_cast<T>(diff.size());
    if (!do_backward) return loss;

    Mat<T> d = diff * (T(2) * scale / static_cast<T>(diff.size()));
    for (size_t i = 0; i < dec_.size(); ++i) {
      if (i > 0) {
        // Gradient w.r.t. the ReLU that feeds dec_[i - 1] in the forward
        // pass; dact[i] holds that activation's output.
        d = d.cwiseProduct(
            (dact[i].array() > T(0)).template cast<T>().matrix());
      }
      d = dec_[i].backward(dcache[i], d);
    }
    for (size_t i = enc_.size(); i-- > 0;) {
      if (i + 1 < enc_.size()) {
        d = d.cwiseProduct(
            (eact[i].array() > T(0)).template cast<T>().matrix());
      }
      d = enc_[i].backward(ecache[i], d);
    }
    return loss;
  }

 private:
  std::vector<Conv1d<T>> enc_;
  std::vector<ConvTranspose1d<T>> dec_;
};

// Pads (edge-replicating) to a multiple of the reduction factor, remembers
// the original length.
struct LatentFeature {
  Mat<float> z;
  long original_frames = 0;
};
LatentFeature ae_encode(const Autoencoder<float>& ae, const Mat<float>& x);
// Inverse of ae_encode including the padding bookkeeping.
Mat<float> ae_decode(const Autoencoder<float>& ae, const LatentFeature& z);

// 10*log10(signal power / error power); +inf-free (capped at 300 dB).
double snr_db(const Mat<float>& reference, const Mat<float>& reconstruction);

// Seeded Adam training to MSE. batch_size = 0 uses the whole corpus every
// step; otherwise each step samples batch_size clips statelessly from
// (seed, step). Returns per-step losses.
struct AeTrainConfig {
  long steps = 2000;
  double lr = 1e-3;
  uint32_t seed = 1;
  int batch_size = 0;
};
std::vector<double> train_autoencoder(Autoencoder<float>& ae,
                                      const std::vector<Mat<float>>& corpus,
                                      const AeTrainConfig& cfg);

}  // namespace lanstyle
