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

#include "lanstyle/audio/autoencoder.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "lanstyle/train/optimizer.h"

namespace lanstyle {

LatentFeature ae_encode(const Autoencoder<float>& ae, const Mat<float>& x) {
  long r = ae.cfg.reduction();
  LatentFeature out;
  out.original_frames = x.cols();
  long padded = ((x.cols() + r - 1) / r) * r;
  if (padded == x.cols()) {
    out.z = ae.encode(x);
    return out;
  }
  Mat<float> xp(x.rows(), padded);
  xp.leftCols(x.cols()) = x;
  for (long c = x.cols(); c < padded; ++c) xp.col(c) = x.col(x.cols() - 1);
  out.z = ae.encode(xp);
  return out;
}

Mat<float> ae_decode(const Autoencoder<float>& ae, const LatentFeature& z) {
  Mat<float> x = ae.decode(z.z);
  if (z.original_frames > 0 && z.original_frames < x.cols()) {
    return x.leftCols(z.original_frames);
  }
  return x;
}

double snr_db(const Mat<float>& reference, const Mat<float>& reconstruction) {
  if (reference.rows() != reconstruction.rows() ||
      reference.cols() != reconstruction.cols()) {
    throw ShapeMismatchError("snr operands differ in shape");
  }
  double sig = reference.cast<double>().squaredNorm();
  double err = (reference - reconstruction).cast<double>().squaredNorm();
  if (err <= 0.0) return 300.0;
  if (sig <= 0.0) return -300.0;
  return std::min(300.0, 10.0 * std::log10(sig / err));
}

std::vector<double> train_autoencoder(Autoencoder<float>& ae,
                                      const std::vector<Mat<float>>& corpus,
                                      const AeTrainConfig& cfg) {
  if (corpus.empty()) throw InputError("Autoencoder", "empty training corpus");
  long r = ae.cfg.reduction();
  std::vector<Mat<float>> prepared;
  prepared.reserve(corpus.size());
  for (const Mat<float>& x : corpus) {
    if (x.rows() != ae.cfg.input_dim) {
      throw ShapeMismatchError("autoencoder corpus feature dim");
    }
    long keep = (x.cols() / r) * r;
    if (keep < r) {
      throw InputError("Autoencoder",
                       "training clip shorter than one latent frame");
    }
    prepared.push_back(x.leftCols(keep));
  }
  std::mt19937 rng(cfg.seed);
  ae.init(rng);
  std::vector<Param<float>*> params = ae.params();
  Adam<float> adam;
  adam.attach(params);
  std::vector<double> losses;
  losses.reserve(static_cast<size_t>(cfg.steps));
  size_t batch = cfg.batch_size > 0
                     ? std::min<size_t>(static_cast<size_t>(cfg.batch_size),
                                        prepared.size())
                     : prepared.size();
  float scale = 1.0f / static_cast<float>(batch);
  std::vector<size_t> indices(batch);
  for (long step = 1; step <= cfg.steps; ++step) {
    if (batch == prepared.size()) {
      for (size_t i = 0; i < batch; ++i) indices[i] = i;
    } else {
      std::mt19937 pick(cfg.seed ^ (0x9e3779b9u + static_cast<uint32_t>(step) *
                                                      0x85ebca6bu));
      for (size_t& idx : indices) idx = pick() % prepared.size();
    }
    ae.zero_grad();
    double total = 0.0;
    for (size_t idx : indices) {
      total += ae.reconstruction_step(prepared[idx], scale,
                                      /*do_backward=*/true);
    }
    total /= static_cast<double>(batch);
    if (!std::isfinite(total)) {
      throw NaNLossError(step, "autoencoder reconstruction loss");
    }
    adam.step(params, static_cast<float>(cfg.lr));
    losses.push_back(total);
  }
  return losses;
}

}  // namespace lanstyle
