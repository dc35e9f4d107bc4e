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

#include <cfenv>
#include <cmath>
#include <vector>

#include "lanstyle/common/errors.h"
#include "lanstyle/nn/core.h"

namespace lanstyle {

// Round half to even, matching IEEE default rounding.
inline long round_half_even(double x) {
  std::fenv_t saved;
  std::feholdexcept(&saved);
  std::fesetround(FE_TONEAREST);
  long r = std::lrint(x);
  std::fesetenv(&saved);
  return r;
}

// Predicted log-durations -> integer frame counts. Unmasked tokens get at
// least one frame; masked tokens get zero.
template <class T>
std::vector<int> durations_from_log(const Mat<T>& log_d, const Mask& mask) {
  std::vector<int> out(static_cast<size_t>(log_d.cols()), 0);
  for (Eigen::Index j = 0; j < log_d.cols(); ++j) {
    if (!mask[static_cast<size_t>(j)]) continue;
    double frames = std::exp(static_cast<double>(log_d(0, j)));
    long r = round_half_even(frames);
    out[static_cast<size_t>(j)] = static_cast<int>(r < 1 ? 1 : r);
  }
  return out;
}

// Expand token-level columns to frame level: token j is repeated d[j] times.
// Returns the frame sequence plus the frame -> token index map used by the
// backward pass.
template <class T>
Mat<T> length_regulate(const Mat<T>& tokens, const std::vector<int>& d,
                       std::vector<int>* frame_to_token) {
  if (static_cast<size_t>(tokens.cols()) != d.size()) {
    throw ShapeMismatchError("length regulation duration count");
  }
  long total = 0;
  for (int v : d) {
    if (v < 0) throw DurationMismatchError("negative duration");
    total += v;
  }
  Mat<T> frames(tokens.rows(), total);
  if (frame_to_token) frame_to_token->assign(static_cast<size_t>(total), 0);
  Eigen::Index t = 0;
  for (size_t j = 0; j < d.size(); ++j) {
    for (int k = 0; k < d[j]; ++k, ++t) {
      frames.col(t) = tokens.col(static_cast<Eigen::Index>(j));
      if (frame_to_token) {
        (*frame_to_token)[static_cast<size_t>(t)] = static_cast<int>(j);
      }
    }
  }
  return frames;
}

// Adjoint of length_regulate: sum frame gradients back onto their token.
template <class T>
Mat<T> length_regulate_backward(const Mat<T>& dframes,
                                const std::vector<int>& frame_to_token,
                                Eigen::Index num_tokens) {
  Mat<T> dtok = Mat<T>::Zero(dframes.rows(), num_tokens);
  for (Eigen::Index t = 0; t < dframes.cols(); ++t) {
    dtok.col(frame_to_token[static_cast<size_t>(t)]) += dframes.col(t);
  }
  return dtok;
}

// L1 loss between predicted log-durations and log of ground-truth frame
// counts, averaged over unmasked tokens. Gradient written to *dlog_d.
template <class T>
T duration_loss(const Mat<T>& log_d, const std::vector<int>& gt,
                const Mask& mask, Mat<T>* dlog_d) {
  if (static_cast<size_t>(log_d.cols()) != gt.size() ||
      gt.size() != mask.size()) {
    throw ShapeMismatchError("duration loss lengths");
  }
  if (dlog_d) dlog_d->setZero(1, log_d.cols());
  T loss = T(0);
  int n = 0;
  for (Eigen::Index j = 0; j < log_d.cols(); ++j) {
    if (!mask[static_cast<size_t>(j)]) continue;
    int g = gt[static_cast<size_t>(j)];
    if (g <= 0) {
      throw DurationMismatchError("ground-truth duration must be positive");
    }
    T diff = log_d(0, j) - static_cast<T>(std::log(static_cast<double>(g)));
    loss += std::abs(diff);
    if (dlog_d) (*dlog_d)(0, j) = diff > T(0) ? T(1) : (diff < T(0) ? T(-1) : T(0));
    ++n;
  }
  if (n == 0) return T(0);
  loss /= static_cast<T>(n);
  if (dlog_d) *dlog_d /= static_cast<T>(n);
  return loss;
}

}  // namespace lanstyle
