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

#include <cmath>
#include <vector>

#include "lanstyle/common/errors.h"
#include "lanstyle/nn/core.h"

namespace lanstyle {

// Inverse-square-root warmup schedule:
//   lr = base_lr * min(step^{-1/2}, step * warmup^{-3/2})
// Both branches meet at step == warmup with value base_lr / sqrt(warmup).
inline double lr_schedule(long step, double base_lr, long warmup) {
  if (step < 1) throw ConfigError("lr_schedule step must be >= 1");
  if (warmup < 1) throw ConfigError("lr_schedule warmup must be >= 1");
  double s = static_cast<double>(step);
  double w = static_cast<double>(warmup);
  return base_lr * std::min(1.0 / std::sqrt(s), s / (w * std::sqrt(w)));
}

// Adam with bias correction. Moment buffers are keyed by position in the
// parameter registry, which is stable for a given model configuration.
template <typename T>
class Adam {
 public:
  struct Moments {
    Mat<T> m;
    Mat<T> v;
  };

  explicit Adam(double beta1 = 0.9, double beta2 = 0.98, double eps = 1e-9)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void attach(const std::vector<Param<T>*>& params) {
    state_.clear();
    state_.reserve(params.size());
    for (const Param<T>* p : params) {
      Moments mo;
      mo.m.setZero(p->v.rows(), p->v.cols());
      mo.v.setZero(p->v.rows(), p->v.cols());
      state_.push_back(std::move(mo));
    }
    t_ = 0;
  }

  // One update over all parameters from their accumulated gradients.
  void step(const std::vector<Param<T>*>& params, double lr) {
    if (params.size() != state_.size()) {
      throw ShapeMismatchError("optimizer state does not match registry");
    }
    ++t_;
    const T b1 = static_cast<T>(beta1_);
    const T b2 = static_cast<T>(beta2_);
    const T one = static_cast<T>(1);
    const T corr1 =
        one / (one - static_cast<T>(std::pow(beta1_, static_cast<double>(t_))));
    const T corr2 =
        one / (one - static_cast<T>(std::pow(beta2_, static_cast<double>(t_))));
    const T step_lr = static_cast<T>(lr);
    const T eps = static_cast<T>(eps_);
    for (size_t i = 0; i < params.size(); ++i) {
      Param<T>& p = *params[i];
      Moments& mo = state_[i];
      if (mo.m.rows() != p.v.rows() || mo.m.cols() != p.v.cols()) {
        throw ShapeMismatchError("optimizer moment shape mismatch: " + p.name);
      }
      mo.m = b1 * mo.m + (one - b1) * p.g;
      mo.v.array() = b2 * mo.v.array() + (one - b2) * p.g.array().square();
      p.v.array() -= step_lr * (mo.m.array() * corr1) /
                     ((mo.v.array() * corr2).sqrt() + eps);
    }
  }

  long t() const { return t_; }
  void set_t(long t) { t_ = t; }
  std::vector<Moments>& state() { return state_; }
  const std::vector<Moments>& state() const { return state_; }
  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  double eps() const { return eps_; }

 private:
  double beta1_;
  double beta2_;
  double eps_;
  long t_ = 0;
  std::vector<Moments> state_;
};

}  // namespace lanstyle
