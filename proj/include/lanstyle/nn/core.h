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

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace lanstyle {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Mask = std::vector<std::uint8_t>;  // 1 = real column, 0 = padding

// A named tensor with its gradient accumulator. Vectors are stored n x 1.
template <class T>
struct Param {
  std::string name;
  Mat<T> v;
  Mat<T> g;

  void resize(Eigen::Index rows, Eigen::Index cols) {
    v.setZero(rows, cols);
    g.setZero(rows, cols);
  }
  void zero_grad() { g.setZero(); }
  long count() const { return static_cast<long>(v.size()); }
};

// Per-call training knobs. rng == nullptr means inference: dropout off and
// the forward pass is a pure function of inputs and parameters.
struct RunState {
  std::mt19937* rng = nullptr;
  double dropout = 0.0;

  bool training() const { return rng != nullptr && dropout > 0.0; }
};

// Feature-major sequence: one column per token or frame.
template <class T>
struct Sequence {
  Mat<T> data;
  Mask mask;

  Eigen::Index dim() const { return data.rows(); }
  Eigen::Index length() const { return data.cols(); }

  void zero_masked() {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (!mask[static_cast<size_t>(j)]) data.col(j).setZero();
    }
  }
};

template <class T>
void zero_masked_columns(Mat<T>& m, const Mask& mask) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (!mask[static_cast<size_t>(j)]) m.col(j).setZero();
  }
}

// Portable uniform draw in [lo, hi): uses raw mt19937 output so that the
// stream does not depend on the standard library's distribution internals.
template <class T>
T uniform_draw(std::mt19937& rng, T lo, T hi) {
  double u = static_cast<double>(rng()) * (1.0 / 4294967296.0);
  return static_cast<T>(lo + (hi - lo) * static_cast<T>(u));
}

template <class T>
void init_uniform(Mat<T>& m, std::mt19937& rng, T bound) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      m(r, c) = uniform_draw<T>(rng, -bound, bound);
    }
  }
}

}  // namespace lanstyle
