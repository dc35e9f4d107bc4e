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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lanstyle/nn/layers.h"

using namespace lanstyle;

namespace {

using Md = Mat<double>;

Md random_mat(std::mt19937& rng, Eigen::Index r, Eigen::Index c,
              double lo = -1.0, double hi = 1.0) {
  Md m(r, c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) {
      m(i, j) = uniform_draw<double>(rng, lo, hi);
    }
  }
  return m;
}

// Central-difference check of dL/dtheta for a sample of entries of `m`
// against `analytic`, where `loss` recomputes the scalar objective.
template <class F>
void fd_check_matrix(Md& m, const Md& analytic, F&& loss, std::mt19937& rng,
                     int samples = 16, double tol = 1e-6) {
  REQUIRE(m.rows() == analytic.rows());
  REQUIRE(m.cols() == analytic.cols());
  const double eps = 1e-5;
  for (int s = 0; s < samples; ++s) {
    Eigen::Index i = static_cast<Eigen::Index>(rng() % m.rows());
    Eigen::Index j = static_cast<Eigen::Index>(rng() % m.cols());
    double orig = m(i, j);
    m(i, j) = orig + eps;
    double lp = loss();
    m(i, j) = orig - eps;
    double lm = loss();
    m(i, j) = orig;
    double fd = (lp - lm) / (2 * eps);
    double an = analytic(i, j);
    // The 0.1 floor turns the test absolute near zero, where central
    // differences bottom out at cancellation noise (~1e-10 here).
    double denom = std::max({std::abs(fd), std::abs(an), 0.1});
    CAPTURE(i);
    CAPTURE(j);
    CAPTURE(fd);
    CAPTURE(an);
    CHECK(std::abs(fd - an) / denom < tol);
  }
}

template <class L, class F>
void fd_check_params(L& layer, F&& loss, std::mt19937& rng, int samples = 16,
                     double tol = 1e-6) {
  std::vector<Param<double>*> ps;
  layer.collect(ps);
  for (Param<double>* p : ps) {
    CAPTURE(p->name);
    fd_check_matrix(p->v, p->g, loss, rng, samples, tol);
  }
}

template <class L>
void zero_params(L& layer) {
  std::vector<Param<double>*> ps;
  layer.collect(ps);
  for (Param<double>* p : ps) p->zero_grad();
}

Mask ones(size_t n) { return Mask(n, 1); }

}  // namespace

TEST_CASE("positional encoding matches the sinusoid table") {
  Md pe = positional_encoding<double>(4, 3);
  CHECK(pe(0, 0) == doctest::Approx(0.0));
  CHECK(pe(1, 0) == doctest::Approx(1.0));
  CHECK(pe(2, 0) == doctest::Approx(0.0));
  CHECK(pe(3, 0) == doctest::Approx(1.0));
  // dim 4, position 1: high-frequency pair uses t/1, low uses t/100.
  CHECK(pe(0, 1) == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
  CHECK(pe(1, 1) == doctest::Approx(std::cos(1.0)).epsilon(1e-12));
  CHECK(pe(2, 1) == doctest::Approx(0.00999983).epsilon(1e-5));
  CHECK(pe(3, 1) == doctest::Approx(0.99995).epsilon(1e-6));

  CHECK_THROWS_AS(positional_encoding<double>(5, 3), ConfigError);

  // Masked columns must not receive the encoding.
  Sequence<double> seq;
  seq.data = Md::Zero(4, 3);
  seq.mask = {1, 0, 1};
  add_positional_encoding(seq);
  CHECK(seq.data.col(1).norm() == 0.0);
  CHECK(seq.data(1, 0) == doctest::Approx(1.0));
  CHECK(seq.data(0, 2) == doctest::Approx(std::sin(2.0)));
}

TEST_CASE("dropout is identity at inference and inverted-scaled in training") {
  std::mt19937 rng(11);
  Md x = random_mat(rng, 8, 50);

  RunState infer;
  DropoutCache<double> cache;
  Md y = dropout_forward(x, infer, &cache);
  CHECK(y == x);
  CHECK_FALSE(cache.active);
  CHECK(dropout_backward(cache, x) == x);

  RunState train;
  train.rng = &rng;
  train.dropout = 0.4;
  Md yt = dropout_forward(x, train, &cache);
  CHECK(cache.active);
  int zeros = 0, kept = 0;
  for (Eigen::Index j = 0; j < yt.cols(); ++j) {
    for (Eigen::Index i = 0; i < yt.rows(); ++i) {
      if (cache.scale(i, j) == 0.0) {
        ++zeros;
        CHECK(yt(i, j) == 0.0);
      } else {
        ++kept;
        CHECK(yt(i, j) == doctest::Approx(x(i, j) / 0.6));
      }
    }
  }
  double drop_rate = static_cast<double>(zeros) / (zeros + kept);
  CHECK(drop_rate == doctest::Approx(0.4).epsilon(0.15));
  // Backward applies the same sampled mask.
  Md dy = random_mat(rng, 8, 50);
  CHECK(dropout_backward(cache, dy) == dy.cwiseProduct(cache.scale));
}

TEST_CASE("embedding handles pads, rejects bad ids, accumulates gradients") {
  Embedding<double> emb;
  emb.build("emb", 6, 4, 0);
  std::mt19937 rng(3);
  emb.init(rng, 0.5);

  EmbeddingCache<double> cache;
  Sequence<double> seq = emb.forward({2, 0, 5, 2}, &cache);
  CHECK(seq.dim() == 4);
  CHECK(seq.length() == 4);
  CHECK(seq.mask == Mask({1, 0, 1, 1}));
  CHECK(seq.data.col(1).norm() == 0.0);
  CHECK(seq.data.col(0) == seq.data.col(3));
  CHECK(seq.data.col(0).transpose() == emb.table.v.row(2));

  CHECK_THROWS_AS(emb.forward({6}, nullptr), IdOutOfRangeError);
  CHECK_THROWS_AS(emb.forward({-1}, nullptr), IdOutOfRangeError);

  emb.table.zero_grad();
  Md dy = random_mat(rng, 4, 4);
  emb.backward(cache, dy);
  CHECK(emb.table.g.row(0).norm() == 0.0);  // pad row untouched
  CHECK(emb.table.g.row(2).transpose() ==
        (dy.col(0) + dy.col(3)));
  CHECK(emb.table.g.row(5).transpose() == dy.col(2));

  auto loss = [&]() {
    return emb.forward({2, 0, 5, 2}, nullptr).data.cwiseProduct(dy).sum();
  };
  fd_check_matrix(emb.table.v, emb.table.g, loss, rng, 24);
}

TEST_CASE("layer norm normalizes per column and passes a gradient check") {
  std::mt19937 rng(7);
  LayerNorm<double> ln;
  ln.build("ln", 6);
  ln.gain.v = random_mat(rng, 6, 1, 0.5, 1.5);
  ln.bias.v = random_mat(rng, 6, 1, -0.5, 0.5);

  Md x = random_mat(rng, 6, 5, -2.0, 2.0);
  Mask mask = {1, 1, 0, 1, 1};
  LayerNormCache<double> cache;
  Md y = ln.forward(x, mask, &cache);

  CHECK(y.col(2).norm() == 0.0);
  for (Eigen::Index j : {0, 1, 3, 4}) {
    Md xhat = cache.xhat.col(j);
    CHECK(xhat.mean() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(xhat.array().square().mean() == doctest::Approx(1.0).epsilon(1e-4));
  }

  Md w = random_mat(rng, 6, 5);
  zero_params(ln);
  Md dx = ln.backward(cache, w);
  CHECK(dx.col(2).norm() == 0.0);

  auto loss = [&]() {
    return ln.forward(x, mask, nullptr).cwiseProduct(w).sum();
  };
  fd_check_params(ln, loss, rng);
  fd_check_matrix(x, dx, loss, rng, 24);
}

TEST_CASE("conv1d geometry and gradient check") {
  std::mt19937 rng(13);

  SUBCASE("same padding keeps length, odd and even kernels") {
    for (Eigen::Index k : {1, 3, 4, 9}) {
      Conv1d<double> conv;
      conv.build_same("c", 3, 5, k);
      conv.init(rng);
      Md x = random_mat(rng, 3, 7);
      CHECK(conv.forward(x, nullptr).cols() == 7);
    }
  }

  SUBCASE("strided downsampling halves length") {
    Conv1d<double> conv;
    conv.build("c", 2, 4, 4, 2, 1, 1);
    conv.init(rng);
    Md x = random_mat(rng, 2, 10);
    CHECK(conv.forward(x, nullptr).cols() == 5);
  }

  SUBCASE("wrong channel count throws") {
    Conv1d<double> conv;
    conv.build_same("c", 3, 5, 3);
    Md x = random_mat(rng, 4, 7);
    CHECK_THROWS_AS(conv.forward(x, nullptr), ShapeMismatchError);
  }

  SUBCASE("gradients") {
    Conv1d<double> conv;
    conv.build("c", 3, 4, 4, 2, 1, 1);
    conv.init(rng);
    conv.b.v = random_mat(rng, 4, 1, -0.2, 0.2);
    Md x = random_mat(rng, 3, 9);
    Md w = random_mat(rng, 4, conv.out_len(9));

    zero_params(conv);
    Conv1dCache<double> cache;
    Md y = conv.forward(x, &cache);
    Md dx = conv.backward(cache, w);
    auto loss = [&]() {
      return conv.forward(x, nullptr).cwiseProduct(w).sum();
    };
    fd_check_params(conv, loss, rng);
    fd_check_matrix(x, dx, loss, rng, 24);
  }
}

TEST_CASE("transposed conv inverts strided geometry and checks out") {
  std::mt19937 rng(17);
  ConvTranspose1d<double> up;
  up.build("u", 3, 2, 4, 2, 1);
  up.init(rng);
  up.b.v = random_mat(rng, 2, 1, -0.2, 0.2);

  Md x = random_mat(rng, 3, 6);
  CHECK(up.out_len(6) == 12);

  Conv1d<double> down;
  down.build("d", 2, 3, 4, 2, 1, 1);
  CHECK(down.out_len(12) == 6);

  zero_params(up);
  ConvTranspose1dCache<double> cache;
  Md y = up.forward(x, &cache);
  CHECK(y.cols() == 12);
  Md w = random_mat(rng, 2, 12);
  Md dx = up.backward(cache, w);
  auto loss = [&]() { return up.forward(x, nullptr).cwiseProduct(w).sum(); };
  fd_check_params(up, loss, rng);
  fd_check_matrix(x, dx, loss, rng, 24);
}

TEST_CASE("self-attention: masked keys carry no weight, gradients are exact") {
  std::mt19937 rng(19);
  MultiHeadSelfAttention<double> attn;
  attn.build("a", 6, 2);
  attn.init(rng, 0.4);

  CHECK_THROWS_AS(
      [] {
        MultiHeadSelfAttention<double> bad;
        bad.build("b", 6, 4);
      }(),
      ConfigError);

  Md x = random_mat(rng, 6, 5);
  Mask mask = {1, 1, 1, 0, 1};
  AttentionCache<double> cache;
  Md y = attn.forward(x, mask, &cache);
  CHECK(y.col(3).norm() == 0.0);

  for (const Md& a : cache.attn) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      CHECK(a.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(a(i, 3) == 0.0);  // masked key gets exactly zero weight
    }
  }

  // Values in the masked column must not influence unmasked outputs.
  Md x2 = x;
  x2.col(3).setConstant(123.0);
  Md y2 = attn.forward(x2, mask, nullptr);
  for (Eigen::Index j : {0, 1, 2, 4}) {
    CHECK(y.col(j) == y2.col(j));
  }

  zero_params(attn);
  Md w = random_mat(rng, 6, 5);
  Md dx = attn.backward(cache, w);
  CHECK(dx.col(3).norm() == 0.0);
  auto loss = [&]() {
    return attn.forward(x, mask, nullptr).cwiseProduct(w).sum();
  };
  fd_check_params(attn, loss, rng, 10);
  fd_check_matrix(x, dx, loss, rng, 24);
}

TEST_CASE("fft block with zero weights reduces to stacked layer norms") {
  FftBlock<double> block;
  block.build("b", 4, 2, 8, 3, 1);  // params start at zero, gains at one

  std::mt19937 rng(23);
  Md x = random_mat(rng, 4, 6);
  Mask mask = ones(6);
  RunState rs;
  Md y = block.forward(x, mask, rs, nullptr);

  LayerNorm<double> ln;
  ln.build("ln", 4);
  Md expect = ln.forward(ln.forward(x, mask, nullptr), mask, nullptr);
  CHECK((y - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fft block gradient check") {
  std::mt19937 rng(29);
  FftBlock<double> block;
  block.build("b", 4, 2, 6, 3, 1);
  block.init(rng, 0.4);

  Md x = random_mat(rng, 4, 5);
  Mask mask = {1, 1, 0, 1, 1};
  RunState rs;

  zero_params(block);
  FftBlockCache<double> cache;
  Md y = block.forward(x, mask, rs, &cache);
  CHECK(y.col(2).norm() == 0.0);
  Md w = random_mat(rng, 4, 5);
  Md dx = block.backward(cache, w);
  auto loss = [&]() {
    return block.forward(x, mask, rs, nullptr).cwiseProduct(w).sum();
  };
  fd_check_params(block, loss, rng, 8);
  fd_check_matrix(x, dx, loss, rng, 24);
}

TEST_CASE("fft block: padding a sequence does not change its output") {
  std::mt19937 rng(31);
  FftBlock<double> block;
  block.build("b", 8, 2, 12, 9, 1);
  block.init(rng, 0.3);
  RunState rs;

  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Index len = 2 + static_cast<Eigen::Index>(rng() % 6);
    Eigen::Index pad = 1 + static_cast<Eigen::Index>(rng() % 5);
    Md x = random_mat(rng, 8, len);
    Md y = block.forward(x, ones(static_cast<size_t>(len)), rs, nullptr);

    Md xp = Md::Zero(8, len + pad);
    xp.leftCols(len) = x;
    // Junk in masked columns must be invisible to the real ones.
    xp.rightCols(pad) = random_mat(rng, 8, pad, -5.0, 5.0);
    Mask mp(static_cast<size_t>(len + pad), 1);
    for (size_t j = static_cast<size_t>(len); j < mp.size(); ++j) mp[j] = 0;
    Md yp = block.forward(xp, mp, rs, nullptr);

    // Identical up to reduction-order rounding (vector sums regroup when
    // the sequence length changes).
    CHECK((yp.leftCols(len) - y).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(yp.rightCols(pad).norm() == 0.0);
  }
}
