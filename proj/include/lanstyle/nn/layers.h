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
#include <limits>
#include <vector>

#include "lanstyle/common/errors.h"
#include "lanstyle/nn/core.h"

namespace lanstyle {

// Large-negative attention logit for masked keys; exp() underflows to zero
// in both float and double after max subtraction.
template <class T>
constexpr T masked_logit() {
  return static_cast<T>(-1e30);
}

// ---------------------------------------------------------------------------
// Dropout (inverted scaling). Cache keeps the sampled keep/scale mask.

template <class T>
struct DropoutCache {
  Mat<T> scale;  // elementwise factor applied in forward
  bool active = false;
};

template <class T>
Mat<T> dropout_forward(const Mat<T>& x, const RunState& rs,
                       DropoutCache<T>* cache) {
  if (!rs.training()) {
    if (cache) cache->active = false;
    return x;
  }
  T keep = static_cast<T>(1.0 - rs.dropout);
  Mat<T> scale(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      double u = static_cast<double>((*rs.rng)()) * (1.0 / 4294967296.0);
      scale(r, c) = u < 1.0 - rs.dropout ? T(1) / keep : T(0);
    }
  }
  if (cache) {
    cache->scale = scale;
    cache->active = true;
  }
  return x.cwiseProduct(scale);
}

template <class T>
Mat<T> dropout_backward(const DropoutCache<T>& cache, const Mat<T>& dy) {
  if (!cache.active) return dy;
  return dy.cwiseProduct(cache.scale);
}

// ---------------------------------------------------------------------------
// Layer norm over the feature dimension, one statistic per column.

template <class T>
struct LayerNormCache {
  Mat<T> xhat;
  std::vector<T> inv_std;
  Mask mask;
};

template <class T>
class LayerNorm {
 public:
  Param<T> gain, bias;
  static constexpr T kEps = static_cast<T>(1e-5);

  void build(const std::string& prefix, Eigen::Index dim) {
    gain.name = prefix + ".gain";
    bias.name = prefix + ".bias";
    gain.resize(dim, 1);
    bias.resize(dim, 1);
    gain.v.setOnes();
  }

  void collect(std::vector<Param<T>*>& out) {
    out.push_back(&gain);
    out.push_back(&bias);
  }

  Mat<T> forward(const Mat<T>& x, const Mask& mask,
                 LayerNormCache<T>* cache) const {
    Eigen::Index m = x.rows(), l = x.cols();
    Mat<T> y(m, l);
    Mat<T> xhat(m, l);
    std::vector<T> inv_std(static_cast<size_t>(l), T(0));
    for (Eigen::Index j = 0; j < l; ++j) {
      if (!mask[static_cast<size_t>(j)]) {
        y.col(j).setZero();
        xhat.col(j).setZero();
        continue;
      }
      T mu = x.col(j).mean();
      T var = (x.col(j).array() - mu).square().sum() / static_cast<T>(m);
      T is = T(1) / std::sqrt(var + kEps);
      inv_std[static_cast<size_t>(j)] = is;
      xhat.col(j) = (x.col(j).array() - mu) * is;
      y.col(j) =
          xhat.col(j).cwiseProduct(gain.v.col(0)) + bias.v.col(0);
    }
    if (cache) {
      cache->xhat = std::move(xhat);
      cache->inv_std = std::move(inv_std);
      cache->mask = mask;
    }
    return y;
  }

  Mat<T> backward(const LayerNormCache<T>& cache, const Mat<T>& dy) {
    Eigen::Index m = cache.xhat.rows(), l = cache.xhat.cols();
    Mat<T> dx = Mat<T>::Zero(m, l);
    for (Eigen::Index j = 0; j < l; ++j) {
      if (!cache.mask[static_cast<size_t>(j)]) continue;
      gain.g.col(0) += dy.col(j).cwiseProduct(cache.xhat.col(j));
      bias.g.col(0) += dy.col(j);
      Mat<T> dxhat = dy.col(j).cwiseProduct(gain.v.col(0));
      T mean_dxhat = dxhat.mean();
      T mean_dxhat_xhat = dxhat.cwiseProduct(cache.xhat.col(j)).mean();
      dx.col(j) = cache.inv_std[static_cast<size_t>(j)] *
                  (dxhat.array() - mean_dxhat -
                   cache.xhat.col(j).array() * mean_dxhat_xhat)
                      .matrix();
    }
    return dx;
  }
};

// ---------------------------------------------------------------------------
// 1-D convolution over time (columns), channels on rows, im2col + GEMM.
// Weight layout: (out_channels) x (in_channels * kernel).

template <class T>
struct Conv1dCache {
  Mat<T> cols;
  Eigen::Index in_len = 0;
};

template <class T>
class Conv1d {
 public:
  Param<T> w, b;
  Eigen::Index in_ch = 0, out_ch = 0, kernel = 1, stride = 1;
  Eigen::Index pad_left = 0, pad_right = 0;

  void build(const std::string& prefix, Eigen::Index in_channels,
             Eigen::Index out_channels, Eigen::Index k, Eigen::Index s,
             Eigen::Index pl, Eigen::Index pr) {
    in_ch = in_channels;
    out_ch = out_channels;
    kernel = k;
    stride = s;
    pad_left = pl;
    pad_right = pr;
    w.name = prefix + ".w";
    b.name = prefix + ".b";
    w.resize(out_ch, in_ch * kernel);
    b.resize(out_ch, 1);
  }

  // Length-preserving stride-1 variant.
  void build_same(const std::string& prefix, Eigen::Index in_channels,
                  Eigen::Index out_channels, Eigen::Index k) {
    build(prefix, in_channels, out_channels, k, 1, (k - 1) / 2, k / 2);
  }

  void collect(std::vector<Param<T>*>& out) {
    out.push_back(&w);
    out.push_back(&b);
  }

  void init(std::mt19937& rng) {
    T bound = T(1) / std::sqrt(static_cast<T>(in_ch * kernel));
    init_uniform(w.v, rng, bound);
  }

  Eigen::Index out_len(Eigen::Index in_len) const {
    return (in_len + pad_left + pad_right - kernel) / stride + 1;
  }

  Mat<T> forward(const Mat<T>& x, Conv1dCache<T>* cache) const {
    if (x.rows() != in_ch) {
      throw ShapeMismatchError("conv1d input channels");
    }
    Eigen::Index lo = out_len(x.cols());
    Mat<T> cols = Mat<T>::Zero(in_ch * kernel, lo);
    for (Eigen::Index t = 0; t < lo; ++t) {
      Eigen::Index start = t * stride - pad_left;
      for (Eigen::Index j = 0; j < kernel; ++j) {
        Eigen::Index src = start + j;
        if (src < 0 || src >= x.cols()) continue;
        for (Eigen::Index c = 0; c < in_ch; ++c) {
          cols(c * kernel + j, t) = x(c, src);
        }
      }
    }
    Mat<T> y = w.v * cols;
    y.colwise() += b.v.col(0);
    if (cache) {
      cache->cols = std::move(cols);
      cache->in_len = x.cols();
    }
    return y;
  }

  Mat<T> backward(const Conv1dCache<T>& cache, const Mat<T>& dy) {
    w.g += dy * cache.cols.transpose();
    b.g.col(0) += dy.rowwise().sum();
    Mat<T> dcols = w.v.transpose() * dy;
    Mat<T> dx = Mat<T>::Zero(in_ch, cache.in_len);
    for (Eigen::Index t = 0; t < dy.cols(); ++t) {
      Eigen::Index start = t * stride - pad_left;
      for (Eigen::Index j = 0; j < kernel; ++j) {
        Eigen::Index src = start + j;
        if (src < 0 || src >= cache.in_len) continue;
        for (Eigen::Index c = 0; c < in_ch; ++c) {
          dx(c, src) += dcols(c * kernel + j, t);
        }
      }
    }
    return dx;
  }
};

// ---------------------------------------------------------------------------
// Transposed 1-D convolution (stride-s upsampling), the adjoint of Conv1d
// with the same geometry: output length = stride * input length.

template <class T>
struct ConvTranspose1dCache {
  Mat<T> x;
};

template <class T>
class ConvTranspose1d {
 public:
  Param<T> w, b;  // w: (in_channels) x (out_channels * kernel)
  Eigen::Index in_ch = 0, out_ch = 0, kernel = 1, stride = 1;
  Eigen::Index pad = 0;  // trimmed from both output ends

  void build(const std::string& prefix, Eigen::Index in_channels,
             Eigen::Index out_channels, Eigen::Index k, Eigen::Index s,
             Eigen::Index p) {
    in_ch = in_channels;
    out_ch = out_channels;
    kernel = k;
    stride = s;
    pad = p;
    w.name = prefix + ".w";
    b.name = prefix + ".b";
    w.resize(in_ch, out_ch * kernel);
    b.resize(out_ch, 1);
  }

  void collect(std::vector<Param<T>*>& out) {
    out.push_back(&w);
    out.push_back(&b);
  }

  void init(std::mt19937& rng) {
    T bound = T(1) / std::sqrt(static_cast<T>(in_ch * kernel));
    init_uniform(w.v, rng, bound);
  }

  Eigen::Index out_len(Eigen::Index in_len) const {
    return (in_len - 1) * stride + kernel - 2 * pad;
  }

  Mat<T> forward(const Mat<T>& x, ConvTranspose1dCache<T>* cache) const {
    if (x.rows() != in_ch) {
      throw ShapeMismatchError("conv_transpose1d input channels");
    }
    Eigen::Index lo = out_len(x.cols());
    Mat<T> y = Mat<T>::Zero(out_ch, lo);
    // contrib: (out_ch * kernel) x in_len
    Mat<T> contrib = w.v.transpose() * x;
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
      Eigen::Index start = t * stride - pad;
      for (Eigen::Index j = 0; j < kernel; ++j) {
        Eigen::Index dst = start + j;
        if (dst < 0 || dst >= lo) continue;
        for (Eigen::Index c = 0; c < out_ch; ++c) {
          y(c, dst) += contrib(c * kernel + j, t);
        }
      }
    }
    y.colwise() += b.v.col(0);
    if (cache) cache->x = x;
    return y;
  }

  Mat<T> backward(const ConvTranspose1dCache<T>& cache, const Mat<T>& dy) {
    Eigen::Index in_len = cache.x.cols();
    Mat<T> dcontrib = Mat<T>::Zero(out_ch * kernel, in_len);
    for (Eigen::Index t = 0; t < in_len; ++t) {
      Eigen::Index start = t * stride - pad;
      for (Eigen::Index j = 0; j < kernel; ++j) {
        Eigen::Index dst = start + j;
        if (dst < 0 || dst >= dy.cols()) continue;
        for (Eigen::Index c = 0; c < out_ch; ++c) {
          dcontrib(c * kernel + j, t) = dy(c, dst);
        }
      }
    }
    w.g += cache.x * dcontrib.transpose();
    b.g.col(0) += dy.rowwise().sum();
    return w.v * dcontrib;
  }
};

// ---------------------------------------------------------------------------
// Multi-head self-attention with key masking.

template <class T>
struct AttentionCache {
  Mat<T> x, q, k, v, concat;
  std::vector<Mat<T>> attn;  // one (L x L) row-softmax per head
  Mask mask;
};

template <class T>
class MultiHeadSelfAttention {
 public:
  Param<T> wq, bq, wk, bk, wv, bv, wo, bo;
  Eigen::Index dim = 0, heads = 1;

  void build(const std::string& prefix, Eigen::Index m, Eigen::Index h) {
    if (h < 1 || m % h != 0) {
      throw ConfigError("attention heads must divide embedding dim");
    }
    dim = m;
    heads = h;
    auto mk = [&](Param<T>& p, const char* n, Eigen::Index r,
                  Eigen::Index c) {
      p.name = prefix + "." + n;
      p.resize(r, c);
    };
    mk(wq, "wq", m, m);
    mk(bq, "bq", m, 1);
    mk(wk, "wk", m, m);
    mk(bk, "bk", m, 1);
    mk(wv, "wv", m, m);
    mk(bv, "bv", m, 1);
    mk(wo, "wo", m, m);
    mk(bo, "bo", m, 1);
  }

  void collect(std::vector<Param<T>*>& out) {
    for (Param<T>* p : {&wq, &bq, &wk, &bk, &wv, &bv, &wo, &bo}) {
      out.push_back(p);
    }
  }

  void init(std::mt19937& rng, T bound) {
    init_uniform(wq.v, rng, bound);
    init_uniform(wk.v, rng, bound);
    init_uniform(wv.v, rng, bound);
    init_uniform(wo.v, rng, bound);
  }

  Mat<T> forward(const Mat<T>& x, const Mask& mask,
                 AttentionCache<T>* cache) const {
    Eigen::Index l = x.cols();
    Eigen::Index d = dim / heads;
    T scale = T(1) / std::sqrt(static_cast<T>(d));

    Mat<T> q = wq.v * x;
    q.colwise() += bq.v.col(0);
    Mat<T> k = wk.v * x;
    k.colwise() += bk.v.col(0);
    Mat<T> v = wv.v * x;
    v.colwise() += bv.v.col(0);

    Mat<T> concat(dim, l);
    std::vector<Mat<T>> attn(static_cast<size_t>(heads));
    for (Eigen::Index h = 0; h < heads; ++h) {
      auto qh = q.middleRows(h * d, d);
      auto kh = k.middleRows(h * d, d);
      auto vh = v.middleRows(h * d, d);
      Mat<T> scores = (qh.transpose() * kh) * scale;  // (query l) x (key l)
      for (Eigen::Index j = 0; j < l; ++j) {
        if (!mask[static_cast<size_t>(j)]) {
          scores.col(j).setConstant(masked_logit<T>());
        }
      }
      Mat<T>& a = attn[static_cast<size_t>(h)];
      a.resize(l, l);
      for (Eigen::Index i = 0; i < l; ++i) {
        T mx = scores.row(i).maxCoeff();
        Eigen::Array<T, Eigen::Dynamic, 1> e =
            (scores.row(i).transpose().array() - mx).exp();
        a.row(i) = (e / e.sum()).transpose();
      }
      concat.middleRows(h * d, d) = vh * a.transpose();
    }
    Mat<T> y = wo.v * concat;
    y.colwise() += bo.v.col(0);
    zero_masked_columns(y, mask);
    if (cache) {
      cache->x = x;
      cache->q = std::move(q);
      cache->k = std::move(k);
      cache->v = std::move(v);
      cache->concat = std::move(concat);
      cache->attn = std::move(attn);
      cache->mask = mask;
    }
    return y;
  }

  Mat<T> backward(const AttentionCache<T>& cache, const Mat<T>& dy_in) {
    Eigen::Index l = cache.x.cols();
    Eigen::Index d = dim / heads;
    T scale = T(1) / std::sqrt(static_cast<T>(d));

    Mat<T> dy = dy_in;
    zero_masked_columns(dy, cache.mask);

    wo.g += dy * cache.concat.transpose();
    bo.g.col(0) += dy.rowwise().sum();
    Mat<T> dconcat = wo.v.transpose() * dy;

    Mat<T> dq = Mat<T>::Zero(dim, l), dk = Mat<T>::Zero(dim, l),
           dv = Mat<T>::Zero(dim, l);
    for (Eigen::Index h = 0; h < heads; ++h) {
      auto vh = cache.v.middleRows(h * d, d);
      auto qh = cache.q.middleRows(h * d, d);
      auto kh = cache.k.middleRows(h * d, d);
      const Mat<T>& a = cache.attn[static_cast<size_t>(h)];
      auto doh = dconcat.middleRows(h * d, d);

      // concat_h = vh * a^T
      Mat<T> da = doh.transpose() * vh;  // (l x l), same orientation as a
      dv.middleRows(h * d, d) = doh * a;

      Mat<T> ds(l, l);
      for (Eigen::Index i = 0; i < l; ++i) {
        T dot = a.row(i).dot(da.row(i));
        ds.row(i) = (a.row(i).array() * (da.row(i).array() - dot)).matrix();
      }
      // scores = scale * qh^T kh
      dq.middleRows(h * d, d) = scale * kh * ds.transpose();
      dk.middleRows(h * d, d) = scale * qh * ds;
    }
    wq.g += dq * cache.x.transpose();
    bq.g.col(0) += dq.rowwise().sum();
    wk.g += dk * cache.x.transpose();
    bk.g.col(0) += dk.rowwise().sum();
    wv.g += dv * cache.x.transpose();
    bv.g.col(0) += dv.rowwise().sum();
    return wq.v.transpose() * dq + wk.v.transpose() * dk +
           wv.v.transpose() * dv;
  }
};

// ---------------------------------------------------------------------------
// Feed-forward transformer block, post-norm:
//   h = LN1(x + SelfAttn(x)); out = LN2(h + Conv2(relu(Conv1(h))))
// Masked columns stay zero throughout so that padding never leaks through
// the convolutions.

template <class T>
struct FftBlockCache {
  AttentionCache<T> attn;
  DropoutCache<T> drop1, drop2;
  LayerNormCache<T> ln1, ln2;
  Conv1dCache<T> conv1, conv2;
  Mat<T> relu_in;
  Mask mask;
};

template <class T>
class FftBlock {
 public:
  MultiHeadSelfAttention<T> attn;
  LayerNorm<T> ln1, ln2;
  Conv1d<T> conv1, conv2;

  void build(const std::string& prefix, Eigen::Index m, Eigen::Index heads,
             Eigen::Index hidden, Eigen::Index k1, Eigen::Index k2) {
    attn.build(prefix + ".attn", m, heads);
    ln1.build(prefix + ".ln1", m);
    ln2.build(prefix + ".ln2", m);
    conv1.build_same(prefix + ".conv1", m, hidden, k1);
    conv2.build_same(prefix + ".conv2", hidden, m, k2);
  }

  void collect(std::vector<Param<T>*>& out) {
    attn.collect(out);
    ln1.collect(out);
    conv1.collect(out);
    conv2.collect(out);
    ln2.collect(out);
  }

  void init(std::mt19937& rng, T bound) {
    attn.init(rng, bound);
    conv1.init(rng);
    conv2.init(rng);
  }

  Mat<T> forward(const Mat<T>& x, const Mask& mask, const RunState& rs,
                 FftBlockCache<T>* cache) const {
    Mat<T> a = attn.forward(x, mask, cache ? &cache->attn : nullptr);
    a = dropout_forward(a, rs, cache ? &cache->drop1 : nullptr);
    Mat<T> h = ln1.forward(x + a, mask, cache ? &cache->ln1 : nullptr);
    zero_masked_columns(h, mask);

    Mat<T> c1 = conv1.forward(h, cache ? &cache->conv1 : nullptr);
    Mat<T> r = c1.cwiseMax(T(0));
    Mat<T> c2 = conv2.forward(r, cache ? &cache->conv2 : nullptr);
    c2 = dropout_forward(c2, rs, cache ? &cache->drop2 : nullptr);
    Mat<T> out = ln2.forward(h + c2, mask, cache ? &cache->ln2 : nullptr);
    zero_masked_columns(out, mask);
    if (cache) {
      cache->relu_in = std::move(c1);
      cache->mask = mask;
    }
    return out;
  }

  Mat<T> backward(FftBlockCache<T>& cache, const Mat<T>& dy_in) {
    Mat<T> dy = dy_in;
    zero_masked_columns(dy, cache.mask);
    Mat<T> dr2 = ln2.backward(cache.ln2, dy);  // grad of (h + c2)
    Mat<T> dc2 = dropout_backward(cache.drop2, dr2);
    Mat<T> dr = conv2.backward(cache.conv2, dc2);
    Mat<T> dc1 =
        (cache.relu_in.array() > T(0)).template cast<T>().matrix()
            .cwiseProduct(dr);
    Mat<T> dh = conv1.backward(cache.conv1, dc1) + dr2;
    zero_masked_columns(dh, cache.mask);

    Mat<T> dr1 = ln1.backward(cache.ln1, dh);  // grad of (x + a)
    Mat<T> da = dropout_backward(cache.drop1, dr1);
    Mat<T> dx = attn.backward(cache.attn, da) + dr1;
    zero_masked_columns(dx, cache.mask);
    return dx;
  }
};

// ---------------------------------------------------------------------------
// Token embedding. Output column j is row phoneme_ids[j] of the table; pad
// columns are zero and masked.

template <class T>
struct EmbeddingCache {
  std::vector<int> ids;
  Mask mask;
};

template <class T>
class Embedding {
 public:
  Param<T> table;  // vocab x dim
  int pad_id = 0;

  void build(const std::string& prefix, Eigen::Index vocab, Eigen::Index dim,
             int pad) {
    table.name = prefix + ".table";
    table.resize(vocab, dim);
    pad_id = pad;
  }

  void collect(std::vector<Param<T>*>& out) { out.push_back(&table); }

  void init(std::mt19937& rng, T bound) { init_uniform(table.v, rng, bound); }

  Sequence<T> forward(const std::vector<int>& ids,
                      EmbeddingCache<T>* cache) const {
    Sequence<T> seq;
    seq.data.setZero(table.v.cols(), static_cast<Eigen::Index>(ids.size()));
    seq.mask.assign(ids.size(), 1);
    for (size_t j = 0; j < ids.size(); ++j) {
      int id = ids[j];
      if (id < 0 || id >= table.v.rows()) {
        throw IdOutOfRangeError("embedding id " + std::to_string(id));
      }
      if (id == pad_id) {
        seq.mask[j] = 0;
      } else {
        seq.data.col(static_cast<Eigen::Index>(j)) = table.v.row(id);
      }
    }
    if (cache) {
      cache->ids = ids;
      cache->mask = seq.mask;
    }
    return seq;
  }

  void backward(const EmbeddingCache<T>& cache, const Mat<T>& dy) {
    for (size_t j = 0; j < cache.ids.size(); ++j) {
      if (!cache.mask[j]) continue;
      table.g.row(cache.ids[j]) +=
          dy.col(static_cast<Eigen::Index>(j)).transpose();
    }
  }
};

// ---------------------------------------------------------------------------
// Sinusoidal positional encoding added in place to unmasked columns:
//   PE[2i, t] = sin(t / 10000^(2i/M)), PE[2i+1, t] = cos(t / 10000^(2i/M)).

template <class T>
Mat<T> positional_encoding(Eigen::Index dim, Eigen::Index len) {
  if (dim % 2 != 0) {
    throw ConfigError("positional encoding needs an even embedding dim");
  }
  Mat<T> pe(dim, len);
  for (Eigen::Index i = 0; 2 * i < dim; ++i) {
    double denom = std::pow(10000.0, (2.0 * static_cast<double>(i)) /
                                         static_cast<double>(dim));
    for (Eigen::Index t = 0; t < len; ++t) {
      double arg = static_cast<double>(t) / denom;
      pe(2 * i, t) = static_cast<T>(std::sin(arg));
      pe(2 * i + 1, t) = static_cast<T>(std::cos(arg));
    }
  }
  return pe;
}

template <class T>
void add_positional_encoding(Sequence<T>& seq) {
  Mat<T> pe = positional_encoding<T>(seq.dim(), seq.length());
  for (Eigen::Index t = 0; t < seq.length(); ++t) {
    if (seq.mask[static_cast<size_t>(t)]) seq.data.col(t) += pe.col(t);
  }
}

}  // namespace lanstyle
