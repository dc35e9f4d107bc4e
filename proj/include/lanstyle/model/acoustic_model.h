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

#include <numeric>
#include <string>
#include <vector>

#include "lanstyle/model/config.h"
#include "lanstyle/model/duration.h"
#include "lanstyle/nn/layers.h"

namespace lanstyle {

template <class T>
struct StepLosses {
  T total = T(0);
  T tts = T(0);
  T duration = T(0);
};

// Pointwise fusion gate h = tanh(s) * sigmoid(s). The activations are
// returned for the backward pass when requested.
template <class T>
Mat<T> gated_fusion(const Mat<T>& s, Mat<T>* tanh_out, Mat<T>* sig_out) {
  Mat<T> th = s.array().tanh().matrix();
  Mat<T> sg = (T(1) / (T(1) + (-s.array()).exp())).matrix();
  Mat<T> h = th.cwiseProduct(sg);
  if (tanh_out) *tanh_out = std::move(th);
  if (sig_out) *sig_out = std::move(sg);
  return h;
}

// d/ds [tanh(s) * sigmoid(s)] given the cached activations.
template <class T>
Mat<T> gated_fusion_backward(const Mat<T>& dh, const Mat<T>& th,
                             const Mat<T>& sg) {
  return dh.cwiseProduct(((T(1) - th.array().square()) * sg.array() +
                          th.array() * sg.array() * (T(1) - sg.array()))
                             .matrix());
}

// Mean squared error over all feature cells. The gradient w.r.t. the
// prediction is written to *dpredicted when given.
template <class T>
T tts_loss(const Mat<T>& target, const Mat<T>& predicted,
           Mat<T>* dpredicted = nullptr) {
  if (target.rows() != predicted.rows() ||
      target.cols() != predicted.cols()) {
    throw ShapeMismatchError("tts loss feature shapes differ");
  }
  if (target.size() == 0) {
    throw EmptyInputError("tts loss on empty features");
  }
  Mat<T> diff = predicted - target;
  T denom = static_cast<T>(diff.size());
  if (dpredicted) *dpredicted = diff * (T(2) / denom);
  return diff.squaredNorm() / denom;
}

// Kind-tagged variant: comparing a mel target against a latent prediction
// (or vice versa) is a usage error, not a numerical one.
template <class T>
T tts_loss(const Mat<T>& target, FeatureKind target_kind,
           const Mat<T>& predicted, FeatureKind predicted_kind,
           Mat<T>* dpredicted = nullptr) {
  if (target_kind != predicted_kind) {
    throw KindMismatchError("tts loss feature kinds differ");
  }
  return tts_loss(target, predicted, dpredicted);
}

template <class T>
struct SynthesisResult {
  Mat<T> features;             // feature_dim x total_frames
  std::vector<int> durations;  // per input token, zero on pads
  Mat<T> log_durations;        // 1 x tokens, raw predictor output
};

// Text-and-style to acoustic-feature model. Two parallel encoder streams
// (phoneme tokens and per-token style tokens) are fused through a gated
// unit H = tanh(Hx + Hs) * sigmoid(Hx + Hs); a duration predictor expands
// the fused sequence to frame rate and a decoder stack projects it onto
// the output features.
template <class T>
class AcousticModel {
 public:
  ModelConfig cfg;
  Embedding<T> phoneme_embed, style_embed;
  std::vector<FftBlock<T>> encoder;        // phoneme stream
  std::vector<FftBlock<T>> style_encoder;  // empty when cfg.share_streams
  Conv1d<T> dp_conv1, dp_conv2, dp_proj;
  LayerNorm<T> dp_ln1, dp_ln2;
  std::vector<FftBlock<T>> decoder;
  Conv1d<T> out_proj;

  void build(const ModelConfig& config) {
    cfg = config;
    cfg.validate();
    Eigen::Index m = cfg.embed_dim;
    phoneme_embed.build("phoneme_embed", cfg.phoneme_vocab, m, 0);
    style_embed.build("style_embed", cfg.style_vocab, m, 0);
    encoder.resize(static_cast<size_t>(cfg.encoder_layers));
    for (int i = 0; i < cfg.encoder_layers; ++i) {
      encoder[static_cast<size_t>(i)].build(
          "encoder." + std::to_string(i), m, cfg.heads, cfg.hidden_dim,
          cfg.conv1_kernel, cfg.conv2_kernel);
    }
    if (!cfg.share_streams) {
      style_encoder.resize(static_cast<size_t>(cfg.encoder_layers));
      for (int i = 0; i < cfg.encoder_layers; ++i) {
        style_encoder[static_cast<size_t>(i)].build(
            "style_encoder." + std::to_string(i), m, cfg.heads,
            cfg.hidden_dim, cfg.conv1_kernel, cfg.conv2_kernel);
      }
    }
    dp_conv1.build_same("duration.conv1", m, m, cfg.duration_kernel);
    dp_ln1.build("duration.ln1", m);
    dp_conv2.build_same("duration.conv2", m, m, cfg.duration_kernel);
    dp_ln2.build("duration.ln2", m);
    dp_proj.build_same("duration.proj", m, 1, 1);
    decoder.resize(static_cast<size_t>(cfg.decoder_layers));
    for (int i = 0; i < cfg.decoder_layers; ++i) {
      decoder[static_cast<size_t>(i)].build(
          "decoder." + std::to_string(i), m, cfg.heads, cfg.hidden_dim,
          cfg.conv1_kernel, cfg.conv2_kernel);
    }
    out_proj.build_same("out_proj", m, cfg.feature_dim, 1);
  }

  void init(std::mt19937& rng) {
    T bound = T(1) / std::sqrt(static_cast<T>(cfg.embed_dim));
    phoneme_embed.init(rng, bound);
    style_embed.init(rng, bound);
    for (auto& b : encoder) b.init(rng, bound);
    for (auto& b : style_encoder) b.init(rng, bound);
    dp_conv1.init(rng);
    dp_conv2.init(rng);
    dp_proj.init(rng);
    for (auto& b : decoder) b.init(rng, bound);
    out_proj.init(rng);
  }

  // Stable registry: iteration order is fixed by construction and names are
  // unique, so checkpoints can match tensors by name.
  std::vector<Param<T>*> params() {
    std::vector<Param<T>*> out;
    phoneme_embed.collect(out);
    style_embed.collect(out);
    for (auto& b : encoder) b.collect(out);
    for (auto& b : style_encoder) b.collect(out);
    dp_conv1.collect(out);
    dp_ln1.collect(out);
    dp_conv2.collect(out);
    dp_ln2.collect(out);
    dp_proj.collect(out);
    for (auto& b : decoder) b.collect(out);
    out_proj.collect(out);
    return out;
  }

  long param_count() {
    long n = 0;
    for (Param<T>* p : params()) n += p->count();
    return n;
  }

  void zero_grad() {
    for (Param<T>* p : params()) p->zero_grad();
  }

  struct Caches {
    EmbeddingCache<T> pemb, semb;
    std::vector<FftBlockCache<T>> enc_p, enc_s, dec;
    Mat<T> fuse_tanh, fuse_sig;  // activations of Hx + Hs
    Conv1dCache<T> dpc1, dpc2, dpproj;
    LayerNormCache<T> dpln1, dpln2;
    DropoutCache<T> dpd1, dpd2;
    Mat<T> dp_relu1_in, dp_relu2_in;
    Mask token_mask;
    std::vector<int> frame_to_token;
    Conv1dCache<T> outc;
  };

  // Encode both streams and fuse. Fills caches when given.
  Sequence<T> encode(const std::vector<int>& phoneme_ids,
                     const std::vector<int>& style_ids, const RunState& rs,
                     Caches* c) const {
    if (phoneme_ids.size() != style_ids.size()) {
      throw ShapeMismatchError("phoneme/style id lengths differ");
    }
    if (phoneme_ids.empty()) throw EmptyInputError("empty id sequence");
    Sequence<T> px = phoneme_embed.forward(phoneme_ids, c ? &c->pemb : nullptr);
    Sequence<T> sx = style_embed.forward(style_ids, c ? &c->semb : nullptr);
    if (px.mask != sx.mask) {
      throw ShapeMismatchError("style padding must match phoneme padding");
    }
    add_positional_encoding(px);
    add_positional_encoding(sx);

    if (c) {
      c->enc_p.resize(encoder.size());
      c->enc_s.resize(encoder.size());
      c->token_mask = px.mask;
    }
    Mat<T> hx = px.data;
    for (size_t i = 0; i < encoder.size(); ++i) {
      hx = encoder[i].forward(hx, px.mask, rs, c ? &c->enc_p[i] : nullptr);
    }
    const auto& sstack = cfg.share_streams ? encoder : style_encoder;
    Mat<T> hs = sx.data;
    for (size_t i = 0; i < sstack.size(); ++i) {
      hs = sstack[i].forward(hs, px.mask, rs, c ? &c->enc_s[i] : nullptr);
    }

    Mat<T> s = hx + hs;
    Sequence<T> fused;
    fused.data = gated_fusion(s, c ? &c->fuse_tanh : nullptr,
                              c ? &c->fuse_sig : nullptr);
    fused.mask = px.mask;
    fused.zero_masked();
    return fused;
  }

  // Gradient of the fusion gate and both encoder stacks down to the
  // embedding tables.
  void encode_backward(Caches& c, const Mat<T>& dfused_in) {
    Mat<T> dfused = dfused_in;
    zero_masked_columns(dfused, c.token_mask);
    Mat<T> ds = gated_fusion_backward(dfused, c.fuse_tanh, c.fuse_sig);
    Mat<T> dhx = ds, dhs = ds;
    auto& sstack = cfg.share_streams ? encoder : style_encoder;
    for (size_t i = sstack.size(); i-- > 0;) {
      dhs = sstack[i].backward(c.enc_s[i], dhs);
    }
    for (size_t i = encoder.size(); i-- > 0;) {
      dhx = encoder[i].backward(c.enc_p[i], dhx);
    }
    // Positional encoding is an additive constant; gradient passes through.
    style_embed.backward(c.semb, dhs);
    phoneme_embed.backward(c.pemb, dhx);
  }

  Mat<T> predict_log_durations(const Mat<T>& fused, const Mask& mask,
                               const RunState& rs, Caches* c) const {
    Mat<T> h = dp_conv1.forward(fused, c ? &c->dpc1 : nullptr);
    if (c) c->dp_relu1_in = h;
    h = h.cwiseMax(T(0));
    h = dp_ln1.forward(h, mask, c ? &c->dpln1 : nullptr);
    h = dropout_forward(h, rs, c ? &c->dpd1 : nullptr);
    h = dp_conv2.forward(h, c ? &c->dpc2 : nullptr);
    if (c) c->dp_relu2_in = h;
    h = h.cwiseMax(T(0));
    h = dp_ln2.forward(h, mask, c ? &c->dpln2 : nullptr);
    h = dropout_forward(h, rs, c ? &c->dpd2 : nullptr);
    Mat<T> log_d = dp_proj.forward(h, c ? &c->dpproj : nullptr);
    zero_masked_columns(log_d, mask);
    return log_d;
  }

  // Returns the gradient w.r.t. the fused encoder output.
  Mat<T> predict_log_durations_backward(Caches& c, const Mat<T>& dlog_d_in) {
    Mat<T> dlog_d = dlog_d_in;
    zero_masked_columns(dlog_d, c.token_mask);
    Mat<T> dh = dp_proj.backward(c.dpproj, dlog_d);
    dh = dropout_backward(c.dpd2, dh);
    dh = dp_ln2.backward(c.dpln2, dh);
    dh = (c.dp_relu2_in.array() > T(0)).template cast<T>().matrix()
             .cwiseProduct(dh);
    dh = dp_conv2.backward(c.dpc2, dh);
    dh = dropout_backward(c.dpd1, dh);
    dh = dp_ln1.backward(c.dpln1, dh);
    dh = (c.dp_relu1_in.array() > T(0)).template cast<T>().matrix()
             .cwiseProduct(dh);
    return dp_conv1.backward(c.dpc1, dh);
  }

  Mat<T> decode(const Mat<T>& fused, const std::vector<int>& durations,
                const RunState& rs, Caches* c) const {
    std::vector<int> f2t;
    Mat<T> frames =
        length_regulate(fused, durations, c ? &c->frame_to_token : &f2t);
    if (frames.cols() == 0) {
      throw DurationMismatchError("no frames after length regulation");
    }
    Sequence<T> seq;
    seq.data = std::move(frames);
    seq.mask.assign(static_cast<size_t>(seq.data.cols()), 1);
    add_positional_encoding(seq);
    if (c) c->dec.resize(decoder.size());
    Mat<T> h = seq.data;
    for (size_t i = 0; i < decoder.size(); ++i) {
      h = decoder[i].forward(h, seq.mask, rs, c ? &c->dec[i] : nullptr);
    }
    return out_proj.forward(h, c ? &c->outc : nullptr);
  }

  // Returns the gradient w.r.t. the fused encoder output.
  Mat<T> decode_backward(Caches& c, const Mat<T>& dpred,
                         Eigen::Index num_tokens) {
    Mat<T> dh = out_proj.backward(c.outc, dpred);
    for (size_t i = decoder.size(); i-- > 0;) {
      dh = decoder[i].backward(c.dec[i], dh);
    }
    return length_regulate_backward(dh, c.frame_to_token, num_tokens);
  }

  // Teacher-forced training step for one utterance. Gradients (scaled by
  // `scale`) accumulate into the parameter .g buffers; the duration branch
  // is not detached, so both loss terms reach the encoders.
  StepLosses<T> forward_backward(const std::vector<int>& phoneme_ids,
                                 const std::vector<int>& style_ids,
                                 const std::vector<int>& durations,
                                 const Mat<T>& target, const RunState& rs,
                                 T scale, bool do_backward = true) {
    if (durations.size() != phoneme_ids.size()) {
      throw ShapeMismatchError("duration count vs token count");
    }
    Caches c;
    Sequence<T> fused = encode(phoneme_ids, style_ids, rs, &c);
    for (size_t j = 0; j < durations.size(); ++j) {
      bool masked = !c.token_mask[j];
      if (masked && durations[j] != 0) {
        throw DurationMismatchError("padded token with nonzero duration");
      }
      if (!masked && durations[j] <= 0) {
        throw DurationMismatchError("real token needs a positive duration");
      }
    }
    long total = std::accumulate(durations.begin(), durations.end(), 0L);
    if (target.rows() != cfg.feature_dim || target.cols() != total) {
      throw DurationMismatchError("target frame count does not match "
                                  "duration sum");
    }

    Mat<T> log_d = predict_log_durations(fused.data, fused.mask, rs, &c);
    Mat<T> dlog_d;
    StepLosses<T> losses;
    losses.duration =
        duration_loss(log_d, durations, fused.mask,
                      do_backward ? &dlog_d : nullptr);

    Mat<T> pred = decode(fused.data, durations, rs, &c);
    Mat<T> dpred;
    losses.tts = tts_loss(target, pred, do_backward ? &dpred : nullptr);
    losses.total = static_cast<T>(cfg.weight_tts) * losses.tts +
                   static_cast<T>(cfg.weight_duration) * losses.duration;

    if (do_backward) {
      dpred *= scale * static_cast<T>(cfg.weight_tts);
      Mat<T> dfused =
          decode_backward(c, dpred, static_cast<Eigen::Index>(
                                        phoneme_ids.size()));
      dlog_d *= scale * static_cast<T>(cfg.weight_duration);
      dfused += predict_log_durations_backward(c, dlog_d);
      encode_backward(c, dfused);
    }
    return losses;
  }

  StepLosses<T> losses(const std::vector<int>& phoneme_ids,
                       const std::vector<int>& style_ids,
                       const std::vector<int>& durations, const Mat<T>& target,
                       const RunState& rs) {
    return forward_backward(phoneme_ids, style_ids, durations, target, rs,
                            T(0), false);
  }

  // Inference: predict durations, expand, decode.
  SynthesisResult<T> synthesize(const std::vector<int>& phoneme_ids,
                                const std::vector<int>& style_ids) const {
    RunState rs;  // inference: no rng, no dropout
    Sequence<T> fused = encode(phoneme_ids, style_ids, rs, nullptr);
    SynthesisResult<T> out;
    out.log_durations =
        predict_log_durations(fused.data, fused.mask, rs, nullptr);
    out.durations = durations_from_log(out.log_durations, fused.mask);
    out.features = decode(fused.data, out.durations, rs, nullptr);
    return out;
  }

  // Inference with externally supplied (e.g. ground-truth) durations.
  SynthesisResult<T> synthesize_with_durations(
      const std::vector<int>& phoneme_ids, const std::vector<int>& style_ids,
      const std::vector<int>& durations) const {
    if (durations.size() != phoneme_ids.size()) {
      throw ShapeMismatchError("duration count vs token count");
    }
    RunState rs;
    Sequence<T> fused = encode(phoneme_ids, style_ids, rs, nullptr);
    SynthesisResult<T> out;
    out.log_durations =
        predict_log_durations(fused.data, fused.mask, rs, nullptr);
    out.durations = durations;
    out.features = decode(fused.data, durations, rs, nullptr);
    return out;
  }
};

}  // namespace lanstyle
