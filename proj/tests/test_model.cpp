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
#include <set>

#include "lanstyle/model/acoustic_model.h"

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

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.phoneme_vocab = 8;
  cfg.style_vocab = 5;
  cfg.embed_dim = 4;
  cfg.encoder_layers = 1;
  cfg.decoder_layers = 1;
  cfg.heads = 2;
  cfg.hidden_dim = 6;
  cfg.conv1_kernel = 3;
  cfg.conv2_kernel = 1;
  cfg.dropout = 0.0;
  cfg.feature_dim = 3;
  return cfg;
}

}  // namespace

TEST_CASE("gated fusion hits its fixed points") {
  Md s(1, 3);
  s << 0.0, 1.0, -1.0;
  Md th, sg;
  Md h = gated_fusion(s, &th, &sg);
  CHECK(h(0, 0) == 0.0);
  // tanh(1) * sigmoid(1) = 0.76159415... * 0.73105857... = 0.55677003...
  CHECK(h(0, 1) == doctest::Approx(0.5567700).epsilon(1e-6));
  CHECK(h(0, 2) == doctest::Approx(-std::tanh(1.0) / (1.0 + std::exp(1.0))));

  // Backward against central differences.
  std::mt19937 rng(5);
  Md x = random_mat(rng, 3, 4, -2.0, 2.0);
  Md w = random_mat(rng, 3, 4);
  Md t2, s2;
  gated_fusion(x, &t2, &s2);
  Md dx = gated_fusion_backward(w, t2, s2);
  const double eps = 1e-6;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      Md xp = x, xm = x;
      xp(i, j) += eps;
      xm(i, j) -= eps;
      double fd =
          (gated_fusion<double>(xp, nullptr, nullptr).cwiseProduct(w).sum() -
           gated_fusion<double>(xm, nullptr, nullptr).cwiseProduct(w).sum()) /
          (2 * eps);
      CHECK(fd == doctest::Approx(dx(i, j)).epsilon(1e-6));
    }
  }
}

TEST_CASE("duration loss golden values") {
  Mask m3(3, 1);
  Md dgrad;

  Md exact(1, 3);
  exact << 0.0, std::log(2.0), std::log(5.0);
  CHECK(duration_loss<double>(exact, {1, 2, 5}, m3, &dgrad) ==
        doctest::Approx(0.0).epsilon(1e-12));

  Md off_one(1, 1);
  off_one << 1.0;
  CHECK(duration_loss<double>(off_one, {1}, Mask{1}, &dgrad) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(dgrad(0, 0) == doctest::Approx(1.0));

  Md zero(1, 1);
  zero << 0.0;
  CHECK(duration_loss<double>(zero, {2}, Mask{1}, &dgrad) ==
        doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(dgrad(0, 0) == doctest::Approx(-1.0));

  // Masked tokens are excluded from the average.
  Md two(1, 2);
  two << 1.0, 57.0;
  CHECK(duration_loss<double>(two, {1, 0}, Mask{1, 0}, &dgrad) ==
        doctest::Approx(1.0));
  CHECK(dgrad(0, 1) == 0.0);

  CHECK_THROWS_AS(duration_loss<double>(two, {1, 0}, Mask{1, 1}, nullptr),
                  DurationMismatchError);
  CHECK_THROWS_AS(duration_loss<double>(two, {1}, Mask{1, 1}, nullptr),
                  ShapeMismatchError);
}

TEST_CASE("rounding is half-to-even and durations clamp at one frame") {
  CHECK(round_half_even(0.5) == 0);
  CHECK(round_half_even(1.5) == 2);
  CHECK(round_half_even(2.5) == 2);
  CHECK(round_half_even(3.5) == 4);
  CHECK(round_half_even(-0.5) == 0);
  CHECK(round_half_even(2.4) == 2);
  CHECK(round_half_even(2.6) == 3);

  Md log_d(1, 4);
  log_d << std::log(3.0), -5.0, std::log(1.2), 99.0;
  Mask mask = {1, 1, 1, 0};
  std::vector<int> d = durations_from_log(log_d, mask);
  CHECK(d == std::vector<int>({3, 1, 1, 0}));
}

TEST_CASE("length regulation repeats tokens and its backward is the adjoint") {
  Md tok(2, 3);
  tok << 1, 2, 3, 4, 5, 6;
  std::vector<int> f2t;
  Md frames = length_regulate(tok, {2, 1, 3}, &f2t);
  CHECK(frames.cols() == 6);
  CHECK(f2t == std::vector<int>({0, 0, 1, 2, 2, 2}));
  CHECK(frames.col(0) == tok.col(0));
  CHECK(frames.col(1) == tok.col(0));
  CHECK(frames.col(2) == tok.col(1));
  CHECK(frames.col(5) == tok.col(2));

  // Zero-duration tokens (pads) disappear.
  Md f2 = length_regulate(tok, {1, 0, 2}, nullptr);
  CHECK(f2.cols() == 3);
  CHECK(f2.col(1) == tok.col(2));

  CHECK_THROWS_AS(length_regulate(tok, {1, 2}, nullptr), ShapeMismatchError);
  CHECK_THROWS_AS(length_regulate(tok, {1, -1, 2}, nullptr),
                  DurationMismatchError);

  // <LR(x), y> == <x, LR^T(y)> for random x, y.
  std::mt19937 rng(9);
  Md x = random_mat(rng, 4, 5);
  std::vector<int> d = {1, 3, 2, 1, 2};
  Md y = random_mat(rng, 4, 9);
  std::vector<int> map;
  Md lrx = length_regulate(x, d, &map);
  Md lty = length_regulate_backward(y, map, 5);
  CHECK(lrx.cwiseProduct(y).sum() ==
        doctest::Approx(x.cwiseProduct(lty).sum()).epsilon(1e-12));
}

TEST_CASE("config validation catches bad geometry") {
  CHECK_THROWS_AS(
      [] {
        ModelConfig c = tiny_config();
        c.embed_dim = 5;
        c.validate();
      }(),
      ConfigError);
  CHECK_THROWS_AS(
      [] {
        ModelConfig c = tiny_config();
        c.heads = 3;
        c.validate();
      }(),
      ConfigError);
  CHECK_THROWS_AS(
      [] {
        ModelConfig c = tiny_config();
        c.dropout = 1.0;
        c.validate();
      }(),
      ConfigError);
  CHECK_NOTHROW(ModelConfig::desk().validate());
}

TEST_CASE("parameter registry has unique names and a checkable count") {
  AcousticModel<double> model;
  ModelConfig cfg = tiny_config();
  model.build(cfg);

  std::set<std::string> names;
  long count = 0;
  for (Param<double>* p : model.params()) {
    CHECK(names.insert(p->name).second);
    count += p->count();
  }

  auto block_params = [&](long m, long f, long k1, long k2) {
    long attn = 4 * (m * m + m);
    long lns = 2 * 2 * m;
    long convs = m * f * k1 + f + f * m * k2 + m;
    return attn + lns + convs;
  };
  long m = cfg.embed_dim, f = cfg.hidden_dim;
  long expect = cfg.phoneme_vocab * m + cfg.style_vocab * m;
  expect += (cfg.encoder_layers * 2 + cfg.decoder_layers) *
            block_params(m, f, cfg.conv1_kernel, cfg.conv2_kernel);
  expect += 2 * (m * m * cfg.duration_kernel + m) + 2 * 2 * m;  // dp convs+lns
  expect += m + 1;                                              // dp proj
  expect += m * cfg.feature_dim + cfg.feature_dim;              // out proj
  CHECK(model.param_count() == expect);
  CHECK(model.param_count() == count);

  // Shared-stream variant drops the style encoder stack.
  AcousticModel<double> shared;
  cfg.share_streams = true;
  shared.build(cfg);
  long block = block_params(m, f, cfg.conv1_kernel, cfg.conv2_kernel);
  CHECK(shared.param_count() ==
        expect - cfg.encoder_layers * block);
}

TEST_CASE("full model finite-difference gradient check") {
  AcousticModel<double> model;
  model.build(tiny_config());
  std::mt19937 rng(41);
  model.init(rng);

  std::vector<int> ids = {1, 3, 5, 1};
  std::vector<int> styles = {1, 2, 1, 1};
  std::vector<int> durations = {1, 2, 2, 1};
  Md target = random_mat(rng, 3, 6);
  RunState rs;

  model.zero_grad();
  StepLosses<double> l =
      model.forward_backward(ids, styles, durations, target, rs, 1.0);
  CHECK(l.total == doctest::Approx(l.tts + l.duration));
  CHECK(l.tts > 0.0);

  const double eps = 1e-5;
  int checked = 0;
  for (Param<double>* p : model.params()) {
    for (int s = 0; s < 4; ++s) {
      Eigen::Index i = static_cast<Eigen::Index>(rng() % p->v.rows());
      Eigen::Index j = static_cast<Eigen::Index>(rng() % p->v.cols());
      double orig = p->v(i, j);
      p->v(i, j) = orig + eps;
      double lp = model.losses(ids, styles, durations, target, rs).total;
      p->v(i, j) = orig - eps;
      double lm = model.losses(ids, styles, durations, target, rs).total;
      p->v(i, j) = orig;
      double fd = (lp - lm) / (2 * eps);
      double an = p->g(i, j);
      double denom = std::max({std::abs(fd), std::abs(an), 1e-6});
      CAPTURE(p->name);
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::abs(fd - an) / denom < 1e-4);
      ++checked;
    }
  }
  CHECK(checked >= 4 * 30);
}

TEST_CASE("training-step validation rejects inconsistent durations") {
  AcousticModel<double> model;
  model.build(tiny_config());
  std::mt19937 rng(43);
  model.init(rng);
  RunState rs;
  Md target = random_mat(rng, 3, 4);

  // Pad token with nonzero duration.
  CHECK_THROWS_AS(
      model.forward_backward({1, 2, 0}, {1, 1, 0}, {2, 1, 1}, target, rs, 1.0),
      DurationMismatchError);
  // Real token with zero duration.
  CHECK_THROWS_AS(
      model.forward_backward({1, 2, 3}, {1, 1, 1}, {2, 0, 2}, target, rs, 1.0),
      DurationMismatchError);
  // Target frames do not match the duration sum.
  CHECK_THROWS_AS(
      model.forward_backward({1, 2, 3}, {1, 1, 1}, {2, 1, 2}, target, rs, 1.0),
      DurationMismatchError);
  // Style ids must pad exactly where phonemes pad.
  CHECK_THROWS_AS(
      model.forward_backward({1, 2, 0}, {1, 1, 1}, {2, 2, 0}, target, rs, 1.0),
      ShapeMismatchError);
  CHECK_THROWS_AS(model.synthesize({}, {}), EmptyInputError);
}

TEST_CASE("padding the input does not change synthesized frames") {
  AcousticModel<double> model;
  model.build(tiny_config());
  std::mt19937 rng(47);
  model.init(rng);

  std::vector<int> ids = {1, 4, 6, 2, 1};
  std::vector<int> styles = {1, 2, 1, 3, 1};
  SynthesisResult<double> a = model.synthesize(ids, styles);

  std::vector<int> idsp = ids, stylesp = styles;
  for (int k = 0; k < 3; ++k) {
    idsp.push_back(0);
    stylesp.push_back(0);
  }
  SynthesisResult<double> b = model.synthesize(idsp, stylesp);

  REQUIRE(a.features.cols() == b.features.cols());
  CHECK((a.features - b.features).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(b.durations.size() == idsp.size());
  for (size_t j = ids.size(); j < idsp.size(); ++j) {
    CHECK(b.durations[j] == 0);
  }
  for (size_t j = 0; j < ids.size(); ++j) {
    CHECK(a.durations[j] == b.durations[j]);
    CHECK(a.durations[j] >= 1);
  }
}

TEST_CASE("shared-stream model runs forward and backward") {
  ModelConfig cfg = tiny_config();
  cfg.share_streams = true;
  AcousticModel<double> model;
  model.build(cfg);
  std::mt19937 rng(53);
  model.init(rng);
  RunState rs;

  Md target = random_mat(rng, 3, 5);
  model.zero_grad();
  StepLosses<double> l = model.forward_backward({1, 3, 5}, {1, 2, 1},
                                                {1, 2, 2}, target, rs, 1.0);
  CHECK(std::isfinite(l.total));
  // Both streams feed the same encoder stack, so its gradient is live.
  double gnorm = 0;
  for (Param<double>* p : model.params()) gnorm += p->g.squaredNorm();
  CHECK(gnorm > 0.0);
}
