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
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lanstyle/audio/wav.h"
#include "lanstyle/train/export.h"
#include "lanstyle/train/oracle.h"
#include "lanstyle/train/trainer.h"

using namespace lanstyle;

namespace {

const Tokenizer& ipa_tokenizer() {
  static Tokenizer t = Tokenizer::load(LANSTYLE_DATA_DIR, Scheme::ipa);
  return t;
}

std::filesystem::path fresh_dir(const std::string& tag) {
  std::filesystem::path p =
      std::filesystem::temp_directory_path() / ("lanstyle_" + tag);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TrainExample small_example(std::mt19937& rng, const std::string& id,
                           std::vector<int> phonemes, std::vector<int> styles,
                           std::vector<int> durations, int feature_dim) {
  TrainExample ex;
  ex.id = id;
  ex.phoneme_ids = std::move(phonemes);
  ex.style_ids = std::move(styles);
  ex.durations = std::move(durations);
  long frames = 0;
  for (int d : ex.durations) frames += d;
  ex.features.resize(feature_dim, frames);
  for (Eigen::Index j = 0; j < ex.features.cols(); ++j) {
    for (Eigen::Index i = 0; i < ex.features.rows(); ++i) {
      ex.features(i, j) = uniform_draw<float>(rng, -1.0f, 1.0f);
    }
  }
  return ex;
}

// Tokenized toy utterances with log-mel targets, ready for the Trainer.
std::vector<TrainExample> toy_examples(int n, uint32_t seed,
                                       const MelConfig& mel) {
  std::vector<ToyUtterance> utts =
      make_toy_utterances(n, seed, ipa_tokenizer(), mel);
  std::vector<TrainExample> out;
  for (const ToyUtterance& u : utts) {
    TrainExample ex;
    ex.id = u.id;
    ex.phoneme_ids = u.tokens.phoneme_ids;
    ex.style_ids = u.tokens.style_ids;
    ex.durations = u.durations;
    ex.features = extract_mel(u.audio, mel);
    out.push_back(std::move(ex));
  }
  return out;
}

ModelConfig tiny_model_config(const Tokenizer& t) {
  ModelConfig mc;
  mc.phoneme_vocab = static_cast<int>(t.inventory().size());
  mc.style_vocab = static_cast<int>(t.styles().size());
  mc.embed_dim = 16;
  mc.encoder_layers = 1;
  mc.decoder_layers = 1;
  mc.heads = 2;
  mc.hidden_dim = 32;
  mc.feature_dim = 80;
  mc.dropout = 0.1;  // exercises the seeded dropout stream
  return mc;
}

bool same_history(const std::vector<LossRow>& a, const std::vector<LossRow>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].step != b[i].step || a[i].total != b[i].total ||
        a[i].tts != b[i].tts || a[i].duration != b[i].duration ||
        a[i].lr != b[i].lr) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("inverse-sqrt warmup schedule matches its closed form") {
  // step 1 sits on the warmup branch: base * 1 * 4000^{-3/2}.
  CHECK(lr_schedule(1, 1.0, 4000) ==
        doctest::Approx(3.9528470752104741e-06).epsilon(1e-12));
  CHECK(lr_schedule(2000, 1.0, 4000) ==
        doctest::Approx(2000.0 / (4000.0 * std::sqrt(4000.0))).epsilon(1e-12));
  // Both branches meet at step == warmup.
  CHECK(lr_schedule(4000, 1.0, 4000) ==
        doctest::Approx(1.0 / std::sqrt(4000.0)).epsilon(1e-12));
  CHECK(lr_schedule(16000, 1.0, 4000) ==
        doctest::Approx(1.0 / std::sqrt(16000.0)).epsilon(1e-12));
  CHECK(lr_schedule(500, 2.5, 4000) ==
        doctest::Approx(2.5 * lr_schedule(500, 1.0, 4000)).epsilon(1e-12));
  // Rises to the crossover, decays after it.
  for (long s : {1L, 100L, 2000L, 3999L}) {
    CHECK(lr_schedule(s, 1.0, 4000) < lr_schedule(s + 1, 1.0, 4000));
  }
  for (long s : {4000L, 5000L, 20000L}) {
    CHECK(lr_schedule(s, 1.0, 4000) > lr_schedule(s + 1, 1.0, 4000));
  }
  CHECK_THROWS_AS(lr_schedule(0, 1.0, 4000), ConfigError);
  CHECK_THROWS_AS(lr_schedule(1, 1.0, 0), ConfigError);
}

TEST_CASE("adam first update moves by lr in the gradient's sign") {
  Param<float> p;
  p.name = "w";
  p.resize(2, 2);
  p.v.setConstant(0.5f);
  p.g.setZero();
  p.g(0, 0) = 3.0f;
  p.g(1, 1) = -0.25f;

  Adam<float> opt;
  opt.attach({&p});
  const double lr = 0.01;
  opt.step({&p}, lr);

  // With bias correction the first step is lr * g / (|g| + eps) ~= lr*sign(g).
  CHECK(p.v(0, 0) == doctest::Approx(0.5 - lr).epsilon(1e-5));
  CHECK(p.v(1, 1) == doctest::Approx(0.5 + lr).epsilon(1e-5));
  CHECK(p.v(0, 1) == 0.5f);  // zero gradient leaves the entry alone
  CHECK(opt.t() == 1);

  // Attaching resets the step counter and the moments.
  opt.attach({&p});
  CHECK(opt.t() == 0);
  opt.set_t(7);
  CHECK(opt.t() == 7);
}

TEST_CASE("manifest records round-trip through jsonl") {
  std::filesystem::path dir = fresh_dir("manifest_rt");
  std::string path = (dir / "manifest.jsonl").string();

  std::vector<UtteranceRecord> recs(2);
  recs[0].id = "utt_000";
  recs[0].language = Language::zh;
  recs[0].text = "ma2 ma4";
  recs[0].audio_path = "wavs/utt_000.wav";
  recs[0].durations = {4, 8, 8, 4, 8, 8, 4};
  recs[0].has_durations = true;
  recs[1].id = "utt_001";
  recs[1].language = Language::en;
  recs[1].text = "see two";
  recs[1].audio_path = "/abs/utt_001.wav";

  write_manifest(path, recs);
  std::vector<UtteranceRecord> back = read_manifest(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == recs[0].id);
  CHECK(back[0].language == Language::zh);
  CHECK(back[0].text == recs[0].text);
  CHECK(back[0].audio_path == recs[0].audio_path);
  CHECK(back[0].durations == recs[0].durations);
  CHECK(back[0].has_durations);
  CHECK(back[1].id == recs[1].id);
  CHECK(back[1].language == Language::en);
  CHECK_FALSE(back[1].has_durations);

  CHECK(resolve_audio_path(path, "wavs/utt_000.wav") ==
        (dir / "wavs/utt_000.wav").string());
  CHECK(resolve_audio_path(path, "/abs/utt_001.wav") == "/abs/utt_001.wav");

  std::filesystem::remove_all(dir);
}

TEST_CASE("manifest rejects malformed lines") {
  std::filesystem::path dir = fresh_dir("manifest_bad");
  auto write_lines = [&](const std::string& body) {
    std::ofstream out(dir / "m.jsonl", std::ios::trunc);
    out << body;
  };
  std::string m = (dir / "m.jsonl").string();

  write_lines("this is not json\n");
  CHECK_THROWS_AS(read_manifest(m), IoError);

  write_lines(R"({"id":"a","language":"fr","text":"x","audio_path":"a.wav"})"
              "\n");
  CHECK_THROWS_AS(read_manifest(m), InputError);

  write_lines(
      R"({"id":"a","language":"en","text":"x","audio_path":"a.wav","durations":[4,-1]})"
      "\n");
  CHECK_THROWS_AS(read_manifest(m), InputError);

  CHECK_THROWS_AS(read_manifest((dir / "missing.jsonl").string()), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("tone contours and stress scaling follow the style rules") {
  const StyleInventory& st = ipa_tokenizer().styles();
  ToyConfig toy;
  const double span = toy.tone_span_semitones;
  const int d = 8;

  int t1 = st.tone_id(1), t2 = st.tone_id(2), t3 = st.tone_id(3);
  int t4 = st.tone_id(4), t5 = st.tone_id(5);
  for (int k = 0; k < d; ++k) {
    CHECK(toy_contour_semitones(st, t1, k, d, toy) == 0.0);
    CHECK(toy_contour_semitones(st, t5, k, d, toy) == -span / 2.0);
  }
  CHECK(toy_contour_semitones(st, t2, 0, d, toy) == 0.0);
  CHECK(toy_contour_semitones(st, t2, d - 1, d, toy) == doctest::Approx(span));
  CHECK(toy_contour_semitones(st, t4, d - 1, d, toy) == doctest::Approx(-span));
  for (int k = 0; k + 1 < d; ++k) {
    CHECK(toy_contour_semitones(st, t2, k, d, toy) <
          toy_contour_semitones(st, t2, k + 1, d, toy));
    CHECK(toy_contour_semitones(st, t4, k, d, toy) >
          toy_contour_semitones(st, t4, k + 1, d, toy));
  }
  // Tone 3 dips to -span mid-token and returns to the endpoints.
  CHECK(toy_contour_semitones(st, t3, 0, d, toy) == doctest::Approx(0.0));
  double mid = toy_contour_semitones(st, t3, (d - 1) / 2, d, toy);
  CHECK(mid < -0.9 * span);
  CHECK(toy_contour_semitones(st, t3, d - 1, d, toy) ==
        doctest::Approx(0.0).epsilon(1e-9));
  // Non-tone styles are flat.
  CHECK(toy_contour_semitones(st, st.none_id(), 3, d, toy) == 0.0);
  CHECK(toy_contour_semitones(st, st.stress_id(2), 3, d, toy) == 0.0);

  CHECK(toy_amplitude_scale(st, st.stress_id(0)) == doctest::Approx(0.6));
  CHECK(toy_amplitude_scale(st, st.stress_id(1)) == doctest::Approx(1.0));
  CHECK(toy_amplitude_scale(st, st.stress_id(2)) == doctest::Approx(1.3));
  CHECK(toy_amplitude_scale(st, st.none_id()) == doctest::Approx(1.0));
  CHECK(toy_amplitude_scale(st, t4) == doctest::Approx(1.0));

  CHECK(toy_frequency(0) == doctest::Approx(220.0));
  CHECK(toy_frequency(24) == doctest::Approx(440.0));
}

TEST_CASE("toy corpus aligns audio, durations, and mel frames") {
  const Tokenizer& t = ipa_tokenizer();
  MelConfig mel;
  std::vector<ToyUtterance> utts = make_toy_utterances(4, 7, t, mel);
  REQUIRE(utts.size() == 4);

  for (const ToyUtterance& u : utts) {
    REQUIRE(u.durations.size() == u.tokens.phoneme_ids.size());
    long frames = 0;
    for (int d : u.durations) frames += d;
    CHECK(static_cast<long>(u.audio.size()) ==
          frames * mel.hop + (mel.n_fft - mel.hop));
    Mat<float> m = extract_mel(u.audio, mel);
    CHECK(m.rows() == mel.n_mels);
    CHECK(m.cols() == frames);

    // The rendered audio must transcribe back through the DFT peak picker.
    OracleReport rep = oracle_check(u.audio, u.tokens, u.durations,
                                    t.inventory(), t.styles(), mel, ToyConfig{});
    CHECK(rep.recovery_rate() >= 0.99);
    CHECK(rep.silence_violations == 0);
  }

  // The guaranteed minimal pair: rising tone 2 vs falling tone 4.
  double s2 = oracle_pitch_slope(utts[0].audio, utts[0].tokens,
                                 utts[0].durations, t.inventory(), mel);
  double s4 = oracle_pitch_slope(utts[1].audio, utts[1].tokens,
                                 utts[1].durations, t.inventory(), mel);
  CHECK(s2 > 0.005);
  CHECK(s4 < -0.005);
}

TEST_CASE("generated corpus feeds prepare_examples end to end") {
  const Tokenizer& t = ipa_tokenizer();
  MelConfig mel;
  std::filesystem::path dir = fresh_dir("toy_corpus");
  std::vector<UtteranceRecord> recs =
      generate_toy_corpus(3, 11, dir.string(), t, mel);
  REQUIRE(recs.size() == 3);

  std::string manifest = (dir / "manifest.jsonl").string();
  std::vector<UtteranceRecord> back = read_manifest(manifest);
  REQUIRE(back.size() == recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].id == recs[i].id);
    CHECK(back[i].text == recs[i].text);
    CHECK(back[i].durations == recs[i].durations);
    REQUIRE(back[i].has_durations);
  }

  std::vector<TrainExample> exs =
      prepare_examples(back, manifest, t, mel, nullptr);
  REQUIRE(exs.size() == back.size());
  for (size_t i = 0; i < exs.size(); ++i) {
    long frames = 0;
    for (int d : exs[i].durations) frames += d;
    CHECK(exs[i].features.rows() == mel.n_mels);
    CHECK(exs[i].features.cols() == frames);
  }

  // Error paths: durations stripped, then a dangling audio path.
  std::vector<UtteranceRecord> broken = back;
  broken[0].has_durations = false;
  broken[0].durations.clear();
  CHECK_THROWS_AS(prepare_examples(broken, manifest, t, mel, nullptr),
                  MissingFeatureError);
  broken = back;
  broken[1].audio_path = "wavs/nope.wav";
  CHECK_THROWS_AS(prepare_examples(broken, manifest, t, mel, nullptr),
                  MissingFeatureError);
  // Sample-rate disagreement is refused rather than resampled.
  Wav w = read_wav(resolve_audio_path(manifest, back[2].audio_path));
  write_wav((dir / "slow.wav").string(), w.samples, 8000);
  broken = back;
  broken[2].audio_path = "slow.wav";
  CHECK_THROWS_AS(prepare_examples(broken, manifest, t, mel, nullptr),
                  InputError);

  std::filesystem::remove_all(dir);
}

TEST_CASE("batches pad, mask, and validate their items") {
  std::mt19937 rng(3);
  std::vector<TrainExample> exs;
  exs.push_back(small_example(rng, "a", {2, 3, 4}, {1, 1, 1}, {2, 2, 1}, 4));
  exs.push_back(small_example(rng, "b", {5, 6}, {1, 2}, {2, 1}, 4));

  Batch b = make_batch(exs, {0, 1});
  REQUIRE(b.size() == 2);
  CHECK(b.max_tokens == 3);
  CHECK(b.max_frames == 5);
  CHECK(b.phoneme_ids[1] == std::vector<int>{5, 6, 0});
  CHECK(b.style_ids[1] == std::vector<int>{1, 2, 0});
  CHECK(b.durations[1] == std::vector<int>{2, 1, 0});
  REQUIRE(b.token_masks[1].size() == 3);
  CHECK(b.token_masks[1][0] == 1);
  CHECK(b.token_masks[1][1] == 1);
  CHECK(b.token_masks[1][2] == 0);
  CHECK(b.frames == std::vector<long>{5, 3});
  CHECK(b.features[0] == exs[0].features);
  CHECK(b.features[1].leftCols(3) == exs[1].features);
  CHECK(b.features[1].rightCols(2).isZero(0.0f));

  // A single full-width item needs no padding.
  Batch solo = make_batch(exs, {0});
  CHECK(solo.max_tokens == 3);
  CHECK(solo.token_masks[0] == Mask(3, 1));

  CHECK_THROWS_AS(make_batch(exs, {}), EmptyInputError);
  CHECK_THROWS_AS(make_batch(exs, {7}), IdOutOfRangeError);

  std::vector<TrainExample> bad = exs;
  bad[0].features.resize(4, 0);
  CHECK_THROWS_AS(make_batch(bad, {0}), MissingFeatureError);
  bad = exs;
  bad[1].durations = {2, 2};  // sum no longer matches the frames
  CHECK_THROWS_AS(make_batch(bad, {1}), DurationMismatchError);
  bad = exs;
  bad[1] = small_example(rng, "c", {5, 6}, {1, 2}, {2, 1}, 3);
  CHECK_THROWS_AS(make_batch(bad, {0, 1}), ShapeMismatchError);
}

TEST_CASE("checkpoints round-trip tensors bit-exactly") {
  std::filesystem::path dir = fresh_dir("ckpt_rt");
  std::string path = (dir / "ck.lsck").string();

  Checkpoint ck;
  ck.step = 123;
  ck.config_json = "{\"note\":\"payload\"}";
  Mat<float> a(3, 2);
  a << 0.1f, -1e-30f, -0.0f, 3.25f, 1e30f, -7.5f;
  Mat<float> b(1, 4);
  b << 1.0f, 2.0f, 3.0f, 4.0f;
  ck.tensors.emplace_back("layer.w", a);
  ck.tensors.emplace_back("layer.b", b);

  save_checkpoint(path, ck);
  Checkpoint back = load_checkpoint(path);
  CHECK(back.step == 123);
  CHECK(back.config_json == ck.config_json);
  REQUIRE(back.tensors.size() == 2);
  CHECK(back.tensors[0].first == "layer.w");
  REQUIRE(back.tensors[0].second.rows() == 3);
  REQUIRE(back.tensors[0].second.cols() == 2);
  CHECK(std::memcmp(back.tensors[0].second.data(), a.data(),
                    sizeof(float) * 6) == 0);
  CHECK(back.tensors[1].second == b);
  CHECK(back.find("layer.b") != nullptr);
  CHECK(back.find("layer.zz") == nullptr);

  CHECK_THROWS_AS(load_checkpoint((dir / "missing.lsck").string()), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("model and mel configs survive the json blob") {
  ModelConfig mc;
  mc.phoneme_vocab = 50;
  mc.style_vocab = 9;
  mc.embed_dim = 24;
  mc.encoder_layers = 3;
  mc.decoder_layers = 2;
  mc.heads = 3;
  mc.hidden_dim = 48;
  mc.dropout = 0.05;
  mc.share_streams = true;
  mc.feature_dim = 12;
  mc.feature_kind = FeatureKind::latent;
  mc.weight_tts = 0.7;
  mc.weight_duration = 1.3;

  MelConfig mel;
  mel.sample_rate = 8000;
  mel.n_fft = 512;
  mel.hop = 128;
  mel.win = 512;
  mel.n_mels = 40;
  mel.fmax = 4000.0;
  mel.log_floor = 1e-4;

  std::string json = configs_to_json(mc, mel);
  ModelConfig mc2;
  MelConfig mel2;
  configs_from_json(json, &mc2, &mel2);
  CHECK(mc2.phoneme_vocab == mc.phoneme_vocab);
  CHECK(mc2.style_vocab == mc.style_vocab);
  CHECK(mc2.embed_dim == mc.embed_dim);
  CHECK(mc2.encoder_layers == mc.encoder_layers);
  CHECK(mc2.decoder_layers == mc.decoder_layers);
  CHECK(mc2.heads == mc.heads);
  CHECK(mc2.hidden_dim == mc.hidden_dim);
  CHECK(mc2.dropout == mc.dropout);
  CHECK(mc2.share_streams == mc.share_streams);
  CHECK(mc2.feature_dim == mc.feature_dim);
  CHECK(mc2.feature_kind == FeatureKind::latent);
  CHECK(mc2.weight_tts == mc.weight_tts);
  CHECK(mc2.weight_duration == mc.weight_duration);
  CHECK(mel2.sample_rate == mel.sample_rate);
  CHECK(mel2.n_fft == mel.n_fft);
  CHECK(mel2.hop == mel.hop);
  CHECK(mel2.win == mel.win);
  CHECK(mel2.n_mels == mel.n_mels);
  CHECK(mel2.fmax == mel.fmax);
  CHECK(mel2.log_floor == mel.log_floor);
}

TEST_CASE("embedding export writes one labeled row per symbol") {
  const PhonemeInventory& inv = ipa_tokenizer().inventory();
  std::filesystem::path dir = fresh_dir("embed_csv");
  std::string path = (dir / "emb.csv").string();

  std::mt19937 rng(5);
  Mat<float> table(static_cast<Eigen::Index>(inv.size()), 5);
  for (Eigen::Index j = 0; j < table.cols(); ++j) {
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
      table(i, j) = uniform_draw<float>(rng, -2.0f, 2.0f);
    }
  }
  export_embeddings(table, inv, path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "symbol,language_tag,e0,e1,e2,e3,e4");
  size_t rows = 0;
  while (std::getline(in, line)) {
    size_t c1 = line.find(',');
    size_t c2 = line.find(',', c1 + 1);
    REQUIRE(c2 != std::string::npos);
    CHECK(line.substr(0, c1) == inv.symbol_of(static_cast<int>(rows)));
    CHECK(line.substr(c1 + 1, c2 - c1 - 1) ==
          to_string(inv.tag_of(static_cast<int>(rows))));
    // %.9g must reproduce the float32 entries exactly.
    const char* s = line.c_str() + c2;
    for (Eigen::Index j = 0; j < table.cols(); ++j) {
      REQUIRE(*s == ',');
      char* end = nullptr;
      float v = std::strtof(s + 1, &end);
      CHECK(v == table(static_cast<Eigen::Index>(rows), j));
      s = end;
    }
    ++rows;
  }
  CHECK(rows == inv.size());

  Mat<float> short_table(3, 5);
  short_table.setZero();
  CHECK_THROWS_AS(export_embeddings(short_table, inv, path),
                  ShapeMismatchError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("loss csv has a fixed header and one row per step") {
  std::filesystem::path dir = fresh_dir("loss_csv");
  std::string path = (dir / "loss.csv").string();
  std::vector<LossRow> rows = {{1, 39.5, 38.25, 1.25, 3.9528471e-06},
                               {2, 20.0, 19.0, 1.0, 7.9056942e-06}};
  write_loss_csv(path, rows);
  std::string text = slurp(path);
  CHECK(text.rfind("step,loss_total,loss_tts,loss_d,lr\n", 0) == 0);
  CHECK(text.find("\n1,39.5,38.25,1.25,") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("seeded training runs are bit-identical") {
  const Tokenizer& t = ipa_tokenizer();
  MelConfig mel;
  std::vector<TrainExample> exs = toy_examples(3, 5, mel);
  ModelConfig mc = tiny_model_config(t);

  TrainConfig tc;
  tc.batch_size = 2;
  tc.max_steps = 24;
  tc.seed = 9;

  auto run_once = [&](uint32_t seed) {
    AcousticModel<float> model;
    model.build(mc);
    TrainConfig c = tc;
    c.seed = seed;
    Trainer tr(model, mel, exs, c);
    tr.init();
    for (long s = 0; s < c.max_steps; ++s) tr.step();
    return tr.history();
  };

  std::vector<LossRow> h1 = run_once(9);
  std::vector<LossRow> h2 = run_once(9);
  REQUIRE(h1.size() == 24);
  CHECK(same_history(h1, h2));
  CHECK(h1[0].lr == lr_schedule(1, tc.base_lr, tc.warmup_steps));
  for (const LossRow& r : h1) CHECK(std::isfinite(r.total));

  std::vector<LossRow> h3 = run_once(10);
  CHECK(h3[0].total != h1[0].total);
}

TEST_CASE("restore resumes a run bit-exactly") {
  const Tokenizer& t = ipa_tokenizer();
  MelConfig mel;
  std::vector<TrainExample> exs = toy_examples(3, 5, mel);
  ModelConfig mc = tiny_model_config(t);

  TrainConfig tc;
  tc.batch_size = 2;
  tc.max_steps = 20;
  tc.seed = 4;

  AcousticModel<float> base;
  base.build(mc);
  Trainer full(base, mel, exs, tc);
  full.init();
  for (int s = 0; s < 20; ++s) full.step();

  AcousticModel<float> first;
  first.build(mc);
  Trainer head(first, mel, exs, tc);
  head.init();
  for (int s = 0; s < 8; ++s) head.step();
  Checkpoint ck = head.snapshot();
  CHECK(ck.step == 8);
  CHECK(ck.find("adam.m." + first.params()[0]->name) != nullptr);

  AcousticModel<float> second;
  second.build(mc);
  Trainer tail(second, mel, exs, tc);
  tail.restore(ck);
  CHECK(tail.current_step() == 8);
  for (int s = 8; s < 20; ++s) tail.step();

  REQUIRE(tail.history().size() == 12);
  for (size_t i = 0; i < tail.history().size(); ++i) {
    const LossRow& a = full.history()[8 + i];
    const LossRow& b = tail.history()[i];
    CHECK(a.step == b.step);
    CHECK(a.total == b.total);
    CHECK(a.tts == b.tts);
    CHECK(a.duration == b.duration);
    CHECK(a.lr == b.lr);
  }

  // Restoring into a differently shaped model is refused.
  ModelConfig other = mc;
  other.embed_dim = 32;
  AcousticModel<float> wrong;
  wrong.build(other);
  Trainer bad(wrong, mel, exs, tc);
  CHECK_THROWS_AS(bad.restore(ck), ModelError);
}

TEST_CASE("run writes periodic checkpoints and the loss log") {
  const Tokenizer& t = ipa_tokenizer();
  MelConfig mel;
  std::vector<TrainExample> exs = toy_examples(2, 3, mel);
  ModelConfig mc = tiny_model_config(t);

  TrainConfig tc;
  tc.batch_size = 2;
  tc.max_steps = 12;
  tc.seed = 2;
  tc.checkpoint_every = 5;

  AcousticModel<float> model;
  model.build(mc);
  Trainer tr(model, mel, exs, tc);
  tr.init();
  std::filesystem::path dir = fresh_dir("train_run");
  tr.run(dir.string());

  CHECK(std::filesystem::exists(dir / "ckpt-5.lsck"));
  CHECK(std::filesystem::exists(dir / "ckpt-10.lsck"));
  CHECK(std::filesystem::exists(dir / "ckpt-final.lsck"));
  std::string csv = slurp(dir / "loss.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);

  Checkpoint fin = load_checkpoint((dir / "ckpt-final.lsck").string());
  CHECK(fin.step == 12);
  ModelConfig mc2;
  MelConfig mel2;
  configs_from_json(fin.config_json, &mc2, &mel2);
  CHECK(mc2.embed_dim == mc.embed_dim);
  CHECK(mel2.n_mels == mel.n_mels);
  std::filesystem::remove_all(dir);
}
