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

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lanstyle/audio/autoencoder.h"
#include "lanstyle/audio/feature.h"
#include "lanstyle/audio/griffin_lim.h"
#include "lanstyle/audio/wav.h"
#include "lanstyle/model/acoustic_model.h"
#include "lanstyle/text/tokenizer.h"
#include "lanstyle/train/checkpoint.h"
#include "lanstyle/train/export.h"
#include "lanstyle/train/toy_corpus.h"
#include "lanstyle/train/trainer.h"

namespace {

using namespace lanstyle;

Language parse_lang(const std::string& s) {
  if (s == "en") return Language::en;
  if (s == "zh") return Language::zh;
  throw InputError("UnknownLanguage", s);
}

Scheme parse_scheme(const std::string& s) {
  if (s == "alphabet") return Scheme::alphabet;
  if (s == "ipa") return Scheme::ipa;
  throw InputError("UnknownScheme", s);
}

void add_mel_flags(CLI::App* sub, MelConfig& mel) {
  sub->add_option("--sample-rate", mel.sample_rate, "audio sample rate (Hz)")
      ->capture_default_str();
  sub->add_option("--n-fft", mel.n_fft, "FFT size")->capture_default_str();
  sub->add_option("--hop", mel.hop, "hop length (samples)")
      ->capture_default_str();
  sub->add_option("--win", mel.win, "window length (samples)")
      ->capture_default_str();
  sub->add_option("--n-mels", mel.n_mels, "mel filterbank size")
      ->capture_default_str();
  sub->add_option("--fmin", mel.fmin, "lowest filterbank frequency (Hz)")
      ->capture_default_str();
  sub->add_option("--fmax", mel.fmax, "highest filterbank frequency (Hz)")
      ->capture_default_str();
}

// Builds the acoustic model stored in a checkpoint, ignoring optimizer
// tensors. Mel settings are recovered alongside when requested.
AcousticModel<float> model_from_checkpoint(const Checkpoint& ck,
                                           MelConfig* mel) {
  ModelConfig mc;
  configs_from_json(ck.config_json, &mc, mel);
  AcousticModel<float> model;
  model.build(mc);
  for (Param<float>* p : model.params()) {
    const Mat<float>* v = ck.find(p->name);
    if (!v) throw KindMismatchError("checkpoint lacks tensor " + p->name);
    if (v->rows() != p->v.rows() || v->cols() != p->v.cols()) {
      throw ShapeMismatchError("checkpoint tensor shape differs: " + p->name);
    }
    p->v = *v;
  }
  return model;
}

double median_ms(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n == 0 ? 0.0 : (n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]));
}

// Latent features become waveform samples through the autoencoder decoder;
// mel features go through filterbank inversion plus Griffin-Lim.
std::vector<float> features_to_audio(const Mat<float>& features,
                                     FeatureKind kind, const MelConfig& mel,
                                     const Autoencoder<float>* ae,
                                     int gl_iters) {
  if (kind == FeatureKind::mel) {
    return mel_to_audio(features, mel, gl_iters);
  }
  if (!ae) {
    throw KindMismatchError(
        "latent checkpoint needs --ae with the matching autoencoder");
  }
  if (ae->cfg.latent_dim != features.rows()) {
    throw ShapeMismatchError("autoencoder latent width " +
                             std::to_string(ae->cfg.latent_dim) +
                             " != feature rows " +
                             std::to_string(features.rows()));
  }
  LatentFeature lf;
  lf.z = features;
  lf.original_frames = features.cols() * ae->cfg.reduction();
  Mat<float> wave = ae_decode(*ae, lf);
  std::vector<float> audio(static_cast<size_t>(wave.cols()));
  for (long i = 0; i < wave.cols(); ++i) {
    audio[static_cast<size_t>(i)] = wave(0, i);
  }
  return audio;
}

int run(int argc, char** argv) {
  CLI::App app{"lanstyle: multilingual phoneme-level TTS pipeline"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file ([subcommand] sections); "
                 "command-line flags take precedence");

  // ---------------------------------------------------------------- tokenize
  auto* c_tok = app.add_subcommand("tokenize",
                                   "convert text to phoneme and style rows");
  struct {
    std::string text, lang, scheme = "ipa", data = "data";
    bool json = false;
  } tok;
  c_tok->add_option("text", tok.text, "input text")->required();
  c_tok->add_option("--lang", tok.lang, "language: en or zh")->required();
  c_tok->add_option("--scheme", tok.scheme, "alphabet or ipa")
      ->capture_default_str();
  c_tok->add_flag("--json", tok.json, "emit JSON instead of two text rows");
  c_tok->add_option("--data", tok.data, "data directory")
      ->capture_default_str();
  c_tok->callback([&] {
    Tokenizer t = Tokenizer::load(tok.data, parse_scheme(tok.scheme));
    TokenSequence seq = t.tokenize(tok.text, parse_lang(tok.lang));
    auto rows = t.render(seq);
    if (tok.json) {
      nlohmann::json j;
      std::vector<std::string> ph, st;
      for (int id : seq.phoneme_ids) ph.push_back(t.inventory().symbol_of(id));
      for (int id : seq.style_ids) {
        st.push_back(std::string(1, t.styles().display_digit(id)));
      }
      j["phonemes"] = ph;
      j["styles"] = st;
      j["ids"] = {{"phonemes", seq.phoneme_ids}, {"styles", seq.style_ids}};
      std::cout << j.dump() << "\n";
    } else {
      std::cout << rows.first << "\n" << rows.second << "\n";
    }
  });

  // ----------------------------------------------------------------- gen-toy
  auto* c_gen = app.add_subcommand(
      "gen-toy", "generate the synthetic sine-tone training corpus");
  struct {
    int n = 8;
    uint32_t seed = 7;
    std::string out, data = "data";
  } gen;
  MelConfig gen_mel;
  c_gen->add_option("--n", gen.n, "number of utterances")
      ->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "sampling seed")->capture_default_str();
  c_gen->add_option("--out", gen.out, "output directory")->required();
  c_gen->add_option("--data", gen.data, "data directory")
      ->capture_default_str();
  add_mel_flags(c_gen, gen_mel);
  c_gen->callback([&] {
    Tokenizer t = Tokenizer::load(gen.data, Scheme::ipa);
    auto records = generate_toy_corpus(gen.n, gen.seed, gen.out, t, gen_mel);
    std::cout << "wrote " << records.size() << " utterances and "
              << gen.out << "/manifest.jsonl\n";
  });

  // ---------------------------------------------------------- extract-features
  auto* c_ext = app.add_subcommand(
      "extract-features", "cache mel or latent features for a manifest");
  struct {
    std::string manifest, out, kind = "mel", ae, data = "data";
  } ext;
  MelConfig ext_mel;
  c_ext->add_option("--manifest", ext.manifest, "JSONL manifest")->required();
  c_ext->add_option("--out", ext.out, "output directory")->required();
  c_ext->add_option("--kind", ext.kind, "feature kind: mel or latent")
      ->capture_default_str();
  c_ext->add_option("--ae", ext.ae, "autoencoder checkpoint (latent kind)");
  c_ext->add_option("--data", ext.data, "data directory")
      ->capture_default_str();
  add_mel_flags(c_ext, ext_mel);
  c_ext->callback([&] {
    auto records = read_manifest(ext.manifest);
    Autoencoder<float> ae(AutoencoderConfig::identity(1));
    bool latent = ext.kind == "latent";
    if (latent) {
      if (ext.ae.empty()) {
        throw KindMismatchError("latent extraction needs --ae");
      }
      ae = load_autoencoder(ext.ae, nullptr);
    } else if (ext.kind != "mel") {
      throw InputError("UnknownFeatureKind", ext.kind);
    }
    std::filesystem::create_directories(ext.out);
    Tokenizer t = Tokenizer::load(ext.data, Scheme::ipa);
    auto examples = prepare_examples(records, ext.manifest, t, ext_mel,
                                     latent ? &ae : nullptr);
    for (const TrainExample& ex : examples) {
      write_feature(ext.out + "/" + ex.id + ".lstf",
                    latent ? FeatureKind::latent : FeatureKind::mel,
                    ex.features);
    }
    std::cout << "wrote " << examples.size() << " feature files to "
              << ext.out << "\n";
  });

  // ---------------------------------------------------------------- train-ae
  auto* c_tae = app.add_subcommand(
      "train-ae", "train the waveform autoencoder on a manifest's audio");
  struct {
    std::string manifest, out;
    long steps = 2500;
    double lr = 1e-3;
    uint32_t seed = 7;
    int batch = 8;
    int latent = AutoencoderConfig::desk_raw().latent_dim;
  } tae;
  MelConfig tae_mel;
  c_tae->add_option("--manifest", tae.manifest, "JSONL manifest")->required();
  c_tae->add_option("--out", tae.out, "output directory")->required();
  c_tae->add_option("--steps", tae.steps, "optimization steps")
      ->capture_default_str();
  c_tae->add_option("--lr", tae.lr, "Adam learning rate")
      ->capture_default_str();
  c_tae->add_option("--seed", tae.seed, "init/batch seed")
      ->capture_default_str();
  c_tae->add_option("--batch", tae.batch, "clips per step (0 = all)")
      ->capture_default_str();
  c_tae->add_option("--latent", tae.latent, "latent channels")
      ->capture_default_str();
  add_mel_flags(c_tae, tae_mel);
  c_tae->callback([&] {
    auto records = read_manifest(tae.manifest);
    std::vector<Mat<float>> clips;
    for (const auto& rec : records) {
      Wav w = read_wav(resolve_audio_path(tae.manifest, rec.audio_path));
      if (w.sample_rate != tae_mel.sample_rate) {
        throw InputError("Manifest", "utterance " + rec.id +
                                         ": sample rate mismatch");
      }
      Mat<float> m(1, static_cast<long>(w.samples.size()));
      for (size_t i = 0; i < w.samples.size(); ++i) {
        m(0, static_cast<long>(i)) = w.samples[i];
      }
      clips.push_back(std::move(m));
    }
    AutoencoderConfig cfg = AutoencoderConfig::desk_raw();
    cfg.latent_dim = tae.latent;
    Autoencoder<float> ae(cfg);
    AeTrainConfig atc;
    atc.steps = tae.steps;
    atc.lr = tae.lr;
    atc.seed = tae.seed;
    atc.batch_size = tae.batch;
    auto losses = train_autoencoder(ae, clips, atc);
    std::filesystem::create_directories(tae.out);
    save_autoencoder(tae.out + "/ae.lsck", ae, tae_mel);
    std::ofstream csv(tae.out + "/ae_loss.csv", std::ios::trunc);
    if (!csv) throw IoError("cannot write " + tae.out + "/ae_loss.csv");
    csv << "step,loss\n";
    char line[64];
    for (size_t i = 0; i < losses.size(); ++i) {
      std::snprintf(line, sizeof(line), "%zu,%.9g\n", i + 1, losses[i]);
      csv << line;
    }
    std::cout << "autoencoder: " << ae.param_count() << " params, final loss "
              << losses.back() << ", checkpoint " << tae.out << "/ae.lsck\n";
  });

  // ------------------------------------------------------------------- train
  auto* c_tr = app.add_subcommand("train",
                                  "train the acoustic model on a manifest");
  struct {
    std::string manifest, out, kind = "mel", ae, resume, data = "data";
    TrainConfig tc;
    ModelConfig mc = ModelConfig::desk();
  } tr;
  tr.tc.seed = 1;
  MelConfig tr_mel;
  c_tr->add_option("--manifest", tr.manifest, "JSONL manifest")->required();
  c_tr->add_option("--out", tr.out, "output directory")->required();
  c_tr->add_option("--steps", tr.tc.max_steps, "optimization steps")
      ->capture_default_str();
  c_tr->add_option("--batch", tr.tc.batch_size, "utterances per step")
      ->capture_default_str();
  c_tr->add_option("--base-lr", tr.tc.base_lr, "schedule base learning rate")
      ->capture_default_str();
  c_tr->add_option("--warmup", tr.tc.warmup_steps, "warmup steps")
      ->capture_default_str();
  c_tr->add_option("--seed", tr.tc.seed, "global seed")->capture_default_str();
  c_tr->add_option("--checkpoint-every", tr.tc.checkpoint_every,
                   "periodic checkpoint interval (0 = final only)")
      ->capture_default_str();
  c_tr->add_option("--clip-norm", tr.tc.clip_norm,
                   "global gradient-norm cap (0 = off)")
      ->capture_default_str();
  c_tr->add_option("--weight-decay", tr.tc.weight_decay,
                   "decoupled weight decay (0 = off)")
      ->capture_default_str();
  c_tr->add_option("--kind", tr.kind, "feature kind: mel or latent")
      ->capture_default_str();
  c_tr->add_option("--ae", tr.ae, "autoencoder checkpoint (latent kind)");
  c_tr->add_option("--resume", tr.resume, "checkpoint to resume from");
  c_tr->add_option("--data", tr.data, "data directory")->capture_default_str();
  c_tr->add_option("--embed-dim", tr.mc.embed_dim, "embedding width M")
      ->capture_default_str();
  c_tr->add_option("--encoder-layers", tr.mc.encoder_layers,
                   "encoder FFT blocks per stream")
      ->capture_default_str();
  c_tr->add_option("--decoder-layers", tr.mc.decoder_layers,
                   "decoder FFT blocks")
      ->capture_default_str();
  c_tr->add_option("--heads", tr.mc.heads, "attention heads")
      ->capture_default_str();
  c_tr->add_option("--hidden-dim", tr.mc.hidden_dim,
                   "conv hidden width inside FFT blocks")
      ->capture_default_str();
  c_tr->add_option("--dropout", tr.mc.dropout, "dropout probability")
      ->capture_default_str();
  c_tr->add_flag("--share-streams", tr.mc.share_streams,
                 "reuse phoneme-stream weights for the style stream");
  c_tr->add_option("--weight-tts", tr.mc.weight_tts, "feature loss weight")
      ->capture_default_str();
  c_tr->add_option("--weight-duration", tr.mc.weight_duration,
                   "duration loss weight")
      ->capture_default_str();
  add_mel_flags(c_tr, tr_mel);
  c_tr->callback([&] {
    Tokenizer t = Tokenizer::load(tr.data, Scheme::ipa);
    auto records = read_manifest(tr.manifest);
    Autoencoder<float> ae(AutoencoderConfig::identity(1));
    bool latent = tr.kind == "latent";
    if (latent) {
      if (tr.ae.empty()) throw KindMismatchError("latent training needs --ae");
      ae = load_autoencoder(tr.ae, nullptr);
      tr.mc.feature_kind = FeatureKind::latent;
      tr.mc.feature_dim = ae.cfg.latent_dim;
    } else if (tr.kind == "mel") {
      tr.mc.feature_kind = FeatureKind::mel;
      tr.mc.feature_dim = tr_mel.n_mels;
    } else {
      throw InputError("UnknownFeatureKind", tr.kind);
    }
    tr.mc.phoneme_vocab = t.inventory().size();
    auto examples = prepare_examples(records, tr.manifest, t, tr_mel,
                                     latent ? &ae : nullptr);
    AcousticModel<float> model;
    if (!tr.resume.empty()) {
      Checkpoint ck = load_checkpoint(tr.resume);
      model = model_from_checkpoint(ck, &tr_mel);
      Trainer trainer(model, tr_mel, std::move(examples), tr.tc);
      trainer.restore(ck);
      std::cout << "resumed from step " << trainer.current_step() << "\n";
      trainer.run(tr.out);
      std::cout << "trained to step " << trainer.current_step()
                << ", final loss "
                << (trainer.history().empty()
                        ? 0.0
                        : trainer.history().back().total)
                << ", wrote " << tr.out << "/ckpt-final.lsck\n";
      return;
    }
    model.build(tr.mc);
    Trainer trainer(model, tr_mel, std::move(examples), tr.tc);
    trainer.init();
    trainer.run(tr.out);
    std::cout << "model: " << model.param_count() << " params\n";
    std::cout << "trained " << trainer.current_step()
              << " steps, final loss " << trainer.history().back().total
              << ", wrote " << tr.out << "/ckpt-final.lsck\n";
  });

  // ------------------------------------------------------------------- synth
  auto* c_sy = app.add_subcommand("synth", "synthesize a WAV from text");
  struct {
    std::string ckpt, lang, text, out, durations = "predicted", ae,
                data = "data";
    int gl_iters = 32;
  } sy;
  c_sy->add_option("--ckpt", sy.ckpt, "acoustic model checkpoint")->required();
  c_sy->add_option("--lang", sy.lang, "language: en or zh")->required();
  c_sy->add_option("--text", sy.text, "input text")->required();
  c_sy->add_option("--out", sy.out, "output WAV path")->required();
  c_sy->add_option("--durations", sy.durations,
                   "gt (fixed toy rule) or predicted")
      ->capture_default_str();
  c_sy->add_option("--ae", sy.ae, "autoencoder checkpoint (latent models)");
  c_sy->add_option("--gl-iters", sy.gl_iters, "Griffin-Lim iterations")
      ->capture_default_str();
  c_sy->add_option("--data", sy.data, "data directory")
      ->capture_default_str();
  c_sy->callback([&] {
    Checkpoint ck = load_checkpoint(sy.ckpt);
    MelConfig mel;
    AcousticModel<float> model = model_from_checkpoint(ck, &mel);
    Tokenizer t = Tokenizer::load(sy.data, Scheme::ipa);
    TokenSequence seq = t.tokenize(sy.text, parse_lang(sy.lang));
    Autoencoder<float> ae(AutoencoderConfig::identity(1));
    bool latent = model.cfg.feature_kind == FeatureKind::latent;
    if (latent) {
      if (sy.ae.empty()) {
        throw KindMismatchError("latent checkpoint needs --ae");
      }
      ae = load_autoencoder(sy.ae, nullptr);
    }
    auto t0 = std::chrono::steady_clock::now();
    SynthesisResult<float> syn;
    if (sy.durations == "gt") {
      syn = model.synthesize_with_durations(seq.phoneme_ids, seq.style_ids,
                                            toy_durations(seq, ToyConfig{}));
    } else if (sy.durations == "predicted") {
      syn = model.synthesize(seq.phoneme_ids, seq.style_ids);
    } else {
      throw InputError("UnknownDurationMode", sy.durations);
    }
    std::vector<float> audio =
        features_to_audio(syn.features, model.cfg.feature_kind, mel,
                          latent ? &ae : nullptr, sy.gl_iters);
    auto t1 = std::chrono::steady_clock::now();
    write_wav(sy.out, audio, mel.sample_rate);
    long frames = syn.features.cols();
    long samples_per_frame = latent ? ae.cfg.reduction() : mel.hop;
    double seconds = static_cast<double>(frames) * samples_per_frame /
                     mel.sample_rate;
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::printf("frames %ld\nseconds %.3f\nsynthesis_ms %.1f\n", frames,
                seconds, ms);
    std::cout << "wrote " << sy.out << "\n";
  });

  // ------------------------------------------------------- export-embeddings
  auto* c_ex = app.add_subcommand("export-embeddings",
                                  "dump the phoneme embedding table as CSV");
  struct {
    std::string ckpt, out, data = "data";
  } ex;
  c_ex->add_option("--ckpt", ex.ckpt, "acoustic model checkpoint")->required();
  c_ex->add_option("--out", ex.out, "output CSV path")->required();
  c_ex->add_option("--data", ex.data, "data directory")
      ->capture_default_str();
  c_ex->callback([&] {
    Checkpoint ck = load_checkpoint(ex.ckpt);
    AcousticModel<float> model = model_from_checkpoint(ck, nullptr);
    Tokenizer t = Tokenizer::load(ex.data, Scheme::ipa);
    export_embeddings(model.phoneme_embed.table.v, t.inventory(), ex.out);
    std::cout << "wrote " << model.phoneme_embed.table.v.rows()
              << " rows to " << ex.out << "\n";
  });

  // ------------------------------------------------------------------- bench
  auto* c_be = app.add_subcommand(
      "bench", "time the acoustic and vocoder stages on synthetic input");
  struct {
    std::string ckpt, ae;
    double seconds = 8.0;
    int repeat = 5;
    int gl_iters = 32;
  } be;
  c_be->add_option("--ckpt", be.ckpt, "acoustic model checkpoint")->required();
  c_be->add_option("--seconds", be.seconds, "target audio length")
      ->capture_default_str();
  c_be->add_option("--repeat", be.repeat, "timing repetitions")
      ->capture_default_str();
  c_be->add_option("--ae", be.ae, "autoencoder checkpoint (latent models)");
  c_be->add_option("--gl-iters", be.gl_iters, "Griffin-Lim iterations")
      ->capture_default_str();
  c_be->callback([&] {
    Checkpoint ck = load_checkpoint(be.ckpt);
    MelConfig mel;
    AcousticModel<float> model = model_from_checkpoint(ck, &mel);
    bool latent = model.cfg.feature_kind == FeatureKind::latent;
    Autoencoder<float> ae(AutoencoderConfig::identity(1));
    if (latent) {
      if (be.ae.empty()) {
        throw KindMismatchError("latent checkpoint needs --ae");
      }
      ae = load_autoencoder(be.ae, nullptr);
    }
    long samples_per_frame = latent ? ae.cfg.reduction() : mel.hop;
    long target_frames = static_cast<long>(be.seconds * mel.sample_rate /
                                           samples_per_frame);
    // Synthetic utterance from the fixed toy duration rule: speakable ids
    // cycle through the inventory between separators.
    ToyConfig toy;
    std::vector<int> pid{1}, sid{1}, dur{toy.frames_per_separator};
    long frames = toy.frames_per_separator;
    int next = 2;
    while (frames < target_frames) {
      pid.push_back(2 + (next - 2) % (model.cfg.phoneme_vocab - 2));
      sid.push_back(1);
      dur.push_back(toy.frames_per_phoneme);
      frames += toy.frames_per_phoneme;
      ++next;
    }
    pid.push_back(1);
    sid.push_back(1);
    dur.push_back(toy.frames_per_separator);
    frames += toy.frames_per_separator;

    if (be.repeat < 1) throw InputError("BadRepeat", "repeat must be >= 1");
    std::vector<double> acoustic, vocoder;
    for (int r = 0; r < be.repeat; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      SynthesisResult<float> syn =
          model.synthesize_with_durations(pid, sid, dur);
      auto t1 = std::chrono::steady_clock::now();
      std::vector<float> audio =
          features_to_audio(syn.features, model.cfg.feature_kind, mel,
                            latent ? &ae : nullptr, be.gl_iters);
      auto t2 = std::chrono::steady_clock::now();
      acoustic.push_back(
          std::chrono::duration<double, std::milli>(t1 - t0).count());
      vocoder.push_back(
          std::chrono::duration<double, std::milli>(t2 - t1).count());
    }
    double audio_s =
        static_cast<double>(frames) * samples_per_frame / mel.sample_rate;
    std::printf("bench: %.2f s of audio, %d repeats, median ms per stage\n",
                audio_s, be.repeat);
    std::printf("%-22s %12s %12s\n", "stage", "median_ms", "params");
    std::printf("%-22s %12.1f %12ld\n", "acoustic-model",
                median_ms(acoustic), model.param_count());
    if (latent) {
      std::printf("%-22s %12.1f %12ld\n", "vocoder (ae-decoder)",
                  median_ms(vocoder), ae.decoder_param_count());
    } else {
      std::printf("%-22s %12.1f %12ld\n", "vocoder (griffin-lim)",
                  median_ms(vocoder), 0L);
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
