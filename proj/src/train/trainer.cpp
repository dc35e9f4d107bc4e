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

#include "lanstyle/train/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "lanstyle/audio/wav.h"

namespace lanstyle {

namespace {

long duration_sum(const std::vector<int>& d) {
  return std::accumulate(d.begin(), d.end(), 0L);
}

}  // namespace

Batch make_batch(const std::vector<TrainExample>& examples,
                 const std::vector<size_t>& indices) {
  if (indices.empty()) throw EmptyInputError("batch needs at least one item");
  Batch b;
  Eigen::Index feature_dim = -1;
  for (size_t idx : indices) {
    if (idx >= examples.size()) {
      throw IdOutOfRangeError("batch index past corpus end");
    }
    const TrainExample& ex = examples[idx];
    if (ex.features.size() == 0) {
      throw MissingFeatureError("no cached features for utterance " + ex.id);
    }
    if (feature_dim < 0) feature_dim = ex.features.rows();
    if (ex.features.rows() != feature_dim) {
      throw ShapeMismatchError("feature dim differs within batch");
    }
    if (duration_sum(ex.durations) != ex.features.cols()) {
      throw DurationMismatchError("utterance " + ex.id +
                                  ": duration sum != feature frames");
    }
    b.max_tokens = std::max(b.max_tokens,
                            static_cast<int>(ex.phoneme_ids.size()));
    b.max_frames = std::max(b.max_frames, static_cast<long>(ex.features.cols()));
  }
  for (size_t idx : indices) {
    const TrainExample& ex = examples[idx];
    size_t L = ex.phoneme_ids.size();
    std::vector<int> ph(static_cast<size_t>(b.max_tokens), 0);
    std::vector<int> st(static_cast<size_t>(b.max_tokens), 0);
    std::vector<int> du(static_cast<size_t>(b.max_tokens), 0);
    Mask mask(static_cast<size_t>(b.max_tokens), 0);
    std::copy(ex.phoneme_ids.begin(), ex.phoneme_ids.end(), ph.begin());
    std::copy(ex.style_ids.begin(), ex.style_ids.end(), st.begin());
    std::copy(ex.durations.begin(), ex.durations.end(), du.begin());
    std::fill(mask.begin(), mask.begin() + static_cast<long>(L), 1);
    Mat<float> f = Mat<float>::Zero(feature_dim, b.max_frames);
    f.leftCols(ex.features.cols()) = ex.features;
    b.phoneme_ids.push_back(std::move(ph));
    b.style_ids.push_back(std::move(st));
    b.durations.push_back(std::move(du));
    b.token_masks.push_back(std::move(mask));
    b.features.push_back(std::move(f));
    b.frames.push_back(static_cast<long>(ex.features.cols()));
  }
  return b;
}

std::vector<TrainExample> prepare_examples(
    const std::vector<UtteranceRecord>& records,
    const std::string& manifest_path, const Tokenizer& tokenizer,
    const MelConfig& mel, const Autoencoder<float>* ae) {
  std::vector<TrainExample> out;
  out.reserve(records.size());
  for (const UtteranceRecord& rec : records) {
    TrainExample ex;
    ex.id = rec.id;
    TokenSequence toks = tokenizer.tokenize(rec.text, rec.language);
    ex.phoneme_ids = toks.phoneme_ids;
    ex.style_ids = toks.style_ids;
    if (!rec.has_durations) {
      throw MissingFeatureError("utterance " + rec.id +
                                " has no durations in the manifest");
    }
    if (rec.durations.size() != ex.phoneme_ids.size()) {
      throw DurationMismatchError(
          "utterance " + rec.id + ": " + std::to_string(rec.durations.size()) +
          " durations for " + std::to_string(ex.phoneme_ids.size()) +
          " tokens");
    }
    ex.durations = rec.durations;

    std::string audio = resolve_audio_path(manifest_path, rec.audio_path);
    if (!std::filesystem::exists(audio)) {
      throw MissingFeatureError("audio file not found: " + audio);
    }
    Wav wav = read_wav(audio);
    if (wav.sample_rate != mel.sample_rate) {
      throw InputError("Manifest",
                       "utterance " + rec.id + ": sample rate " +
                           std::to_string(wav.sample_rate) +
                           " != configured " +
                           std::to_string(mel.sample_rate));
    }
    long total = duration_sum(ex.durations);
    if (ae == nullptr) {
      ex.features = extract_mel(wav.samples, mel);
    } else if (ae->cfg.domain == AutoencoderConfig::Domain::raw) {
      // One latent frame spans reduction() samples; durations count latent
      // frames, so only the first total * reduction() samples participate.
      long want = total * ae->cfg.reduction();
      if (static_cast<long>(wav.samples.size()) < want) {
        throw InputTooShortError("utterance " + rec.id + ": needs " +
                                 std::to_string(want) + " samples, file has " +
                                 std::to_string(wav.samples.size()));
      }
      Mat<float> x(1, want);
      for (long i = 0; i < want; ++i) x(0, i) = wav.samples[static_cast<size_t>(i)];
      ex.features = ae->encode(x);
    } else {
      Mat<float> m = extract_mel(wav.samples, mel);
      ex.features = ae_encode(*ae, m).z;
    }
    if (ex.features.cols() != total) {
      throw DurationMismatchError(
          "utterance " + rec.id + ": duration sum " + std::to_string(total) +
          " != feature frames " + std::to_string(ex.features.cols()));
    }
    out.push_back(std::move(ex));
  }
  return out;
}

void write_loss_csv(const std::string& path, const std::vector<LossRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << "step,loss_total,loss_tts,loss_d,lr\n";
  char line[160];
  for (const LossRow& r : rows) {
    std::snprintf(line, sizeof(line), "%ld,%.9g,%.9g,%.9g,%.9g\n", r.step,
                  r.total, r.tts, r.duration, r.lr);
    out << line;
  }
  if (!out.good()) throw IoError("failed while writing " + path);
}

Trainer::Trainer(AcousticModel<float>& model, MelConfig mel,
                 std::vector<TrainExample> examples, TrainConfig cfg)
    : model_(&model), mel_(mel), examples_(std::move(examples)),
      cfg_(std::move(cfg)) {
  cfg_.validate();
  if (examples_.empty()) throw EmptyInputError("training corpus is empty");
}

void Trainer::init() {
  std::mt19937 rng(cfg_.seed);
  model_->init(rng);
  adam_.attach(model_->params());
  step_ = 0;
  history_.clear();
}

LossRow Trainer::step() {
  long s = step_ + 1;
  // Stateless per-step streams make interrupted and uninterrupted runs
  // sample identical batches and dropout masks.
  std::mt19937 pick(cfg_.seed ^
                    (0x9e3779b9u + static_cast<uint32_t>(s) * 0x85ebca6bu));
  std::vector<size_t> indices(static_cast<size_t>(cfg_.batch_size));
  for (size_t& idx : indices) {
    idx = static_cast<size_t>(pick() % examples_.size());
  }
  Batch b = make_batch(examples_, indices);

  std::mt19937 drop(cfg_.seed ^
                    (0xc2b2ae35u + static_cast<uint32_t>(s) * 0x27d4eb2fu));
  RunState rs;
  rs.rng = &drop;
  rs.dropout = model_->cfg.dropout;

  model_->zero_grad();
  float scale = 1.0f / static_cast<float>(b.size());
  double total = 0.0, tts = 0.0, dur = 0.0;
  for (size_t i = 0; i < b.size(); ++i) {
    Mat<float> target = b.features[i].leftCols(b.frames[i]);
    StepLosses<float> l =
        model_->forward_backward(b.phoneme_ids[i], b.style_ids[i],
                                 b.durations[i], target, rs, scale, true);
    total += l.total;
    tts += l.tts;
    dur += l.duration;
  }
  total /= static_cast<double>(b.size());
  tts /= static_cast<double>(b.size());
  dur /= static_cast<double>(b.size());
  if (!std::isfinite(total)) throw NaNLossError(s, "total training loss");

  std::vector<Param<float>*> params = model_->params();
  if (cfg_.clip_norm > 0.0) {
    double sq = 0.0;
    for (Param<float>* p : params) sq += p->g.cast<double>().squaredNorm();
    double norm = std::sqrt(sq);
    if (norm > cfg_.clip_norm) {
      float k = static_cast<float>(cfg_.clip_norm / norm);
      for (Param<float>* p : params) p->g *= k;
    }
  }
  double lr = lr_schedule(s, cfg_.base_lr, cfg_.warmup_steps);
  if (cfg_.weight_decay > 0.0) {
    float k = static_cast<float>(1.0 - lr * cfg_.weight_decay);
    for (Param<float>* p : params) p->v *= k;
  }
  adam_.step(params, lr);
  step_ = s;
  LossRow row{s, total, tts, dur, lr};
  history_.push_back(row);
  return row;
}

void Trainer::run(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  while (step_ < cfg_.max_steps) {
    step();
    if (cfg_.checkpoint_every > 0 && step_ % cfg_.checkpoint_every == 0 &&
        step_ < cfg_.max_steps) {
      save_checkpoint(out_dir + "/ckpt-" + std::to_string(step_) + ".lsck",
                      snapshot());
    }
  }
  save_checkpoint(out_dir + "/ckpt-final.lsck", snapshot());
  write_loss_csv(out_dir + "/loss.csv", history_);
}

Checkpoint Trainer::snapshot() const {
  Checkpoint ck;
  ck.step = step_;
  ck.config_json = configs_to_json(model_->cfg, mel_);
  std::vector<Param<float>*> params = model_->params();
  const auto& st = adam_.state();
  if (st.size() != params.size()) {
    throw KindMismatchError("optimizer state not attached to this model");
  }
  for (Param<float>* p : params) ck.tensors.emplace_back(p->name, p->v);
  for (size_t i = 0; i < params.size(); ++i) {
    ck.tensors.emplace_back("adam.m." + params[i]->name, st[i].m);
    ck.tensors.emplace_back("adam.v." + params[i]->name, st[i].v);
  }
  return ck;
}

void Trainer::restore(const Checkpoint& ck) {
  std::vector<Param<float>*> params = model_->params();
  adam_.attach(params);
  auto& st = adam_.state();
  auto fetch = [&ck](const std::string& name) -> const Mat<float>& {
    const Mat<float>* m = ck.find(name);
    if (!m) throw KindMismatchError("checkpoint lacks tensor " + name);
    return *m;
  };
  for (size_t i = 0; i < params.size(); ++i) {
    Param<float>& p = *params[i];
    const Mat<float>& v = fetch(p.name);
    if (v.rows() != p.v.rows() || v.cols() != p.v.cols()) {
      throw ShapeMismatchError("checkpoint tensor shape differs: " + p.name);
    }
    p.v = v;
    st[i].m = fetch("adam.m." + p.name);
    st[i].v = fetch("adam.v." + p.name);
    if (st[i].m.rows() != p.v.rows() || st[i].m.cols() != p.v.cols() ||
        st[i].v.rows() != p.v.rows() || st[i].v.cols() != p.v.cols()) {
      throw ShapeMismatchError("checkpoint moment shape differs: " + p.name);
    }
  }
  adam_.set_t(ck.step);
  step_ = ck.step;
  history_.clear();
}

}  // namespace lanstyle
