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

#include "lanstyle/train/checkpoint.h"

#include <cstring>
#include <fstream>

#include "json.hpp"
#include "lanstyle/common/errors.h"

namespace lanstyle {
namespace {

using nlohmann::json;

void put_u16(std::ostream& out, uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

void put_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

uint16_t get_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

const Mat<float>* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) return &m;
  }
  return nullptr;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  out.write("LSCK", 4);
  out.put(static_cast<char>(1));
  put_u64(out, static_cast<uint64_t>(ck.step));
  put_u32(out, static_cast<uint32_t>(ck.config_json.size()));
  out.write(ck.config_json.data(),
            static_cast<std::streamsize>(ck.config_json.size()));
  put_u32(out, static_cast<uint32_t>(ck.tensors.size()));
  for (const auto& [name, m] : ck.tensors) {
    if (name.size() > 0xffff) throw IoError("tensor name too long: " + name);
    put_u16(out, static_cast<uint16_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_u32(out, static_cast<uint32_t>(m.rows()));
    put_u32(out, static_cast<uint32_t>(m.cols()));
    static_assert(sizeof(float) == 4);
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(float) * m.size()));
  }
  if (!out) throw IoError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LSCK", 4) != 0) {
    throw IoError("not a checkpoint file: " + path);
  }
  int version = in.get();
  if (version != 1) {
    throw IoError("unsupported checkpoint version " +
                  std::to_string(version) + ": " + path);
  }
  Checkpoint ck;
  ck.step = static_cast<long>(get_u64(in));
  uint32_t config_len = get_u32(in);
  ck.config_json.resize(config_len);
  in.read(ck.config_json.data(), config_len);
  uint32_t n_tensors = get_u32(in);
  for (uint32_t i = 0; i < n_tensors; ++i) {
    uint16_t name_len = get_u16(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    uint32_t rows = get_u32(in);
    uint32_t cols = get_u32(in);
    Mat<float> m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(float) * m.size()));
    if (!in) throw IoError("truncated checkpoint: " + path);
    ck.tensors.emplace_back(std::move(name), std::move(m));
  }
  return ck;
}

namespace {

json mel_to_json(const MelConfig& mel) {
  return {{"sample_rate", mel.sample_rate}, {"n_fft", mel.n_fft},
          {"hop", mel.hop},                 {"win", mel.win},
          {"n_mels", mel.n_mels},           {"fmin", mel.fmin},
          {"fmax", mel.fmax},               {"log_floor", mel.log_floor}};
}

void mel_from_json(const json& m, MelConfig* mel) {
  mel->sample_rate = m.at("sample_rate").get<int>();
  mel->n_fft = m.at("n_fft").get<int>();
  mel->hop = m.at("hop").get<int>();
  mel->win = m.at("win").get<int>();
  mel->n_mels = m.at("n_mels").get<int>();
  mel->fmin = m.at("fmin").get<double>();
  mel->fmax = m.at("fmax").get<double>();
  mel->log_floor = m.at("log_floor").get<double>();
}

}  // namespace

std::string configs_to_json(const ModelConfig& model, const MelConfig& mel) {
  json j;
  j["model"] = {{"phoneme_vocab", model.phoneme_vocab},
                {"style_vocab", model.style_vocab},
                {"embed_dim", model.embed_dim},
                {"encoder_layers", model.encoder_layers},
                {"decoder_layers", model.decoder_layers},
                {"heads", model.heads},
                {"hidden_dim", model.hidden_dim},
                {"conv1_kernel", model.conv1_kernel},
                {"conv2_kernel", model.conv2_kernel},
                {"duration_kernel", model.duration_kernel},
                {"dropout", model.dropout},
                {"share_streams", model.share_streams},
                {"feature_dim", model.feature_dim},
                {"feature_kind", to_string(model.feature_kind)},
                {"weight_tts", model.weight_tts},
                {"weight_duration", model.weight_duration}};
  j["mel"] = mel_to_json(mel);
  return j.dump();
}

void configs_from_json(const std::string& json_text, ModelConfig* model,
                       MelConfig* mel) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("bad checkpoint config: ") + e.what());
  }
  try {
    if (model && j.contains("model")) {
      const json& m = j["model"];
      model->phoneme_vocab = m.at("phoneme_vocab").get<int>();
      model->style_vocab = m.at("style_vocab").get<int>();
      model->embed_dim = m.at("embed_dim").get<int>();
      model->encoder_layers = m.at("encoder_layers").get<int>();
      model->decoder_layers = m.at("decoder_layers").get<int>();
      model->heads = m.at("heads").get<int>();
      model->hidden_dim = m.at("hidden_dim").get<int>();
      model->conv1_kernel = m.at("conv1_kernel").get<int>();
      model->conv2_kernel = m.at("conv2_kernel").get<int>();
      model->duration_kernel = m.at("duration_kernel").get<int>();
      model->dropout = m.at("dropout").get<double>();
      model->share_streams = m.at("share_streams").get<bool>();
      model->feature_dim = m.at("feature_dim").get<int>();
      std::string kind = m.at("feature_kind").get<std::string>();
      if (kind == "mel") {
        model->feature_kind = FeatureKind::mel;
      } else if (kind == "latent") {
        model->feature_kind = FeatureKind::latent;
      } else {
        throw IoError("unknown feature kind in checkpoint: " + kind);
      }
      model->weight_tts = m.at("weight_tts").get<double>();
      model->weight_duration = m.at("weight_duration").get<double>();
    }
    if (mel && j.contains("mel")) {
      mel_from_json(j["mel"], mel);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("bad checkpoint config: ") + e.what());
  }
}

void save_autoencoder(const std::string& path, Autoencoder<float>& ae,
                      const MelConfig& mel) {
  json j;
  j["autoencoder"] = {
      {"domain",
       ae.cfg.domain == AutoencoderConfig::Domain::raw ? "raw" : "mel"},
      {"input_dim", ae.cfg.input_dim},
      {"latent_dim", ae.cfg.latent_dim},
      {"channels", ae.cfg.channels},
      {"strides", ae.cfg.strides},
      {"kernels", ae.cfg.kernels}};
  j["mel"] = mel_to_json(mel);
  Checkpoint ck;
  ck.step = 0;
  ck.config_json = j.dump();
  for (Param<float>* p : ae.params()) ck.tensors.emplace_back(p->name, p->v);
  save_checkpoint(path, ck);
}

Autoencoder<float> load_autoencoder(const std::string& path, MelConfig* mel) {
  Checkpoint ck = load_checkpoint(path);
  json j;
  try {
    j = json::parse(ck.config_json);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("bad checkpoint config: ") + e.what());
  }
  if (!j.contains("autoencoder")) {
    throw KindMismatchError("not an autoencoder checkpoint: " + path);
  }
  AutoencoderConfig c;
  try {
    const json& a = j["autoencoder"];
    std::string domain = a.at("domain").get<std::string>();
    if (domain == "raw") {
      c.domain = AutoencoderConfig::Domain::raw;
    } else if (domain == "mel") {
      c.domain = AutoencoderConfig::Domain::mel;
    } else {
      throw IoError("unknown autoencoder domain: " + domain);
    }
    c.input_dim = a.at("input_dim").get<int>();
    c.latent_dim = a.at("latent_dim").get<int>();
    c.channels = a.at("channels").get<std::vector<int>>();
    c.strides = a.at("strides").get<std::vector<int>>();
    c.kernels = a.at("kernels").get<std::vector<int>>();
    if (mel && j.contains("mel")) mel_from_json(j["mel"], mel);
  } catch (const json::exception& e) {
    throw IoError(std::string("bad checkpoint config: ") + e.what());
  }
  Autoencoder<float> ae(c);
  for (Param<float>* p : ae.params()) {
    const Mat<float>* v = ck.find(p->name);
    if (!v) throw KindMismatchError("checkpoint lacks tensor " + p->name);
    if (v->rows() != p->v.rows() || v->cols() != p->v.cols()) {
      throw ShapeMismatchError("checkpoint tensor shape differs: " + p->name);
    }
    p->v = *v;
  }
  return ae;
}

}  // namespace lanstyle
