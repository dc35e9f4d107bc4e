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

#include "lanstyle/train/manifest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lanstyle/common/errors.h"

namespace lanstyle {

using nlohmann::json;

std::vector<UtteranceRecord> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  std::vector<UtteranceRecord> records;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IoError("manifest " + path + " line " + std::to_string(line_no) +
                    ": " + e.what());
    }
    UtteranceRecord r;
    try {
      r.id = j.at("id").get<std::string>();
      std::string lang = j.at("language").get<std::string>();
      if (lang == "en") {
        r.language = Language::en;
      } else if (lang == "zh") {
        r.language = Language::zh;
      } else {
        throw InputError("Manifest", "unknown language \"" + lang + "\" in " +
                                         r.id);
      }
      r.text = j.at("text").get<std::string>();
      r.audio_path = j.at("audio_path").get<std::string>();
      if (j.contains("durations")) {
        r.durations = j.at("durations").get<std::vector<int>>();
        r.has_durations = true;
        for (int d : r.durations) {
          if (d < 0) {
            throw InputError("Manifest",
                             "negative duration in record " + r.id);
          }
        }
      }
    } catch (const json::exception& e) {
      throw IoError("manifest " + path + " line " + std::to_string(line_no) +
                    ": " + e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_manifest(const std::string& path,
                    const std::vector<UtteranceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path);
  for (const UtteranceRecord& r : records) {
    json j;
    j["id"] = r.id;
    j["language"] = r.language == Language::en ? "en" : "zh";
    j["text"] = r.text;
    j["audio_path"] = r.audio_path;
    if (r.has_durations) j["durations"] = r.durations;
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("failed writing manifest: " + path);
}

std::string resolve_audio_path(const std::string& manifest_path,
                               const std::string& audio_path) {
  std::filesystem::path audio(audio_path);
  if (audio.is_absolute()) return audio_path;
  return (std::filesystem::path(manifest_path).parent_path() / audio).string();
}

}  // namespace lanstyle
