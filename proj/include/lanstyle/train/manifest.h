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

#include <string>
#include <vector>

#include "lanstyle/text/inventory.h"

namespace lanstyle {

// One corpus utterance. `durations` (frames per token, aligned with the IPA
// tokenization of `text`) may be absent for synthesis-only records.
struct UtteranceRecord {
  std::string id;
  Language language = Language::en;
  std::string text;
  std::string audio_path;
  std::vector<int> durations;
  bool has_durations = false;
};

// JSON-lines manifest. Fields: id, language ("en"/"zh"), text, audio_path,
// optional durations (array of positive integers). audio_path is stored as
// written (usually relative to the manifest's directory).
std::vector<UtteranceRecord> read_manifest(const std::string& path);
void write_manifest(const std::string& path,
                    const std::vector<UtteranceRecord>& records);

// Resolves a record's audio path against the directory of the manifest it
// came from (absolute paths pass through).
std::string resolve_audio_path(const std::string& manifest_path,
                               const std::string& audio_path);

}  // namespace lanstyle
