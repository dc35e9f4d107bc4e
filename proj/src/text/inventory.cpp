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

#include "lanstyle/text/inventory.h"

#include <fstream>
#include <unordered_set>

#include "lanstyle/common/errors.h"

namespace lanstyle {

std::string to_string(LanguageTag tag) {
  switch (tag) {
    case LanguageTag::shared: return "shared";
    case LanguageTag::english_only: return "english-only";
    case LanguageTag::chinese_only: return "chinese-only";
    case LanguageTag::separator: return "separator";
    case LanguageTag::pad: return "pad";
  }
  return "unknown";
}

PhonemeInventory PhonemeInventory::load(const std::string& path,
                                        Scheme scheme) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open inventory file " + path);

  PhonemeInventory inv;
  inv.scheme_ = scheme;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (inv.index_.count(line)) {
      throw IoError("duplicate inventory symbol '" + line + "' in " + path);
    }
    inv.index_[line] = static_cast<int>(inv.symbols_.size());
    inv.symbols_.push_back(line);
  }
  if (inv.symbols_.size() < 3) {
    throw IoError("inventory file " + path + " too small");
  }
  if (inv.symbols_[1] != "|") {
    throw IoError("inventory file " + path +
                  " must list the separator '|' second");
  }
  inv.tags_.assign(inv.symbols_.size(), LanguageTag::shared);
  inv.tags_[0] = LanguageTag::pad;
  inv.tags_[1] = LanguageTag::separator;
  return inv;
}

int PhonemeInventory::id_of(const std::string& symbol) const {
  auto it = index_.find(symbol);
  return it == index_.end() ? -1 : it->second;
}

const std::string& PhonemeInventory::symbol_of(int id) const {
  if (id < 0 || id >= size()) {
    throw IdOutOfRangeError("phoneme id " + std::to_string(id));
  }
  return symbols_[id];
}

void PhonemeInventory::assign_tags(
    const std::vector<std::string>& english_values,
    const std::vector<std::string>& chinese_values) {
  std::unordered_set<std::string> en(english_values.begin(),
                                     english_values.end());
  std::unordered_set<std::string> zh(chinese_values.begin(),
                                     chinese_values.end());
  for (int id = 2; id < size(); ++id) {
    bool in_en = en.count(symbols_[id]) > 0;
    bool in_zh = zh.count(symbols_[id]) > 0;
    if (in_en && in_zh) {
      tags_[id] = LanguageTag::shared;
    } else if (in_zh) {
      tags_[id] = LanguageTag::chinese_only;
    } else {
      // Symbols produced by neither table default to the English side; the
      // shipped tables produce every symbol, so this arm is a fallback.
      tags_[id] = LanguageTag::english_only;
    }
  }
}

StyleInventory::StyleInventory() {
  names_ = {"<pad>",   "none",    "tone1",   "tone2",   "tone3",
            "tone4",   "tone5",   "stress0", "stress1", "stress2"};
  digits_ = {'0', '0', '1', '2', '3', '4', '5', '0', '1', '2'};
}

int StyleInventory::tone_id(int tone) const {
  if (tone < 1 || tone > 5) {
    throw IdOutOfRangeError("tone " + std::to_string(tone));
  }
  return 1 + tone;
}

int StyleInventory::stress_id(int stress) const {
  if (stress < 0 || stress > 2) {
    throw IdOutOfRangeError("stress " + std::to_string(stress));
  }
  return 7 + stress;
}

const std::string& StyleInventory::name_of(int id) const {
  if (id < 0 || id >= size()) {
    throw IdOutOfRangeError("style id " + std::to_string(id));
  }
  return names_[id];
}

char StyleInventory::display_digit(int id) const {
  if (id < 0 || id >= size()) {
    throw IdOutOfRangeError("style id " + std::to_string(id));
  }
  return digits_[id];
}

}  // namespace lanstyle
