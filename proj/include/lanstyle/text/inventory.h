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
#include <unordered_map>
#include <vector>

namespace lanstyle {

enum class Language { en, zh };
enum class Scheme { alphabet, ipa };

enum class LanguageTag { shared, english_only, chinese_only, separator, pad };

std::string to_string(LanguageTag tag);

// Symbol table for one tokenization scheme. Loaded from a text file with one
// symbol per line; the first line is the pad symbol, the second the word
// separator "|". Ids are line positions. rank() numbers the speakable
// non-separator symbols from 0 in file order.
class PhonemeInventory {
 public:
  static PhonemeInventory load(const std::string& path, Scheme scheme);

  int id_of(const std::string& symbol) const;       // -1 if absent
  const std::string& symbol_of(int id) const;
  bool contains(const std::string& symbol) const { return id_of(symbol) >= 0; }

  int size() const { return static_cast<int>(symbols_.size()); }
  int pad_id() const { return 0; }
  int separator_id() const { return 1; }
  bool is_speakable(int id) const { return id >= 2; }
  // Position among the speakable non-separator symbols, in file order.
  int rank_of(int id) const { return id - 2; }
  int num_speakable() const { return size() - 2; }

  Scheme scheme() const { return scheme_; }

  LanguageTag tag_of(int id) const { return tags_[id]; }
  // Assigns shared / english-only / chinese-only tags from producibility:
  // a symbol is shared iff it appears as a value in both an English and a
  // Chinese mapping table.
  void assign_tags(const std::vector<std::string>& english_values,
                   const std::vector<std::string>& chinese_values);

 private:
  Scheme scheme_ = Scheme::ipa;
  std::vector<std::string> symbols_;
  std::vector<LanguageTag> tags_;
  std::unordered_map<std::string, int> index_;
};

// Fixed style vocabulary: pad, the neutral "none" marker, five tones and
// three stress levels. Tones render as digits 1-5, stresses as 0-2, none
// as 0 (same display digit as stress 0, distinct id).
class StyleInventory {
 public:
  StyleInventory();

  int pad_id() const { return 0; }
  int none_id() const { return 1; }
  int tone_id(int tone) const;      // tone in 1..5
  int stress_id(int stress) const;  // stress in 0..2

  int size() const { return 10; }
  const std::string& name_of(int id) const;
  char display_digit(int id) const;

  bool is_tone(int id) const { return id >= 2 && id <= 6; }
  bool is_stress(int id) const { return id >= 7 && id <= 9; }
  int tone_value(int id) const { return id - 1; }     // tone ids 2..6 -> 1..5
  int stress_value(int id) const { return id - 7; }   // stress ids 7..9 -> 0..2

 private:
  std::vector<std::string> names_;
  std::vector<char> digits_;
};

}  // namespace lanstyle
