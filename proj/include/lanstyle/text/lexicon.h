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

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace lanstyle {

// A parsed Mandarin syllable: optional initial, mandatory final (surface
// pinyin spellings, keys of the mapping tables) and a tone in 1..5.
struct PinyinSyllable {
  std::string initial;  // empty when the syllable has no initial
  std::string final;
  int tone = 5;
};

// English pronunciation lexicon plus the grapheme/phoneme mapping tables.
class Lexicon {
 public:
  // dict: CMU-format lexicon ("WORD  PH1 PH2 ...", ";;;" comments).
  // The TSVs are two-column symbol maps.
  static Lexicon load(const std::string& dict_path,
                      const std::string& arpabet_tsv,
                      const std::string& pinyin_initial_tsv,
                      const std::string& pinyin_final_tsv);

  // Uppercase-keyed ARPABET pronunciation with stress digits, or nullptr.
  const std::vector<std::string>* lookup(const std::string& word_lower) const;

  // symbol without stress digit -> IPA; throws OutOfVocabularyError if absent.
  const std::string& arpabet_to_ipa(const std::string& symbol) const;
  const std::string& initial_to_ipa(const std::string& initial) const;
  const std::string& final_to_ipa(const std::string& final) const;

  bool has_final(const std::string& final) const {
    return final_map_.count(final) > 0;
  }

  // Splits one toneless lowercase pinyin syllable (orthography already
  // normalized) into initial + final; throws MalformedPinyinError.
  PinyinSyllable split_pinyin(const std::string& syllable, int tone) const;

  std::vector<std::string> english_ipa_values() const;
  std::vector<std::string> chinese_ipa_values() const;

  size_t dict_size() const { return dict_.size(); }
  const std::unordered_map<std::string, std::vector<std::string>>& dict()
      const {
    return dict_;
  }

 private:
  std::unordered_map<std::string, std::vector<std::string>> dict_;
  std::unordered_map<std::string, std::string> arpabet_map_;
  std::unordered_map<std::string, std::string> initial_map_;
  std::unordered_map<std::string, std::string> final_map_;
};

}  // namespace lanstyle
