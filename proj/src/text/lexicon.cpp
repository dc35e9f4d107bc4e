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

#include "lanstyle/text/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lanstyle/common/errors.h"

namespace lanstyle {

namespace {

std::unordered_map<std::string, std::string> load_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mapping table " + path);
  std::unordered_map<std::string, std::string> map;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw IoError("malformed row '" + line + "' in " + path);
    }
    map[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return map;
}

}  // namespace

Lexicon Lexicon::load(const std::string& dict_path,
                      const std::string& arpabet_tsv,
                      const std::string& pinyin_initial_tsv,
                      const std::string& pinyin_final_tsv) {
  Lexicon lex;
  lex.arpabet_map_ = load_tsv(arpabet_tsv);
  lex.initial_map_ = load_tsv(pinyin_initial_tsv);
  lex.final_map_ = load_tsv(pinyin_final_tsv);

  std::ifstream in(dict_path);
  if (!in) throw IoError("cannot open lexicon " + dict_path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind(";;;", 0) == 0) continue;
    auto sep = line.find("  ");
    if (sep == std::string::npos) {
      throw IoError("malformed lexicon entry '" + line + "'");
    }
    std::string word = line.substr(0, sep);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    std::vector<std::string> phones;
    std::istringstream rest(line.substr(sep + 2));
    std::string phone;
    while (rest >> phone) phones.push_back(phone);
    if (phones.empty()) {
      throw IoError("lexicon entry without phones: '" + line + "'");
    }
    lex.dict_[word] = std::move(phones);
  }
  return lex;
}

const std::vector<std::string>* Lexicon::lookup(
    const std::string& word_lower) const {
  auto it = dict_.find(word_lower);
  return it == dict_.end() ? nullptr : &it->second;
}

const std::string& Lexicon::arpabet_to_ipa(const std::string& symbol) const {
  auto it = arpabet_map_.find(symbol);
  if (it == arpabet_map_.end()) {
    throw OutOfVocabularyError("unmapped ARPABET symbol " + symbol);
  }
  return it->second;
}

const std::string& Lexicon::initial_to_ipa(const std::string& initial) const {
  auto it = initial_map_.find(initial);
  if (it == initial_map_.end()) {
    throw MalformedPinyinError("unmapped initial '" + initial + "'");
  }
  return it->second;
}

const std::string& Lexicon::final_to_ipa(const std::string& final) const {
  auto it = final_map_.find(final);
  if (it == final_map_.end()) {
    throw MalformedPinyinError("unmapped final '" + final + "'");
  }
  return it->second;
}

PinyinSyllable Lexicon::split_pinyin(const std::string& syllable,
                                     int tone) const {
  if (syllable.empty()) throw MalformedPinyinError("empty syllable");
  PinyinSyllable out;
  out.tone = tone;

  // Longest-match over the two-character initials, then single characters.
  static const char* kTwoChar[] = {"zh", "ch", "sh"};
  std::string rest = syllable;
  for (const char* ini : kTwoChar) {
    if (rest.rfind(ini, 0) == 0) {
      out.initial = ini;
      rest = rest.substr(2);
      break;
    }
  }
  if (out.initial.empty() && !rest.empty()) {
    std::string one = rest.substr(0, 1);
    if (initial_map_.count(one) && rest.size() > 1) {
      out.initial = one;
      rest = rest.substr(1);
    }
  }
  if (rest.empty()) {
    throw MalformedPinyinError("syllable '" + syllable + "' has no final");
  }
  if (!has_final(rest)) {
    throw MalformedPinyinError("unknown final '" + rest + "' in syllable '" +
                               syllable + "'");
  }
  out.final = rest;
  return out;
}

std::vector<std::string> Lexicon::english_ipa_values() const {
  std::vector<std::string> out;
  out.reserve(arpabet_map_.size());
  for (const auto& [k, v] : arpabet_map_) out.push_back(v);
  return out;
}

std::vector<std::string> Lexicon::chinese_ipa_values() const {
  std::vector<std::string> out;
  out.reserve(initial_map_.size() + final_map_.size());
  for (const auto& [k, v] : initial_map_) out.push_back(v);
  for (const auto& [k, v] : final_map_) out.push_back(v);
  return out;
}

}  // namespace lanstyle
