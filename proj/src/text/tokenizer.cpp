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

#include "lanstyle/text/tokenizer.h"

#include <array>
#include <cctype>
#include <sstream>

#include "lanstyle/common/errors.h"

namespace lanstyle {

namespace {

constexpr const char* kUmlautU = "\xc3\xbc";  // ü

bool all_ascii_digits(const std::string& w) {
  if (w.empty()) return false;
  for (unsigned char c : w) {
    if (!std::isdigit(c)) return false;
  }
  return true;
}

std::string ones_word(int n) {
  static const std::array<const char*, 20> words = {
      "zero",    "one",     "two",       "three",    "four",
      "five",    "six",     "seven",     "eight",    "nine",
      "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
      "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
  return words[n];
}

std::string tens_word(int n) {
  static const std::array<const char*, 10> words = {
      "",      "",      "twenty",  "thirty", "forty",
      "fifty", "sixty", "seventy", "eighty", "ninety"};
  return words[n];
}

void append_word(std::string& out, const std::string& w) {
  if (!out.empty()) out += ' ';
  out += w;
}

std::string sub_thousand_to_words(int n) {
  std::string out;
  if (n >= 100) {
    append_word(out, ones_word(n / 100));
    append_word(out, "hundred");
    n %= 100;
    if (n == 0) return out;
  }
  if (n >= 20) {
    append_word(out, tens_word(n / 10));
    n %= 10;
    if (n == 0) return out;
    append_word(out, ones_word(n));
  } else {
    append_word(out, ones_word(n));
  }
  return out;
}

// Rewrites standalone-pinyin orthography to the surface forms listed in the
// final table: y/w spellings, v for ü, and u after j/q/x.
std::string normalize_pinyin_orthography(std::string s) {
  for (auto pos = s.find('v'); pos != std::string::npos; pos = s.find('v')) {
    s.replace(pos, 1, kUmlautU);
  }
  auto starts = [&](const char* p) { return s.rfind(p, 0) == 0; };
  if (starts("yu")) {
    s = std::string(kUmlautU) + s.substr(2);
  } else if (starts("yi")) {
    s = s.substr(1);
  } else if (starts("you")) {
    s = "iu";
  } else if (starts("y")) {
    s = "i" + s.substr(1);
  } else if (starts("wu")) {
    s = s.substr(1);
  } else if (starts("wei")) {
    s = "ui";
  } else if (starts("wen")) {
    s = "un";
  } else if (starts("w")) {
    s = "u" + s.substr(1);
  }
  if (s.size() > 1 && (s[0] == 'j' || s[0] == 'q' || s[0] == 'x') &&
      s[1] == 'u') {
    s = s.substr(0, 1) + kUmlautU + s.substr(2);
  }
  return s;
}

}  // namespace

std::string normalize_text(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (c >= 0x80) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(c);
    } else if (std::isalnum(c)) {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(c));
    } else if (c == '\'') {
      // dropped in place: "don't" -> "dont"
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::string number_to_words(long value) {
  if (value < 0 || value > 999999) {
    throw UnknownCharacterError("number out of range: " +
                                std::to_string(value));
  }
  if (value == 0) return "zero";
  std::string out;
  if (value >= 1000) {
    append_word(out, sub_thousand_to_words(static_cast<int>(value / 1000)));
    append_word(out, "thousand");
    value %= 1000;
  }
  if (value > 0) {
    append_word(out, sub_thousand_to_words(static_cast<int>(value)));
  }
  return out;
}

Tokenizer::Tokenizer(Scheme scheme, PhonemeInventory inventory,
                     StyleInventory styles,
                     std::shared_ptr<const Lexicon> lexicon)
    : scheme_(scheme),
      inventory_(std::move(inventory)),
      styles_(std::move(styles)),
      lexicon_(std::move(lexicon)) {}

Tokenizer Tokenizer::load(const std::string& data_dir, Scheme scheme) {
  auto lex = std::make_shared<Lexicon>(
      Lexicon::load(data_dir + "/lexicon_en.dict",
                    data_dir + "/arpabet_to_ipa.tsv",
                    data_dir + "/pinyin_initial_to_ipa.tsv",
                    data_dir + "/pinyin_final_to_ipa.tsv"));
  std::string inv_file = scheme == Scheme::ipa ? "/ipa_phonemes.txt"
                                               : "/alphabet.txt";
  auto inv = PhonemeInventory::load(data_dir + inv_file, scheme);
  if (scheme == Scheme::ipa) {
    inv.assign_tags(lex->english_ipa_values(), lex->chinese_ipa_values());
  }
  return Tokenizer(scheme, std::move(inv), StyleInventory(), std::move(lex));
}

std::vector<std::string> Tokenizer::prepare_words(const std::string& text,
                                                  Language lang) const {
  std::string norm = normalize_text(text);
  std::vector<std::string> words;
  std::istringstream iss(norm);
  std::string w;
  while (iss >> w) {
    if (lang == Language::en && all_ascii_digits(w)) {
      if (w.size() > 6) {
        throw UnknownCharacterError("number too large: " + w);
      }
      std::istringstream expanded(number_to_words(std::stol(w)));
      std::string ew;
      while (expanded >> ew) words.push_back(ew);
    } else {
      words.push_back(w);
    }
  }
  if (words.empty()) {
    throw EmptyInputError("no speakable content in input");
  }
  return words;
}

TokenSequence Tokenizer::tokenize(const std::string& text,
                                  Language lang) const {
  return scheme_ == Scheme::alphabet ? tokenize_alphabet(text, lang)
                                     : tokenize_ipa(text, lang);
}

TokenSequence Tokenizer::tokenize_alphabet(const std::string& text,
                                           Language lang) const {
  std::vector<std::string> words = prepare_words(text, lang);
  TokenSequence seq;
  int none = styles_.none_id();
  seq.phoneme_ids.push_back(inventory_.separator_id());
  seq.style_ids.push_back(none);
  for (std::string w : words) {
    if (lang == Language::zh) {
      if (!w.empty() && w.back() >= '1' && w.back() <= '5') w.pop_back();
      // ü has no letter of its own in the 26-character row; spell it v.
      for (auto pos = w.find(kUmlautU); pos != std::string::npos;
           pos = w.find(kUmlautU)) {
        w.replace(pos, 2, "v");
      }
    }
    if (w.empty()) {
      throw UnknownCharacterError("word reduced to nothing in '" + text + "'");
    }
    size_t i = 0;
    while (i < w.size()) {
      std::string ch = w.substr(i, 1);
      int id = inventory_.id_of(ch);
      if (id < 0) {
        throw UnknownCharacterError("'" + ch + "' in word '" + w + "'");
      }
      seq.phoneme_ids.push_back(id);
      seq.style_ids.push_back(none);
      ++i;
    }
    seq.phoneme_ids.push_back(inventory_.separator_id());
    seq.style_ids.push_back(none);
  }
  return seq;
}

TokenSequence Tokenizer::tokenize_ipa(const std::string& text,
                                      Language lang) const {
  std::vector<std::string> words = prepare_words(text, lang);
  TokenSequence seq;
  int none = styles_.none_id();
  auto push = [&](const std::string& symbol, int style) {
    int id = inventory_.id_of(symbol);
    if (id < 0) {
      throw UnknownCharacterError("IPA symbol '" + symbol +
                                  "' missing from inventory");
    }
    seq.phoneme_ids.push_back(id);
    seq.style_ids.push_back(style);
  };
  seq.phoneme_ids.push_back(inventory_.separator_id());
  seq.style_ids.push_back(none);

  for (const std::string& w : words) {
    if (lang == Language::en) {
      const auto* phones = lexicon_->lookup(w);
      if (!phones) throw OutOfVocabularyError(w);
      for (const std::string& phone : *phones) {
        std::string base = phone;
        int style = none;
        if (!base.empty() && base.back() >= '0' && base.back() <= '2' &&
            base.size() > 1) {
          style = styles_.stress_id(base.back() - '0');
          base.pop_back();
        }
        push(lexicon_->arpabet_to_ipa(base), style);
      }
    } else {
      std::string syl = w;
      int tone = 5;  // unmarked syllables read as the neutral tone
      if (!syl.empty() && syl.back() >= '0' && syl.back() <= '9') {
        char d = syl.back();
        if (d < '1' || d > '5') {
          throw MalformedPinyinError("tone digit '" + std::string(1, d) +
                                     "' in '" + w + "'");
        }
        tone = d - '0';
        syl.pop_back();
      }
      for (char c : syl) {
        if (c >= '0' && c <= '9') {
          throw MalformedPinyinError("digit inside syllable '" + w + "'");
        }
      }
      syl = normalize_pinyin_orthography(syl);
      PinyinSyllable parts = lexicon_->split_pinyin(syl, tone);
      if (!parts.initial.empty()) {
        push(lexicon_->initial_to_ipa(parts.initial), none);
      }
      push(lexicon_->final_to_ipa(parts.final), styles_.tone_id(parts.tone));
    }
    seq.phoneme_ids.push_back(inventory_.separator_id());
    seq.style_ids.push_back(none);
  }
  return seq;
}

std::pair<std::string, std::string> Tokenizer::render(
    const TokenSequence& seq) const {
  if (seq.phoneme_ids.size() != seq.style_ids.size()) {
    throw ShapeMismatchError("phoneme/style rows differ in length");
  }
  std::string phones, styles;
  for (size_t i = 0; i < seq.phoneme_ids.size(); ++i) {
    if (i) {
      phones += ' ';
      styles += ' ';
    }
    phones += inventory_.symbol_of(seq.phoneme_ids[i]);
    styles += styles_.display_digit(seq.style_ids[i]);
  }
  return {phones, styles};
}

}  // namespace lanstyle
