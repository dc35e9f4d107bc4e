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

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lanstyle/text/inventory.h"
#include "lanstyle/text/lexicon.h"

namespace lanstyle {

// Parallel phoneme/style id rows; always the same length. Sequences produced
// by the tokenizer start and end with the separator and contain no pads.
struct TokenSequence {
  std::vector<int> phoneme_ids;
  std::vector<int> style_ids;

  size_t size() const { return phoneme_ids.size(); }
};

// Text normalization shared by both schemes: ASCII case fold, punctuation
// stripped (apostrophes dropped in place, everything else becomes a word
// break), whitespace collapsed. Non-ASCII bytes pass through untouched.
std::string normalize_text(const std::string& text);

// 0..999999 -> space-separated English words; throws UnknownCharacterError
// beyond that range.
std::string number_to_words(long value);

class Tokenizer {
 public:
  Tokenizer(Scheme scheme, PhonemeInventory inventory, StyleInventory styles,
            std::shared_ptr<const Lexicon> lexicon);

  // Loads the inventory for `scheme` plus the shared lexicon/mapping tables
  // from a data directory with the standard layout.
  static Tokenizer load(const std::string& data_dir, Scheme scheme);

  TokenSequence tokenize(const std::string& text, Language lang) const;

  // Space-separated symbol row and style digit row.
  std::pair<std::string, std::string> render(const TokenSequence& seq) const;

  const PhonemeInventory& inventory() const { return inventory_; }
  const StyleInventory& styles() const { return styles_; }
  const Lexicon& lexicon() const { return *lexicon_; }
  Scheme scheme() const { return scheme_; }

 private:
  TokenSequence tokenize_alphabet(const std::string& text, Language lang) const;
  TokenSequence tokenize_ipa(const std::string& text, Language lang) const;
  std::vector<std::string> prepare_words(const std::string& text,
                                         Language lang) const;

  Scheme scheme_;
  PhonemeInventory inventory_;
  StyleInventory styles_;
  std::shared_ptr<const Lexicon> lexicon_;
};

}  // namespace lanstyle
