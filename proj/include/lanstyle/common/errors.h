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

#include <stdexcept>
#include <string>

namespace lanstyle {

// Error taxonomy. The CLI maps these onto process exit codes:
//   InputError -> 2, ModelError -> 3, IoError -> 4.

class InputError : public std::runtime_error {
 public:
  InputError(const std::string& kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(kind) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class EmptyInputError : public InputError {
 public:
  explicit EmptyInputError(const std::string& msg)
      : InputError("EmptyInput", msg) {}
};

class UnknownCharacterError : public InputError {
 public:
  explicit UnknownCharacterError(const std::string& msg)
      : InputError("UnknownCharacter", msg) {}
};

class OutOfVocabularyError : public InputError {
 public:
  explicit OutOfVocabularyError(const std::string& word)
      : InputError("OutOfVocabularyWord", word), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class MalformedPinyinError : public InputError {
 public:
  explicit MalformedPinyinError(const std::string& msg)
      : InputError("MalformedPinyin", msg) {}
};

class DurationMismatchError : public InputError {
 public:
  explicit DurationMismatchError(const std::string& msg)
      : InputError("DurationMismatch", msg) {}
};

class InputTooShortError : public InputError {
 public:
  explicit InputTooShortError(const std::string& msg)
      : InputError("InputTooShort", msg) {}
};

class MissingFeatureError : public InputError {
 public:
  explicit MissingFeatureError(const std::string& msg)
      : InputError("MissingFeature", msg) {}
};

class ModelError : public std::runtime_error {
 public:
  ModelError(const std::string& kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(kind) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class ShapeMismatchError : public ModelError {
 public:
  explicit ShapeMismatchError(const std::string& msg)
      : ModelError("ShapeMismatch", msg) {}
};

class IdOutOfRangeError : public ModelError {
 public:
  explicit IdOutOfRangeError(const std::string& msg)
      : ModelError("IdOutOfRange", msg) {}
};

class ConfigError : public ModelError {
 public:
  explicit ConfigError(const std::string& msg)
      : ModelError("InvalidConfig", msg) {}
};

class KindMismatchError : public ModelError {
 public:
  explicit KindMismatchError(const std::string& msg)
      : ModelError("KindMismatch", msg) {}
};

class NaNLossError : public ModelError {
 public:
  NaNLossError(long step, const std::string& msg)
      : ModelError("NaNLoss", "step " + std::to_string(step) + ": " + msg),
        step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg)
      : std::runtime_error("Io: " + msg) {}
};

}  // namespace lanstyle
