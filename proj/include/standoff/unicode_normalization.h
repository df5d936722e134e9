// Copyright 2026 The Standoff Authors.
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

#ifndef STANDOFF_UNICODE_NORMALIZATION_H_
#define STANDOFF_UNICODE_NORMALIZATION_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "standoff/base_text.h"

namespace standoff {

inline constexpr char32_t kModifierApostrophe = U'ʼ';
inline constexpr char32_t kCombiningCommaAbove = U'̓';
inline constexpr char32_t kGreekKoronis = U'᾽';
inline constexpr char32_t kAsciiApostrophe = U'\'';
inline constexpr char32_t kRightSingleQuote = U'’';

// Common elided word forms. Every entry is NFC and ends in U+02BC; the file
// may spell the final apostrophe with any of U+0027, U+2019, U+02BC, U+1FBD,
// U+1FBF or U+0313.
//
// File format: UTF-8, one word form per line, '#' starts a comment line,
// surrounding whitespace ignored.
class ElisionLexicon {
 public:
  ElisionLexicon() = default;

  // Throws Error(kBadLexicon) for an entry without a final apostrophe or
  // with an empty stem.
  static ElisionLexicon Parse(std::string_view content);
  static ElisionLexicon Load(const std::string& path);
  static ElisionLexicon FromEntries(const std::vector<std::u32string>& forms);

  // Exact match on the stem (the form without its apostrophe).
  bool ContainsStem(std::u32string_view stem) const {
    return stems_.count(std::u32string(stem)) != 0;
  }
  const std::set<std::u32string>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

 private:
  void Add(std::u32string form, size_t line);

  std::set<std::u32string> entries_;
  std::unordered_set<std::u32string> stems_;
};

struct NormalizationReport {
  // NFC chunks (a starter with its combining marks) rewritten by NFC.
  size_t nfc_changes = 0;
  // Original code point -> number of replacements by U+02BC.
  std::map<char32_t, size_t> apostrophe_substitutions;
  // Word-final U+0027/U+2019 left alone because the word is not elided.
  size_t untouched_ambiguous = 0;

  size_t TotalSubstitutions() const;
  void Merge(const NormalizationReport& other);
  // One "key=count" line per statistic, in a fixed order.
  std::string ToText() const;
};

// Unicode Normalization Form C, delegated to ICU.
std::u32string NfcNormalize(std::u32string_view text);

// Replaces apostrophe look-alikes with U+02BC, one character for one:
//  - U+1FBD everywhere;
//  - U+0313 unless it sits on a vowel or rho (where it is a smooth breathing
//    that NFC could not compose);
//  - word-final U+0027 and U+2019 when stem + apostrophe is in the lexicon.
// `text` must already be NFC.
std::pair<std::u32string, NormalizationReport> NormalizeApostrophes(
    std::u32string_view text, const ElisionLexicon& lexicon);

// NFC followed by apostrophe unification over a BaseText, rewriting the
// source map so every character still points at the source characters it
// was produced from.
BaseText NormalizeBaseText(const BaseText& base, const ElisionLexicon& lexicon,
                           NormalizationReport* report = nullptr);

// Letter or combining mark: the characters that make up a graphic word.
bool IsWordCharacter(char32_t c);

// The first code point of the canonical decomposition of `c`.
char32_t BaseLetter(char32_t c);
bool IsGreekVowel(char32_t c);
// True for U+0313 itself and for precomposed letters whose canonical
// decomposition contains it (smooth breathing / coronis).
bool HasCombiningCommaAbove(char32_t c);

}  // namespace standoff

#endif  // STANDOFF_UNICODE_NORMALIZATION_H_
