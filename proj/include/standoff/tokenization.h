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

#ifndef STANDOFF_TOKENIZATION_H_
#define STANDOFF_TOKENIZATION_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "standoff/base_text.h"

namespace standoff {

// A morphosyntactic token. `start` is a 1-based offset into the base text;
// `surface` is exactly the covered substring. `form` equals `surface`
// except for the parts of a crasis word, which carry the restored words.
struct TokenSpan {
  std::string id;  // "t" + ordinal
  size_t start = 0;
  size_t length = 0;
  std::u32string surface;
  std::u32string form;

  bool operator==(const TokenSpan&) const = default;
};

struct CrasisEntry {
  std::u32string first_form;
  std::u32string second_form;
  // Number of characters of the crasis word that belong to the first part.
  size_t split_index = 0;

  bool operator==(const CrasisEntry&) const = default;
};

// Crasis words split into two tokens.
//
// File format: UTF-8, tab-separated, one entry per line:
//   <crasis form> TAB <first form> TAB <second form> TAB <split index>
// where the split index counts the characters (code points, after NFC) of
// the first part. Lines starting with '#' and blank lines are ignored.
class CrasisLexicon {
 public:
  using EntryMap = std::map<std::u32string, CrasisEntry, std::less<>>;

  // Throws Error(kBadLexicon) on a malformed line.
  static CrasisLexicon Parse(std::string_view content);
  static CrasisLexicon Load(const std::string& path);

  // Throws Error(kBadLexicon) when the entry violates split-index bounds.
  void Add(std::u32string crasis_form, CrasisEntry entry);
  const CrasisEntry* Find(std::u32string_view word) const;
  const EntryMap& entries() const { return entries_; }

 private:
  EntryMap entries_;
};

// Characters that form a token of their own.
bool IsPunctuation(char32_t c);

// Splits the base text at whitespace, detaches every punctuation character
// as its own token, and splits lexicon crasis words in two.
std::vector<TokenSpan> Tokenize(const BaseText& base,
                                const CrasisLexicon& crasis);

// Graphic words with a smooth breathing or coronis on a non-initial vowel,
// each listed once in order of first occurrence. The second vowel of a
// word-initial diphthong (αὐτός, εὐθύς) does not count.
std::vector<std::u32string> DetectCrasisCandidates(const BaseText& base);

}  // namespace standoff

#endif  // STANDOFF_TOKENIZATION_H_
