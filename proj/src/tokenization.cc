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

#include "standoff/tokenization.h"

#include <unicode/uchar.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "standoff/error.h"
#include "standoff/unicode_normalization.h"
#include "standoff/utf.h"

namespace standoff {
namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string Trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

}  // namespace

CrasisLexicon CrasisLexicon::Parse(std::string_view content) {
  CrasisLexicon lexicon;
  std::istringstream in{std::string(content)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 4) {
      throw Error(ErrorCode::kBadLexicon,
                  "crasis line " + std::to_string(line_no) + ": expected 4 " +
                      "tab-separated columns, got " +
                      std::to_string(fields.size()));
    }
    const std::string index = Trim(fields[3]);
    size_t split = 0;
    const auto [ptr, ec] =
        std::from_chars(index.data(), index.data() + index.size(), split);
    if (ec != std::errc() || ptr != index.data() + index.size()) {
      throw Error(ErrorCode::kBadLexicon, "crasis line " +
                                              std::to_string(line_no) +
                                              ": bad split index");
    }
    CrasisEntry entry;
    entry.first_form = NfcNormalize(Utf8ToUtf32(Trim(fields[1])));
    entry.second_form = NfcNormalize(Utf8ToUtf32(Trim(fields[2])));
    entry.split_index = split;
    try {
      lexicon.Add(NfcNormalize(Utf8ToUtf32(Trim(fields[0]))), std::move(entry));
    } catch (const Error& e) {
      throw Error(ErrorCode::kBadLexicon,
                  "crasis line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lexicon;
}

CrasisLexicon CrasisLexicon::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read lexicon " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

void CrasisLexicon::Add(std::u32string crasis_form, CrasisEntry entry) {
  if (entry.first_form.empty() || entry.second_form.empty()) {
    throw Error(ErrorCode::kBadLexicon, "empty crasis part");
  }
  if (entry.split_index < 1 || entry.split_index >= crasis_form.size()) {
    throw Error(ErrorCode::kBadLexicon,
                "split index " + std::to_string(entry.split_index) +
                    " outside [1, " + std::to_string(crasis_form.size()) +
                    ")");
  }
  entries_.insert_or_assign(std::move(crasis_form), std::move(entry));
}

const CrasisEntry* CrasisLexicon::Find(std::u32string_view word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

bool IsPunctuation(char32_t c) {
  switch (c) {
    case U'.': case U',': case U';': case U'·': case U'(': case U')':
    case U'[': case U']': case U'"': case U'«': case U'»': case U'—':
    case U'?': case U'!': case U':': case U'‘': case U'“': case U'”':
    case U'⟨': case U'⟩': case U'–': case U'…': case U'†':
      return true;
    default:
      return false;
  }
}

namespace {

// Calls fn(begin, end) for every graphic word [begin, end) of `text` and
// punct(i) for every punctuation character, in text order.
template <typename WordFn, typename PunctFn>
void ScanWords(const std::u32string& text, WordFn fn, PunctFn punct) {
  size_t i = 0;
  while (i < text.size()) {
    const char32_t c = text[i];
    if (IsWhitespace(c)) {
      ++i;
    } else if (IsPunctuation(c)) {
      punct(i);
      ++i;
    } else {
      const size_t begin = i;
      while (i < text.size() && !IsWhitespace(text[i]) &&
             !IsPunctuation(text[i])) {
        ++i;
      }
      fn(begin, i);
    }
  }
}

}  // namespace

std::vector<TokenSpan> Tokenize(const BaseText& base,
                                const CrasisLexicon& crasis) {
  std::vector<TokenSpan> tokens;
  const std::u32string& text = base.text;
  auto emit = [&](size_t begin, size_t length, std::u32string form) {
    TokenSpan token;
    token.id = "t" + std::to_string(tokens.size() + 1);
    token.start = begin + 1;
    token.length = length;
    token.surface = text.substr(begin, length);
    token.form = std::move(form);
    tokens.push_back(std::move(token));
  };
  ScanWords(
      text,
      [&](size_t begin, size_t end) {
        const std::u32string_view word(text.data() + begin, end - begin);
        if (const CrasisEntry* entry = crasis.Find(word)) {
          emit(begin, entry->split_index, entry->first_form);
          emit(begin + entry->split_index, word.size() - entry->split_index,
               entry->second_form);
        } else {
          emit(begin, end - begin, std::u32string(word));
        }
      },
      [&](size_t i) { emit(i, 1, std::u32string(1, text[i])); });
  return tokens;
}

namespace {

char32_t LowerBase(char32_t c) {
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(BaseLetter(c))));
}

bool FormsInitialDiphthong(char32_t first, char32_t second) {
  const char32_t a = LowerBase(first);
  const char32_t b = LowerBase(second);
  if (b == U'ι') return a == U'α' || a == U'ε' || a == U'ο' || a == U'υ';
  if (b == U'υ') return a == U'α' || a == U'ε' || a == U'ο' || a == U'η';
  return false;
}

bool IsCrasisCandidate(std::u32string_view word) {
  // Letters of the word with their positions, combining marks folded into
  // the preceding letter.
  std::vector<size_t> letters;
  for (size_t i = 0; i < word.size(); ++i) {
    const int8_t type = u_charType(static_cast<UChar32>(word[i]));
    const bool mark = type == U_NON_SPACING_MARK ||
                      type == U_COMBINING_SPACING_MARK;
    if (!mark || letters.empty()) letters.push_back(i);
  }
  for (size_t k = 1; k < letters.size(); ++k) {
    const size_t pos = letters[k];
    const size_t end = k + 1 < letters.size() ? letters[k + 1] : word.size();
    if (!IsGreekVowel(word[pos])) continue;
    bool psili = false;
    for (size_t i = pos; i < end; ++i) {
      if (HasCombiningCommaAbove(word[i])) psili = true;
    }
    if (!psili) continue;
    if (k == 1 && IsGreekVowel(word[letters[0]]) &&
        FormsInitialDiphthong(word[letters[0]], word[pos])) {
      continue;
    }
    return true;
  }
  return false;
}

}  // namespace

std::vector<std::u32string> DetectCrasisCandidates(const BaseText& base) {
  std::vector<std::u32string> candidates;
  std::set<std::u32string, std::less<>> seen;
  ScanWords(
      base.text,
      [&](size_t begin, size_t end) {
        const std::u32string_view word(base.text.data() + begin, end - begin);
        if (seen.find(word) != seen.end()) return;
        if (IsCrasisCandidate(word)) {
          seen.emplace(word);
          candidates.emplace_back(word);
        }
      },
      [](size_t) {});
  return candidates;
}

}  // namespace standoff
