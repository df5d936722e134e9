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

#include "standoff/unicode_normalization.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "standoff/error.h"
#include "standoff/utf.h"

namespace standoff {
namespace {

const icu::Normalizer2& Nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("ICU NFC unavailable: ") +
                             u_errorName(status));
  }
  return *nfc;
}

const icu::Normalizer2& Nfd() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("ICU NFD unavailable: ") +
                             u_errorName(status));
  }
  return *nfd;
}

std::u32string IcuNormalize(const icu::Normalizer2& form,
                            std::u32string_view text) {
  const icu::UnicodeString in = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(text.data()),
      static_cast<int32_t>(text.size()));
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString out = form.normalize(in, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(std::string("ICU normalization failed: ") +
                             u_errorName(status));
  }
  std::u32string result(static_cast<size_t>(out.countChar32()), U'\0');
  UErrorCode convert = U_ZERO_ERROR;
  out.toUTF32(reinterpret_cast<UChar32*>(result.data()),
              static_cast<int32_t>(result.size()), convert);
  return result;
}

bool IsApostropheLike(char32_t c) {
  return c == kAsciiApostrophe || c == kRightSingleQuote ||
         c == kModifierApostrophe || c == kGreekKoronis || c == U'᾿' ||
         c == kCombiningCommaAbove;
}

bool IsMark(char32_t c) {
  const int8_t type = u_charType(static_cast<UChar32>(c));
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK ||
         type == U_ENCLOSING_MARK;
}

// True when the chunk is already NFC by the quick-check rule: every char is
// NFC_QC=Yes and nonzero combining classes never decrease.
bool QuickCheckYes(std::u32string_view chunk) {
  uint8_t last_ccc = 0;
  for (char32_t c : chunk) {
    const auto uc = static_cast<UChar32>(c);
    if (u_getIntPropertyValue(uc, UCHAR_NFC_QUICK_CHECK) != UNORM_YES) {
      return false;
    }
    const uint8_t ccc = u_getCombiningClass(uc);
    if (ccc != 0 && ccc < last_ccc) return false;
    last_ccc = ccc;
  }
  return true;
}

}  // namespace

bool IsWordCharacter(char32_t c) {
  return u_isalpha(static_cast<UChar32>(c)) || IsMark(c) ||
         c == kModifierApostrophe;
}

char32_t BaseLetter(char32_t c) {
  icu::UnicodeString decomposition;
  if (!Nfd().getDecomposition(static_cast<UChar32>(c), decomposition)) {
    return c;
  }
  return static_cast<char32_t>(decomposition.char32At(0));
}

bool IsGreekVowel(char32_t c) {
  switch (BaseLetter(c)) {
    case U'α': case U'ε': case U'η': case U'ι': case U'ο': case U'υ':
    case U'ω': case U'Α': case U'Ε': case U'Η': case U'Ι': case U'Ο':
    case U'Υ': case U'Ω':
      return true;
    default:
      return false;
  }
}

bool HasCombiningCommaAbove(char32_t c) {
  if (c == kCombiningCommaAbove) return true;
  icu::UnicodeString decomposition;
  if (!Nfd().getDecomposition(static_cast<UChar32>(c), decomposition)) {
    return false;
  }
  return decomposition.indexOf(static_cast<UChar32>(kCombiningCommaAbove)) >= 0;
}

void ElisionLexicon::Add(std::u32string form, size_t line) {
  form = NfcNormalize(form);
  if (form.empty() || !IsApostropheLike(form.back())) {
    throw Error(ErrorCode::kBadLexicon,
                "line " + std::to_string(line) + ": '" + Utf32ToUtf8(form) +
                    "' does not end in an apostrophe");
  }
  form.back() = kModifierApostrophe;
  if (form.size() < 2) {
    throw Error(ErrorCode::kBadLexicon,
                "line " + std::to_string(line) + ": empty stem");
  }
  stems_.insert(form.substr(0, form.size() - 1));
  entries_.insert(std::move(form));
}

ElisionLexicon ElisionLexicon::Parse(std::string_view content) {
  ElisionLexicon lexicon;
  std::istringstream in{std::string(content)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::u32string form = Utf8ToUtf32(line);
    while (!form.empty() && IsWhitespace(form.back())) form.pop_back();
    size_t start = 0;
    while (start < form.size() && IsWhitespace(form[start])) ++start;
    form.erase(0, start);
    if (form.empty() || form.front() == U'#') continue;
    lexicon.Add(std::move(form), line_no);
  }
  return lexicon;
}

ElisionLexicon ElisionLexicon::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read lexicon " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

ElisionLexicon ElisionLexicon::FromEntries(
    const std::vector<std::u32string>& forms) {
  ElisionLexicon lexicon;
  size_t n = 0;
  for (const auto& form : forms) lexicon.Add(form, ++n);
  return lexicon;
}

size_t NormalizationReport::TotalSubstitutions() const {
  size_t total = 0;
  for (const auto& [cp, count] : apostrophe_substitutions) total += count;
  return total;
}

void NormalizationReport::Merge(const NormalizationReport& other) {
  nfc_changes += other.nfc_changes;
  untouched_ambiguous += other.untouched_ambiguous;
  for (const auto& [cp, count] : other.apostrophe_substitutions) {
    apostrophe_substitutions[cp] += count;
  }
}

std::string NormalizationReport::ToText() const {
  std::ostringstream out;
  out << "nfc_changes=" << nfc_changes << '\n';
  for (char32_t cp : {kCombiningCommaAbove, kGreekKoronis, kAsciiApostrophe,
                      kRightSingleQuote}) {
    char name[16];
    std::snprintf(name, sizeof(name), "U+%04X", static_cast<unsigned>(cp));
    const auto it = apostrophe_substitutions.find(cp);
    out << "apostrophe_substitutions." << name << '='
        << (it == apostrophe_substitutions.end() ? 0 : it->second) << '\n';
  }
  out << "untouched_ambiguous=" << untouched_ambiguous << '\n';
  return out.str();
}

std::u32string NfcNormalize(std::u32string_view text) {
  return IcuNormalize(Nfc(), text);
}

std::pair<std::u32string, NormalizationReport> NormalizeApostrophes(
    std::u32string_view text, const ElisionLexicon& lexicon) {
  std::u32string out(text);
  NormalizationReport report;
  auto substitute = [&](size_t i) {
    ++report.apostrophe_substitutions[text[i]];
    out[i] = kModifierApostrophe;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (c == kGreekKoronis) {
      substitute(i);
    } else if (c == kCombiningCommaAbove) {
      // Find the base this mark is attached to, skipping other marks.
      size_t b = i;
      while (b > 0 && IsMark(text[b - 1])) --b;
      const bool on_vowel =
          b > 0 && (IsGreekVowel(text[b - 1]) || BaseLetter(text[b - 1]) == U'ρ' ||
                    BaseLetter(text[b - 1]) == U'Ρ');
      if (!on_vowel) substitute(i);
    } else if (c == kAsciiApostrophe || c == kRightSingleQuote) {
      const bool word_final =
          i + 1 == text.size() || !IsWordCharacter(text[i + 1]);
      if (!word_final || i == 0 || !IsWordCharacter(text[i - 1])) continue;
      size_t start = i;
      while (start > 0 && IsWordCharacter(text[start - 1])) --start;
      if (lexicon.ContainsStem(text.substr(start, i - start))) {
        substitute(i);
      } else {
        ++report.untouched_ambiguous;
      }
    }
  }
  return {std::move(out), std::move(report)};
}

BaseText NormalizeBaseText(const BaseText& base, const ElisionLexicon& lexicon,
                           NormalizationReport* report) {
  const icu::Normalizer2& nfc = Nfc();
  const std::vector<CharOrigin> origins = ExpandSourceMap(base);
  uint32_t next_group = 1;
  for (const CharOrigin& o : origins) next_group = std::max(next_group, o.group + 1);

  std::u32string text;
  std::vector<CharOrigin> new_origins;
  text.reserve(base.text.size());
  new_origins.reserve(origins.size());
  size_t nfc_changes = 0;

  const std::u32string& in = base.text;
  size_t i = 0;
  while (i < in.size()) {
    size_t j = i + 1;
    while (j < in.size() && !nfc.hasBoundaryBefore(static_cast<UChar32>(in[j]))) {
      ++j;
    }
    const std::u32string_view chunk(in.data() + i, j - i);
    if ((j - i == 1 && nfc.isInert(static_cast<UChar32>(in[i]))) ||
        QuickCheckYes(chunk)) {
      text.append(chunk);
      new_origins.insert(new_origins.end(), origins.begin() + i,
                         origins.begin() + j);
    } else {
      std::u32string normalized = IcuNormalize(nfc, chunk);
      if (normalized == chunk) {
        text.append(chunk);
        new_origins.insert(new_origins.end(), origins.begin() + i,
                           origins.begin() + j);
      } else {
        ++nfc_changes;
        if (normalized.size() == 1 && j - i == 1) {
          new_origins.push_back(origins[i]);
        } else {
          // The chunk maps as a whole onto the source range it came from.
          CharOrigin merged = origins[i];
          const CharOrigin& last = origins[j - 1];
          if (last.node == merged.node && last.node_begin >= merged.node_begin) {
            merged.node_length =
                last.node_begin + last.node_length - merged.node_begin;
          }
          merged.group = next_group++;
          new_origins.insert(new_origins.end(), normalized.size(), merged);
        }
        text += normalized;
      }
    }
    i = j;
  }

  auto [apostrophes, apostrophe_report] = NormalizeApostrophes(text, lexicon);
  apostrophe_report.nfc_changes = nfc_changes;
  if (report != nullptr) report->Merge(apostrophe_report);

  BaseText result;
  result.document_id = base.document_id;
  result.text = std::move(apostrophes);
  result.node_paths = base.node_paths;
  result.source_map = CompressSourceMap(new_origins);
  return result;
}

}  // namespace standoff
