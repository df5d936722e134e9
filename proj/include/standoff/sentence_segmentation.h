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

#ifndef STANDOFF_SENTENCE_SEGMENTATION_H_
#define STANDOFF_SENTENCE_SEGMENTATION_H_

#include <string>
#include <vector>

#include "standoff/tokenization.h"

namespace standoff {

// A run of tokens [first, last], as 0-based indices into the token sequence.
struct SentenceSpan {
  std::string id;  // "s" + ordinal
  size_t first = 0;
  size_t last = 0;

  bool operator==(const SentenceSpan&) const = default;
};

// Period, semicolon (U+003B) and middle dot (U+00B7).
bool IsSentenceBoundary(const TokenSpan& token);

// ")", "]", "»", "”", "⟩", and a '"' that is written against the token
// before it.
bool IsClosingWrapper(const TokenSpan& token, const TokenSpan* previous);

// Closes a sentence after each boundary token, extended over any closing
// wrappers that follow it. The last sentence ends at the last token.
std::vector<SentenceSpan> Segment(const std::vector<TokenSpan>& tokens);

}  // namespace standoff

#endif  // STANDOFF_SENTENCE_SEGMENTATION_H_
