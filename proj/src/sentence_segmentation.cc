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

#include "standoff/sentence_segmentation.h"

namespace standoff {

bool IsSentenceBoundary(const TokenSpan& token) {
  return token.surface == U"." || token.surface == U";" ||
         token.surface == U"·";
}

bool IsClosingWrapper(const TokenSpan& token, const TokenSpan* previous) {
  if (token.surface.size() != 1) return false;
  switch (token.surface[0]) {
    case U')': case U']': case U'»': case U'”': case U'⟩':
      return true;
    case U'"':
      return previous != nullptr &&
             previous->start + previous->length == token.start;
    default:
      return false;
  }
}

std::vector<SentenceSpan> Segment(const std::vector<TokenSpan>& tokens) {
  std::vector<SentenceSpan> sentences;
  auto close = [&](size_t first, size_t last) {
    sentences.push_back(
        {"s" + std::to_string(sentences.size() + 1), first, last});
  };
  size_t start = 0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!IsSentenceBoundary(tokens[i])) continue;
    size_t end = i;
    while (end + 1 < tokens.size() &&
           IsClosingWrapper(tokens[end + 1], &tokens[end])) {
      ++end;
    }
    close(start, end);
    start = end + 1;
    i = end;
  }
  if (start < tokens.size()) close(start, tokens.size() - 1);
  return sentences;
}

}  // namespace standoff
