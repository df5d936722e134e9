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

#ifndef STANDOFF_BASE_TEXT_H_
#define STANDOFF_BASE_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace standoff {

// One run of base-text characters and the source characters they came from.
// Offsets are 1-based code point positions. A plain segment is a 1:1 run
// (text_length == node_length, character i maps to node character i). A
// chunk maps its whole text range to its whole node range; chunks come from
// NFC rewrites that change length or order, from collapsed whitespace runs,
// and from separators synthesized at block element boundaries (node_length
// == 0, node names the block element).
struct SourceSegment {
  size_t text_begin = 0;
  size_t text_length = 0;
  uint32_t node = 0;  // index into BaseText::node_paths
  size_t node_begin = 0;
  size_t node_length = 0;
  bool chunk = false;

  bool operator==(const SourceSegment&) const = default;
};

// Provenance of one base-text character; the uncompressed form of a
// SourceSegment used while the text is being built or normalized.
struct CharOrigin {
  uint32_t node = 0;
  uint32_t node_begin = 0;
  uint32_t node_length = 0;
  // Nonzero for chars that belong to a chunk; chars of one chunk share the
  // id. Zero for chars that map 1:1 onto a single source char.
  uint32_t group = 0;
};

struct BaseText {
  std::string document_id;
  std::u32string text;
  std::vector<std::string> node_paths;
  std::vector<SourceSegment> source_map;

  size_t length() const { return text.size(); }
  bool operator==(const BaseText&) const = default;
};

// Where a base-text character lives in the source document.
struct SourceLocation {
  std::string_view node_path;
  uint32_t node = 0;
  size_t node_offset = 0;  // 1-based
  size_t node_length = 0;  // source characters covered (0 for separators)
};

// Throws Error(kOutOfRange) unless 1 <= offset <= base.length().
SourceLocation MapOffsetToSource(const BaseText& base, size_t offset);

// Inverse lookup: the base offset of the first character produced from the
// source character at (node, node_offset). Throws Error(kOutOfRange) when no
// base character comes from that source position.
size_t MapSourceToOffset(const BaseText& base, uint32_t node,
                         size_t node_offset);

// Reverse lookups from source positions, built once per base text. The
// index refers to `base`, which must outlive it.
class SourceIndex {
 public:
  explicit SourceIndex(const BaseText& base);
  explicit SourceIndex(BaseText&&) = delete;

  // First and last base offsets produced from the source character at
  // (node, node_offset). Throws Error(kOutOfRange) when none is.
  std::pair<size_t, size_t> Lookup(uint32_t node, size_t node_offset) const;

 private:
  const BaseText* base_;
  // Per node, indices of its segments ordered by node_begin.
  std::vector<std::vector<size_t>> by_node_;
};

std::vector<CharOrigin> ExpandSourceMap(const BaseText& base);
std::vector<SourceSegment> CompressSourceMap(
    const std::vector<CharOrigin>& origins);

// Structural checks of the source map invariants: ordered, contiguous,
// covering [1, length], node indices in range. Returns a description of the
// first problem, or an empty string.
std::string CheckSourceMap(const BaseText& base);

}  // namespace standoff

#endif  // STANDOFF_BASE_TEXT_H_
