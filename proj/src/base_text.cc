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

#include "standoff/base_text.h"

#include <algorithm>

#include "standoff/error.h"

namespace standoff {
namespace {

const SourceSegment& SegmentAt(const BaseText& base, size_t offset) {
  if (offset < 1 || offset > base.length()) {
    throw Error(ErrorCode::kOutOfRange,
                "offset " + std::to_string(offset) + " outside [1, " +
                    std::to_string(base.length()) + "]");
  }
  if (base.source_map.empty()) {
    throw Error(ErrorCode::kSourceMapMissing, "base text has no source map");
  }
  auto it = std::upper_bound(
      base.source_map.begin(), base.source_map.end(), offset,
      [](size_t o, const SourceSegment& seg) { return o < seg.text_begin; });
  if (it == base.source_map.begin()) {
    throw Error(ErrorCode::kOutOfRange, "offset precedes source map");
  }
  const SourceSegment& seg = *std::prev(it);
  if (offset >= seg.text_begin + seg.text_length) {
    throw Error(ErrorCode::kOutOfRange,
                "offset " + std::to_string(offset) + " not covered");
  }
  return seg;
}

}  // namespace

SourceLocation MapOffsetToSource(const BaseText& base, size_t offset) {
  const SourceSegment& seg = SegmentAt(base, offset);
  SourceLocation loc;
  loc.node = seg.node;
  loc.node_path = base.node_paths.at(seg.node);
  if (seg.chunk) {
    loc.node_offset = seg.node_begin;
    loc.node_length = seg.node_length;
  } else {
    loc.node_offset = seg.node_begin + (offset - seg.text_begin);
    loc.node_length = 1;
  }
  return loc;
}

size_t MapSourceToOffset(const BaseText& base, uint32_t node,
                         size_t node_offset) {
  // Segments of one node appear in increasing node order, but nodes
  // interleave with others, so this is a scan. Callers with many lookups
  // should go through a SourceIndex.
  for (const SourceSegment& seg : base.source_map) {
    if (seg.node != node || seg.node_length == 0) continue;
    if (node_offset < seg.node_begin ||
        node_offset >= seg.node_begin + seg.node_length) {
      continue;
    }
    if (seg.chunk) return seg.text_begin;
    return seg.text_begin + (node_offset - seg.node_begin);
  }
  throw Error(ErrorCode::kOutOfRange,
              "no base character from node " + std::to_string(node) +
                  " offset " + std::to_string(node_offset));
}

SourceIndex::SourceIndex(const BaseText& base)
    : base_(&base), by_node_(base.node_paths.size()) {
  for (size_t i = 0; i < base.source_map.size(); ++i) {
    const SourceSegment& seg = base.source_map[i];
    if (seg.node_length == 0 || seg.node >= by_node_.size()) continue;
    by_node_[seg.node].push_back(i);
  }
  for (auto& list : by_node_) {
    std::stable_sort(list.begin(), list.end(), [&](size_t a, size_t b) {
      return base.source_map[a].node_begin < base.source_map[b].node_begin;
    });
  }
}

std::pair<size_t, size_t> SourceIndex::Lookup(uint32_t node,
                                              size_t node_offset) const {
  auto fail = [&]() -> std::pair<size_t, size_t> {
    throw Error(ErrorCode::kOutOfRange,
                "no base character from node " + std::to_string(node) +
                    " offset " + std::to_string(node_offset));
  };
  if (node >= by_node_.size()) return fail();
  const auto& list = by_node_[node];
  auto it = std::upper_bound(list.begin(), list.end(), node_offset,
                             [&](size_t o, size_t seg) {
                               return o < base_->source_map[seg].node_begin;
                             });
  if (it == list.begin()) return fail();
  const SourceSegment& seg = base_->source_map[*std::prev(it)];
  if (node_offset >= seg.node_begin + seg.node_length) return fail();
  if (seg.chunk) {
    return {seg.text_begin, seg.text_begin + seg.text_length - 1};
  }
  const size_t offset = seg.text_begin + (node_offset - seg.node_begin);
  return {offset, offset};
}

std::vector<CharOrigin> ExpandSourceMap(const BaseText& base) {
  std::vector<CharOrigin> origins;
  origins.reserve(base.length());
  uint32_t group = 0;
  for (const SourceSegment& seg : base.source_map) {
    if (seg.chunk) {
      ++group;
      for (size_t i = 0; i < seg.text_length; ++i) {
        origins.push_back({seg.node, static_cast<uint32_t>(seg.node_begin),
                           static_cast<uint32_t>(seg.node_length), group});
      }
    } else {
      for (size_t i = 0; i < seg.text_length; ++i) {
        origins.push_back(
            {seg.node, static_cast<uint32_t>(seg.node_begin + i), 1, 0});
      }
    }
  }
  return origins;
}

std::vector<SourceSegment> CompressSourceMap(
    const std::vector<CharOrigin>& origins) {
  std::vector<SourceSegment> segments;
  size_t i = 0;
  while (i < origins.size()) {
    const CharOrigin& o = origins[i];
    SourceSegment seg;
    seg.text_begin = i + 1;
    seg.node = o.node;
    seg.node_begin = o.node_begin;
    if (o.group != 0) {
      size_t j = i + 1;
      while (j < origins.size() && origins[j].group == o.group) ++j;
      seg.text_length = j - i;
      seg.node_length = o.node_length;
      seg.chunk = true;
      i = j;
    } else {
      size_t j = i + 1;
      while (j < origins.size() && origins[j].group == 0 &&
             origins[j].node == o.node &&
             origins[j].node_begin == o.node_begin + (j - i)) {
        ++j;
      }
      seg.text_length = j - i;
      seg.node_length = j - i;
      i = j;
    }
    segments.push_back(seg);
  }
  return segments;
}

std::string CheckSourceMap(const BaseText& base) {
  size_t expected = 1;
  for (const SourceSegment& seg : base.source_map) {
    if (seg.text_begin != expected) {
      return "segment at " + std::to_string(seg.text_begin) + " expected at " +
             std::to_string(expected);
    }
    if (seg.text_length == 0) return "empty segment";
    if (seg.node >= base.node_paths.size()) return "node index out of range";
    if (!seg.chunk && seg.node_length != seg.text_length) {
      return "plain segment with unequal lengths";
    }
    expected += seg.text_length;
  }
  if (expected != base.length() + 1) {
    return "source map covers " + std::to_string(expected - 1) + " of " +
           std::to_string(base.length()) + " characters";
  }
  return {};
}

}  // namespace standoff
