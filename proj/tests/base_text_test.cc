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

#include <gtest/gtest.h>

#include "standoff/error.h"
#include "standoff/tei_ingestion.h"
#include "standoff/unicode_normalization.h"
#include "synthetic_tei.h"
#include "test_util.h"

namespace standoff {
namespace {

// "ab" from node 0, a chunk "X" standing for 3 chars of node 1, then "cd"
// from node 1.
BaseText HandBuilt() {
  BaseText base;
  base.document_id = "hand";
  base.text = U"abXcd";
  base.node_paths = {"/a[1]/text()[1]", "/a[1]/b[1]/text()[1]"};
  base.source_map = {
      {1, 2, 0, 1, 2, false},
      {3, 1, 1, 1, 3, true},
      {4, 2, 1, 4, 2, false},
  };
  return base;
}

TEST(BaseTextTest, MapsOffsetsToSource) {
  const BaseText base = HandBuilt();
  EXPECT_EQ(CheckSourceMap(base), "");
  SourceLocation loc = MapOffsetToSource(base, 2);
  EXPECT_EQ(loc.node_path, "/a[1]/text()[1]");
  EXPECT_EQ(loc.node_offset, 2u);
  EXPECT_EQ(loc.node_length, 1u);
  loc = MapOffsetToSource(base, 3);
  EXPECT_EQ(loc.node, 1u);
  EXPECT_EQ(loc.node_offset, 1u);
  EXPECT_EQ(loc.node_length, 3u);
  loc = MapOffsetToSource(base, 5);
  EXPECT_EQ(loc.node_offset, 5u);
}

TEST(BaseTextTest, OutOfRangeAndMissingMapAreErrors) {
  const BaseText base = HandBuilt();
  for (size_t bad : {size_t{0}, size_t{6}}) {
    try {
      MapOffsetToSource(base, bad);
      FAIL() << "offset " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kOutOfRange);
    }
  }
  BaseText bare = base;
  bare.source_map.clear();
  try {
    MapOffsetToSource(bare, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSourceMapMissing);
  }
}

TEST(BaseTextTest, ReverseLookupCoversChunks) {
  const BaseText base = HandBuilt();
  const SourceIndex index(base);
  EXPECT_EQ(index.Lookup(0, 1), std::make_pair(size_t{1}, size_t{1}));
  EXPECT_EQ(index.Lookup(1, 2), std::make_pair(size_t{3}, size_t{3}));
  EXPECT_EQ(index.Lookup(1, 5), std::make_pair(size_t{5}, size_t{5}));
  EXPECT_EQ(MapSourceToOffset(base, 1, 3), 3u);
  EXPECT_THROW(index.Lookup(0, 3), Error);
}

TEST(BaseTextTest, ExpandThenCompressIsIdentity) {
  const BaseText base = HandBuilt();
  EXPECT_EQ(CompressSourceMap(ExpandSourceMap(base)), base.source_map);
}

TEST(BaseTextTest, CheckSourceMapFindsGapsAndBadNodes) {
  BaseText gap = HandBuilt();
  gap.source_map[2].text_begin = 5;
  EXPECT_NE(CheckSourceMap(gap), "");
  BaseText bad_node = HandBuilt();
  bad_node.source_map[0].node = 7;
  EXPECT_NE(CheckSourceMap(bad_node), "");
  BaseText short_map = HandBuilt();
  short_map.source_map.pop_back();
  EXPECT_NE(CheckSourceMap(short_map), "");
}

// The indexed reverse lookup agrees with a linear scan of the map for every
// source character of a noisy synthetic document.
TEST(BaseTextTest, IndexedLookupMatchesLinearScan) {
  testing::SyntheticOptions options;
  options.seed = 11;
  const xml::Document doc = xml::Document::Parse(testing::GenerateTei(options));
  const BaseText base = NormalizeBaseText(
      ClassifyAndExtract(doc, ElementPolicy::Default(), "syn"),
      testing::ShippedResources().elision);
  ASSERT_EQ(CheckSourceMap(base), "");
  const SourceIndex index(base);
  size_t checked = 0;
  for (const SourceSegment& seg : base.source_map) {
    for (size_t k = 0; k < seg.node_length; ++k) {
      const size_t linear = MapSourceToOffset(base, seg.node, seg.node_begin + k);
      EXPECT_EQ(index.Lookup(seg.node, seg.node_begin + k).first, linear);
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000u);
}

}  // namespace
}  // namespace standoff
