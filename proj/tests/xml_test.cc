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

#include "standoff/xml.h"

#include <gtest/gtest.h>

#include "standoff/error.h"
#include "test_util.h"

namespace standoff::xml {
namespace {

using standoff::testing::U32;

constexpr std::string_view kSample = R"(<?xml version="1.0"?>
<TEI xmlns="http://www.tei-c.org/ns/1.0" xmlns:xlink="http://www.w3.org/1999/xlink">
<text><body>
<div n="1"><p>alpha<!-- c -->beta<hi>gamma</hi>delta</p></div>
<div n="2" type="x"><p xml:lang="grc">λόγος &amp; ἔργον</p><p>two</p></div>
</body></text></TEI>)";

TEST(XmlTest, ParsesElementsAndNamespaces) {
  const Document doc = Document::Parse(kSample);
  ASSERT_NE(doc.root(), nullptr);
  EXPECT_EQ(doc.root()->name(), "TEI");
  EXPECT_EQ(doc.root()->namespace_uri(), "http://www.tei-c.org/ns/1.0");
}

TEST(XmlTest, CommentSplitsTextNodes) {
  const Document doc = Document::Parse(kSample);
  const auto texts = Select(doc, "/TEI/text/body/div[1]/p/text()");
  ASSERT_EQ(texts.size(), 3u);
  EXPECT_EQ(texts[0]->text(), U"alpha");
  EXPECT_EQ(texts[1]->text(), U"beta");
  EXPECT_EQ(texts[2]->text(), U"delta");
  EXPECT_EQ(NodePath(*texts[1]), "/TEI[1]/text[1]/body[1]/div[1]/p[1]/text()[2]");
}

TEST(XmlTest, NodePathCountsSameNameSiblings) {
  const Document doc = Document::Parse(kSample);
  const auto ps = Select(doc, "//div[@n='2']/p");
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(NodePath(*ps[1]), "/TEI[1]/text[1]/body[1]/div[2]/p[2]");
  EXPECT_EQ(Select(doc, NodePath(*ps[1])).front(), ps[1]);
}

TEST(XmlTest, SelectSupportsPrefixesPredicatesAndDescendants) {
  const Document doc = Document::Parse(kSample);
  EXPECT_EQ(Select(doc, "/tei:TEI/tei:text/tei:body/tei:div[@n='2']").size(), 1u);
  EXPECT_EQ(Select(doc, "//div[@n='2' and @type='x']").size(), 1u);
  EXPECT_EQ(Select(doc, "//div[@type]").size(), 1u);
  EXPECT_EQ(Select(doc, "//p").size(), 3u);
  EXPECT_EQ(Select(doc, "/TEI/text/body/*").size(), 2u);
  EXPECT_TRUE(Select(doc, "//div[@n='9']").empty());
}

TEST(XmlTest, SelectRejectsUnsupportedSyntax) {
  const Document doc = Document::Parse(kSample);
  try {
    Select(doc, "//div[position()>1]");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedPointer);
  }
}

TEST(XmlTest, XmlLangKeepsItsPrefixAndEntitiesDecode) {
  const Document doc = Document::Parse(kSample);
  const auto p = Select(doc, "//div[2]/p[1]");
  ASSERT_EQ(p.size(), 1u);
  ASSERT_NE(p[0]->FindAttribute("xml:lang"), nullptr);
  EXPECT_EQ(*p[0]->FindAttribute("xml:lang"), "grc");
  EXPECT_EQ(StringValue(*p[0]), U32("λόγος & ἔργον"));
}

TEST(XmlTest, MalformedInputReportsLine) {
  try {
    Document::Parse("<a>\n<b></a>");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedXml);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(XmlTest, MissingFileIsAnIoFailure) {
  try {
    Document::ParseFile("/nonexistent/file.xml");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoFailure);
  }
}

TEST(XmlTest, EscapingRoundTrips) {
  EXPECT_EQ(EscapeText("a<b>&c"), "a&lt;b&gt;&amp;c");
  EXPECT_EQ(EscapeAttribute("\"x\" & 'y'\n"), "&quot;x&quot; &amp; 'y'&#10;");
  const Document doc =
      Document::Parse("<a v=\"" + EscapeAttribute("\"x\" & <y>\t\n") + "\"/>");
  EXPECT_EQ(*doc.root()->FindAttribute("v"), "\"x\" & <y>\t\n");
}

}  // namespace
}  // namespace standoff::xml
