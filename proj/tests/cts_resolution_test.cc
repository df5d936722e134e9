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

#include "standoff/cts_resolution.h"

#include <gtest/gtest.h>

#include <sstream>

#include "oracles.h"
#include "standoff/error.h"
#include "standoff/tei_ingestion.h"
#include "standoff/unicode_normalization.h"
#include "test_util.h"

namespace standoff {
namespace {

using testing::U8;

struct Fixture {
  xml::Document doc;
  BaseText base;
  std::vector<TokenSpan> tokens;
  CtsScheme scheme;
};

Fixture Load(const std::string& xml_text) {
  Fixture f;
  f.doc = xml::Document::Parse(xml_text);
  const auto& resources = testing::ShippedResources();
  f.base = NormalizeBaseText(ClassifyAndExtract(f.doc, resources.policy, "fx"),
                             resources.elision);
  f.tokens = Tokenize(f.base, resources.crasis);
  f.scheme = ParseCtsScheme(f.doc, "fx");
  return f;
}

std::vector<std::pair<std::string, std::string>> Expected() {
  std::istringstream in(testing::ReadFile(testing::TestDataPath("cts_fixture.expected")));
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    rows.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return rows;
}

TEST(CtsSchemeTest, ParsesDeepestPatternAndDivisionNames) {
  const Fixture f = Load(testing::ReadFile(testing::TestDataPath("cts_fixture.xml")));
  EXPECT_EQ(f.scheme.division_names,
            (std::vector<std::string>{"book", "chapter", "section"}));
  EXPECT_EQ(f.scheme.depth(), 3u);
  EXPECT_EQ(f.scheme.xpath_template,
            "/tei:TEI/tei:text/tei:body/tei:div/tei:div[@n='$1']/"
            "tei:div[@n='$2']/tei:div[@n='$3']");
}

TEST(CtsSchemeTest, MissingDeclarationRejectsTheDocument) {
  const xml::Document doc = xml::Document::Parse(
      "<TEI><teiHeader/><text><body><p>x</p></body></text></TEI>");
  try {
    ParseCtsScheme(doc, "d");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoCtsDeclaration);
  }
}

TEST(CtsCitationTest, RendersAndParses) {
  const CtsCitation c = CtsCitation::FromString("1.2.3a");
  EXPECT_EQ(c.components, (std::vector<std::string>{"1", "2", "3a"}));
  EXPECT_EQ(c.ToString(), "1.2.3a");
  EXPECT_TRUE(CtsCitation::FromString("").empty());
}

TEST(CtsResolutionTest, MatchesHandComputedCitations) {
  const Fixture f = Load(testing::ReadFile(testing::TestDataPath("cts_fixture.xml")));
  CitationDiagnostics diag;
  const auto citations = AssignCitations(f.doc, f.base, f.tokens, f.scheme, &diag);
  const auto expected = Expected();
  ASSERT_EQ(f.tokens.size(), expected.size());
  for (size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(U8(f.tokens[i].surface), expected[i].first) << i;
    EXPECT_EQ(citations[i].ToString(), expected[i].second) << U8(f.tokens[i].surface);
  }
  EXPECT_EQ(diag.outside_division, 0u);
  EXPECT_EQ(diag.positional_fallbacks, 0u);
}

TEST(CtsResolutionTest, AgreesWithTemplateEvaluation) {
  const Fixture f = Load(testing::ReadFile(testing::TestDataPath("cts_fixture.xml")));
  const auto citations = AssignCitations(f.doc, f.base, f.tokens, f.scheme);
  for (size_t i = 0; i < f.tokens.size(); ++i) {
    EXPECT_TRUE(testing::OracleCitationContainsToken(f.doc, f.base, f.scheme,
                                                     citations[i], f.tokens[i]))
        << U8(f.tokens[i].surface) << " " << citations[i].ToString();
  }
}

TEST(CtsResolutionTest, InstantiatesPrefixesOfTheTemplate) {
  const Fixture f = Load(testing::ReadFile(testing::TestDataPath("cts_fixture.xml")));
  EXPECT_EQ(InstantiateTemplate(f.scheme, CtsCitation::FromString("2")),
            "/tei:TEI/tei:text/tei:body/tei:div/tei:div[@n='2']");
  EXPECT_EQ(InstantiateTemplate(f.scheme, CtsCitation::FromString("2.3.2a")),
            "/tei:TEI/tei:text/tei:body/tei:div/tei:div[@n='2']/"
            "tei:div[@n='3']/tei:div[@n='2a']");
  EXPECT_EQ(xml::Select(f.doc, InstantiateTemplate(
                                   f.scheme, CtsCitation::FromString("1.2")))
                .size(),
            1u);
}

TEST(CtsResolutionTest, MissingNFallsBackToSiblingPosition) {
  const std::string xml_text = R"xml(<TEI><teiHeader><encodingDesc><refsDecl n="CTS">
<cRefPattern n="line" replacementPattern="#xpath(/tei:TEI/tei:text/tei:body/tei:div/tei:l[@n='$1'])"/>
</refsDecl></encodingDesc></teiHeader><text><body><div>
<l n="1">α</l><l>β</l><l n="3">γ</l></div><p>δ</p></body></text></TEI>)xml";
  const Fixture f = Load(xml_text);
  CitationDiagnostics diag;
  const auto citations = AssignCitations(f.doc, f.base, f.tokens, f.scheme, &diag);
  ASSERT_EQ(citations.size(), 4u);
  EXPECT_EQ(citations[0].ToString(), "1");
  EXPECT_EQ(citations[1].ToString(), "2");
  EXPECT_EQ(citations[2].ToString(), "3");
  EXPECT_TRUE(citations[3].empty());
  EXPECT_EQ(diag.positional_fallbacks, 1u);
  EXPECT_EQ(diag.outside_division, 1u);
  EXPECT_EQ(f.scheme.division_names, std::vector<std::string>{"line"});
}

}  // namespace
}  // namespace standoff
