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

#ifndef STANDOFF_CTS_RESOLUTION_H_
#define STANDOFF_CTS_RESOLUTION_H_

#include <string>
#include <string_view>
#include <vector>

#include "standoff/base_text.h"
#include "standoff/tokenization.h"
#include "standoff/xml.h"

namespace standoff {

// The citation scheme of a work: the division names from the outermost
// level inward, and the XPath template of the deepest declared level with
// placeholders $1..$n.
struct CtsScheme {
  std::vector<std::string> division_names;
  std::string xpath_template;
  std::string document_id;

  size_t depth() const { return division_names.size(); }
  bool operator==(const CtsScheme&) const = default;
};

struct CtsCitation {
  std::vector<std::string> components;

  bool empty() const { return components.empty(); }
  // Components joined with ".", e.g. "1.2.3".
  std::string ToString() const;
  static CtsCitation FromString(std::string_view rendered);
  bool operator==(const CtsCitation&) const = default;
};

// Reads <refsDecl n="CTS"> from <encodingDesc> and returns the scheme of
// its deepest cRefPattern. Throws Error(kNoCtsDeclaration) when the
// declaration is missing, has no usable pattern, or numbers its placeholders
// out of order.
CtsScheme ParseCtsScheme(const xml::Document& doc, std::string document_id);

struct CitationDiagnostics {
  // Tokens outside every declared division; they get an empty citation.
  size_t outside_division = 0;
  // Division levels numbered by sibling position for lack of an n attribute.
  size_t positional_fallbacks = 0;
};

// Citation of every token, in token order, found by matching the ancestor
// chain of the token's source node against the template steps.
std::vector<CtsCitation> AssignCitations(
    const xml::Document& doc, const BaseText& base,
    const std::vector<TokenSpan>& tokens, const CtsScheme& scheme,
    CitationDiagnostics* diagnostics = nullptr);

// Fills the first citation.components.size() placeholders of the template
// and cuts the template after the last filled step, giving the path of the
// division the citation names.
std::string InstantiateTemplate(const CtsScheme& scheme,
                                const CtsCitation& citation);

}  // namespace standoff

#endif  // STANDOFF_CTS_RESOLUTION_H_
