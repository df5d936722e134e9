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

#ifndef STANDOFF_TEI_INGESTION_H_
#define STANDOFF_TEI_INGESTION_H_

#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "standoff/base_text.h"
#include "standoff/xml.h"

namespace standoff {

// An element selector from a policy file: a local name with an optional
// single attribute condition, written "name" or "name[attr=value]".
struct ElementSelector {
  std::string name;
  std::string attribute;  // empty when unconditional
  std::string value;

  bool Matches(const xml::Node& element) const;
  bool operator<(const ElementSelector& other) const;
  bool operator==(const ElementSelector&) const = default;
};

// Decides which TEI elements carry text and which carry paratext.
//
// Policy file grammar (UTF-8, one directive per line, '#' starts a comment):
//
//   discard: <selector> <selector> ...   content is paratext, dropped
//   keep:    <selector> ...              content is text (known, not logged)
//   block:   <name> ...                  element boundaries separate words
//   prefer:  <winner>><loser> ...        alternatives inside <choice>
//
// Directives may repeat; their lists accumulate. Elements in neither the
// discard nor the keep list are kept and reported as unknown.
struct ElementPolicy {
  std::set<ElementSelector> discard;
  std::set<ElementSelector> keep;
  std::set<std::string> block;
  std::vector<std::pair<std::string, std::string>> choice_preferences;

  static ElementPolicy Default();
  // Throws Error(kBadPolicy) on grammar errors or when discard and keep
  // overlap; Error(kIoFailure) when the file cannot be read.
  static ElementPolicy Parse(std::string_view content);
  static ElementPolicy Load(const std::string& path);

  bool IsDiscarded(const xml::Node& element) const;
  bool IsKnown(const xml::Node& element) const;
};

struct ExtractionDiagnostics {
  std::set<std::string> unknown_elements;
  // Block boundaries that fell between two non-space characters and so
  // split a graphic word in two.
  size_t split_words = 0;
};

// Extracts the text of the TEI body as a whitespace-collapsed BaseText with
// a source map into `doc`. The text is not yet Unicode-normalized.
// Throws Error(kMissingBody) when the document has no text body.
BaseText ClassifyAndExtract(const xml::Document& doc,
                            const ElementPolicy& policy,
                            std::string document_id,
                            ExtractionDiagnostics* diagnostics = nullptr);

// The document identifier carried by a TEI file name: the file name without
// directory and without the final ".xml".
std::string DocumentIdFromPath(std::string_view path);

// Resolves one of base.node_paths against the original document by
// evaluating it as a location path.
const xml::Node* ResolveNodePath(const xml::Document& doc,
                                 std::string_view path);

// Path -> node lookup for every node of a document, for callers that
// resolve many paths.
class NodePathIndex {
 public:
  explicit NodePathIndex(const xml::Document& doc);
  // nullptr when no node has that path.
  const xml::Node* Find(std::string_view path) const;

 private:
  std::unordered_map<std::string, const xml::Node*> nodes_;
};

}  // namespace standoff

#endif  // STANDOFF_TEI_INGESTION_H_
