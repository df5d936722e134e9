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

#ifndef STANDOFF_XML_H_
#define STANDOFF_XML_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace standoff::xml {

// Attribute names are local names, except that attributes in the XML
// namespace keep their "xml:" prefix (xml:base, xml:lang, xml:id).
struct Attribute {
  std::string name;
  std::string value;
};

// A node of a parsed document. Element names are local names; the namespace
// URI is kept separately. Adjacent character data (including CDATA sections)
// is merged into a single text node; comments and processing instructions
// end a text node, as in the XPath data model.
class Node {
 public:
  enum class Kind { kElement, kText, kComment };

  Kind kind() const { return kind_; }
  bool is_element() const { return kind_ == Kind::kElement; }
  bool is_text() const { return kind_ == Kind::kText; }

  const std::string& name() const { return name_; }
  const std::string& namespace_uri() const { return namespace_uri_; }
  const std::vector<Attribute>& attributes() const { return attributes_; }
  // Returns nullptr when the attribute is absent.
  const std::string* FindAttribute(std::string_view name) const;

  // Text and comment content, in code points.
  const std::u32string& text() const { return text_; }

  const Node* parent() const { return parent_; }
  const std::vector<std::unique_ptr<Node>>& children() const {
    return children_;
  }

  // 1-based position among the parent's children of the same kind (and, for
  // elements, the same name). This is the XPath positional index.
  size_t sibling_position() const { return sibling_position_; }

 private:
  friend class TreeBuilder;

  Kind kind_ = Kind::kElement;
  std::string name_;
  std::string namespace_uri_;
  std::vector<Attribute> attributes_;
  std::u32string text_;
  Node* parent_ = nullptr;
  std::vector<std::unique_ptr<Node>> children_;
  size_t sibling_position_ = 1;
};

class Document {
 public:
  Document() = default;
  Document(Document&&) = default;
  Document& operator=(Document&&) = default;

  // Throws Error(kMalformedXml) with the expat message and line number.
  static Document Parse(std::string_view content);
  // Throws Error(kIoFailure) when the file cannot be read.
  static Document ParseFile(const std::string& path);

  const Node* root() const { return root_.get(); }

 private:
  friend class TreeBuilder;
  std::unique_ptr<Node> root_;
};

// Absolute positional path of a node, e.g.
// "/TEI[1]/text[1]/body[1]/div[2]/p[1]/text()[1]".
std::string NodePath(const Node& node);

// Evaluates an absolute location path over `doc`. Supported subset:
//   steps separated by "/" or "//", name tests with an optional (ignored)
//   prefix, "*", "text()", and predicates of the form [k], [@a='v'],
//   [@a="v"], [@a] joined by "and".
// Throws Error(kMalformedPointer) on syntax outside the subset.
std::vector<const Node*> Select(const Document& doc, std::string_view path);

// Concatenated text of all descendant text nodes.
std::u32string StringValue(const Node& node);

// Escaping for hand-written XML output.
std::string EscapeText(std::string_view text);
std::string EscapeAttribute(std::string_view text);

}  // namespace standoff::xml

#endif  // STANDOFF_XML_H_
