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

#include <expat.h>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "standoff/error.h"
#include "standoff/utf.h"

namespace standoff::xml {
namespace {

constexpr char kNamespaceSeparator = '\x01';
constexpr std::string_view kXmlNamespace =
    "http://www.w3.org/XML/1998/namespace";

void SplitExpandedName(std::string_view expanded, std::string* uri,
                       std::string* local) {
  const size_t sep = expanded.find(kNamespaceSeparator);
  if (sep == std::string_view::npos) {
    uri->clear();
    local->assign(expanded);
  } else {
    uri->assign(expanded.substr(0, sep));
    local->assign(expanded.substr(sep + 1));
  }
}

}  // namespace

// Receives expat callbacks and assembles the tree.
class TreeBuilder {
 public:
  explicit TreeBuilder(Document* doc) : doc_(doc) {}

  static void OnStart(void* data, const XML_Char* name,
                      const XML_Char** attrs) {
    auto* self = static_cast<TreeBuilder*>(data);
    self->FlushText();
    auto node = std::make_unique<Node>();
    node->kind_ = Node::Kind::kElement;
    SplitExpandedName(name, &node->namespace_uri_, &node->name_);
    for (int i = 0; attrs[i] != nullptr; i += 2) {
      Attribute attr;
      std::string uri;
      SplitExpandedName(attrs[i], &uri, &attr.name);
      if (uri == kXmlNamespace) attr.name = "xml:" + attr.name;
      attr.value = attrs[i + 1];
      node->attributes_.push_back(std::move(attr));
    }
    self->Append(std::move(node), /*descend=*/true);
  }

  static void OnEnd(void* data, const XML_Char*) {
    auto* self = static_cast<TreeBuilder*>(data);
    self->FlushText();
    self->counters_.erase(self->current_);
    self->current_ = self->current_->parent_;
  }

  static void OnCharacters(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<TreeBuilder*>(data);
    if (self->current_ == nullptr) return;
    self->pending_text_.append(s, len);
  }

  static void OnComment(void* data, const XML_Char* s) {
    auto* self = static_cast<TreeBuilder*>(data);
    self->FlushText();
    if (self->current_ == nullptr) return;
    auto node = std::make_unique<Node>();
    node->kind_ = Node::Kind::kComment;
    node->text_ = Utf8ToUtf32(s);
    self->Append(std::move(node), /*descend=*/false);
  }

  static void OnProcessingInstruction(void* data, const XML_Char*,
                                      const XML_Char*) {
    static_cast<TreeBuilder*>(data)->FlushText();
  }

 private:
  void FlushText() {
    if (pending_text_.empty() || current_ == nullptr) {
      pending_text_.clear();
      return;
    }
    auto node = std::make_unique<Node>();
    node->kind_ = Node::Kind::kText;
    node->text_ = Utf8ToUtf32(pending_text_);
    pending_text_.clear();
    Append(std::move(node), /*descend=*/false);
  }

  void Append(std::unique_ptr<Node> node, bool descend) {
    Node* raw = node.get();
    if (current_ == nullptr) {
      doc_->root_ = std::move(node);
    } else {
      raw->parent_ = current_;
      auto& counter = raw->is_element()
                          ? counters_[current_][raw->name_]
                          : counters_[current_][raw->is_text() ? "#text"
                                                                : "#comment"];
      raw->sibling_position_ = ++counter;
      current_->children_.push_back(std::move(node));
    }
    if (descend) current_ = raw;
  }

  Document* doc_;
  Node* current_ = nullptr;
  std::string pending_text_;
  std::map<const Node*, std::map<std::string, size_t>> counters_;
};

Document Document::Parse(std::string_view content) {
  Document doc;
  TreeBuilder builder(&doc);
  XML_Parser parser = XML_ParserCreateNS("UTF-8", kNamespaceSeparator);
  XML_SetUserData(parser, &builder);
  XML_SetElementHandler(parser, &TreeBuilder::OnStart, &TreeBuilder::OnEnd);
  XML_SetCharacterDataHandler(parser, &TreeBuilder::OnCharacters);
  XML_SetCommentHandler(parser, &TreeBuilder::OnComment);
  XML_SetProcessingInstructionHandler(parser,
                                      &TreeBuilder::OnProcessingInstruction);
  XML_SetParamEntityParsing(parser, XML_PARAM_ENTITY_PARSING_NEVER);
  const XML_Status status =
      XML_Parse(parser, content.data(), static_cast<int>(content.size()),
                /*isFinal=*/1);
  if (status != XML_STATUS_OK) {
    std::ostringstream msg;
    msg << XML_ErrorString(XML_GetErrorCode(parser)) << " at line "
        << XML_GetCurrentLineNumber(parser);
    XML_ParserFree(parser);
    throw Error(ErrorCode::kMalformedXml, msg.str());
  }
  XML_ParserFree(parser);
  if (doc.root_ == nullptr) {
    throw Error(ErrorCode::kMalformedXml, "document has no root element");
  }
  return doc;
}

Document Document::ParseFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

const std::string* Node::FindAttribute(std::string_view name) const {
  for (const auto& attr : attributes_) {
    if (attr.name == name) return &attr.value;
  }
  return nullptr;
}

std::string NodePath(const Node& node) {
  std::vector<const Node*> chain;
  for (const Node* n = &node; n != nullptr; n = n->parent()) chain.push_back(n);
  std::string path;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const Node* n = *it;
    path += '/';
    switch (n->kind()) {
      case Node::Kind::kElement: path += n->name(); break;
      case Node::Kind::kText: path += "text()"; break;
      case Node::Kind::kComment: path += "comment()"; break;
    }
    path += '[';
    path += std::to_string(n->sibling_position());
    path += ']';
  }
  return path;
}

namespace {

struct Condition {
  std::string attribute;
  std::string value;
  bool has_value = false;
};

struct Predicate {
  size_t position = 0;  // 0 when the predicate is a condition list
  std::vector<Condition> conditions;
};

struct Step {
  bool descendant = false;
  bool text_test = false;
  bool any_name = false;
  std::string name;
  std::vector<Predicate> predicates;
};

[[noreturn]] void SyntaxError(std::string_view path, std::string_view what) {
  throw Error(ErrorCode::kMalformedPointer,
              std::string(what) + " in path '" + std::string(path) + "'");
}

class PathParser {
 public:
  explicit PathParser(std::string_view path) : path_(path) {}

  std::vector<Step> Parse() {
    std::vector<Step> steps;
    SkipSpaces();
    if (pos_ >= path_.size() || path_[pos_] != '/') {
      SyntaxError(path_, "expected absolute path");
    }
    while (pos_ < path_.size()) {
      SkipSpaces();
      if (pos_ >= path_.size()) break;
      if (path_[pos_] != '/') SyntaxError(path_, "expected '/'");
      Step step;
      ++pos_;
      if (pos_ < path_.size() && path_[pos_] == '/') {
        step.descendant = true;
        ++pos_;
      }
      ParseNameTest(&step);
      while (pos_ < path_.size() && path_[pos_] == '[') {
        step.predicates.push_back(ParsePredicate());
      }
      steps.push_back(std::move(step));
    }
    return steps;
  }

 private:
  void SkipSpaces() {
    while (pos_ < path_.size() && (path_[pos_] == ' ' || path_[pos_] == '\n' ||
                                   path_[pos_] == '\t' || path_[pos_] == '\r'))
      ++pos_;
  }

  std::string ParseName() {
    const size_t start = pos_;
    while (pos_ < path_.size()) {
      const char c = path_[pos_];
      if (c == '/' || c == '[' || c == ']' || c == '=' || c == ' ' ||
          c == '(' || c == ')' || c == '\'' || c == '"')
        break;
      ++pos_;
    }
    return std::string(path_.substr(start, pos_ - start));
  }

  void ParseNameTest(Step* step) {
    std::string name = ParseName();
    if (name == "text" && pos_ + 1 < path_.size() && path_[pos_] == '(' &&
        path_[pos_ + 1] == ')') {
      pos_ += 2;
      step->text_test = true;
      return;
    }
    if (name.empty()) SyntaxError(path_, "empty step");
    const size_t colon = name.find(':');
    if (colon != std::string::npos) name = name.substr(colon + 1);
    if (name == "*") {
      step->any_name = true;
    } else {
      step->name = std::move(name);
    }
  }

  std::string ParseLiteral() {
    if (pos_ >= path_.size() || (path_[pos_] != '\'' && path_[pos_] != '"')) {
      SyntaxError(path_, "expected string literal");
    }
    const char quote = path_[pos_++];
    const size_t end = path_.find(quote, pos_);
    if (end == std::string_view::npos) SyntaxError(path_, "unterminated literal");
    std::string value(path_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return value;
  }

  Predicate ParsePredicate() {
    ++pos_;  // '['
    SkipSpaces();
    Predicate pred;
    if (pos_ < path_.size() && path_[pos_] >= '0' && path_[pos_] <= '9') {
      size_t value = 0;
      const auto [ptr, ec] = std::from_chars(
          path_.data() + pos_, path_.data() + path_.size(), value);
      if (ec != std::errc() || value == 0) SyntaxError(path_, "bad position");
      pos_ = ptr - path_.data();
      pred.position = value;
    } else {
      while (true) {
        SkipSpaces();
        if (pos_ >= path_.size() || path_[pos_] != '@') {
          SyntaxError(path_, "expected attribute test");
        }
        ++pos_;
        Condition cond;
        cond.attribute = ParseName();
        if (cond.attribute.rfind("xml:", 0) != 0) {
          const size_t colon = cond.attribute.find(':');
          if (colon != std::string::npos) {
            cond.attribute = cond.attribute.substr(colon + 1);
          }
        }
        SkipSpaces();
        if (pos_ < path_.size() && path_[pos_] == '=') {
          ++pos_;
          SkipSpaces();
          cond.value = ParseLiteral();
          cond.has_value = true;
        }
        pred.conditions.push_back(std::move(cond));
        SkipSpaces();
        if (path_.substr(pos_, 3) == "and") {
          pos_ += 3;
          continue;
        }
        break;
      }
    }
    SkipSpaces();
    if (pos_ >= path_.size() || path_[pos_] != ']') {
      SyntaxError(path_, "expected ']'");
    }
    ++pos_;
    return pred;
  }

  std::string_view path_;
  size_t pos_ = 0;
};

bool MatchesTest(const Node& node, const Step& step) {
  if (step.text_test) return node.is_text();
  if (!node.is_element()) return false;
  return step.any_name || node.name() == step.name;
}

bool MatchesConditions(const Node& node, const Predicate& pred) {
  for (const auto& cond : pred.conditions) {
    const std::string* value = node.FindAttribute(cond.attribute);
    if (value == nullptr) return false;
    if (cond.has_value && *value != cond.value) return false;
  }
  return true;
}

void CollectDescendants(const Node& node, std::vector<const Node*>* out) {
  for (const auto& child : node.children()) {
    out->push_back(child.get());
    CollectDescendants(*child, out);
  }
}

std::vector<const Node*> ApplyPredicates(std::vector<const Node*> candidates,
                                         const Step& step) {
  for (const auto& pred : step.predicates) {
    std::vector<const Node*> kept;
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (pred.position != 0) {
        if (i + 1 == pred.position) kept.push_back(candidates[i]);
      } else if (MatchesConditions(*candidates[i], pred)) {
        kept.push_back(candidates[i]);
      }
    }
    candidates = std::move(kept);
  }
  return candidates;
}

}  // namespace

std::vector<const Node*> Select(const Document& doc, std::string_view path) {
  const std::vector<Step> steps = PathParser(path).Parse();
  std::vector<const Node*> context;
  bool at_document = true;
  for (const Step& step : steps) {
    std::vector<const Node*> next;
    if (at_document) {
      std::vector<const Node*> candidates;
      if (step.descendant) {
        candidates.push_back(doc.root());
        CollectDescendants(*doc.root(), &candidates);
      } else {
        candidates.push_back(doc.root());
      }
      std::vector<const Node*> matching;
      for (const Node* n : candidates) {
        if (MatchesTest(*n, step)) matching.push_back(n);
      }
      next = ApplyPredicates(std::move(matching), step);
      at_document = false;
    } else {
      for (const Node* ctx : context) {
        std::vector<const Node*> candidates;
        if (step.descendant) {
          CollectDescendants(*ctx, &candidates);
        } else {
          for (const auto& child : ctx->children()) {
            candidates.push_back(child.get());
          }
        }
        std::vector<const Node*> matching;
        for (const Node* n : candidates) {
          if (MatchesTest(*n, step)) matching.push_back(n);
        }
        for (const Node* n : ApplyPredicates(std::move(matching), step)) {
          next.push_back(n);
        }
      }
    }
    context = std::move(next);
    if (context.empty()) break;
  }
  return context;
}

std::u32string StringValue(const Node& node) {
  if (node.is_text()) return node.text();
  std::u32string out;
  for (const auto& child : node.children()) {
    if (child->kind() != Node::Kind::kComment) out += StringValue(*child);
  }
  return out;
}

std::string EscapeText(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string EscapeAttribute(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\t': out += "&#9;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace standoff::xml
