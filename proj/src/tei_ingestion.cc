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

#include "standoff/tei_ingestion.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "standoff/error.h"
#include "standoff/utf.h"

namespace standoff {
namespace {

std::vector<std::string_view> SplitWords(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

ElementSelector ParseSelector(std::string_view item, size_t line) {
  ElementSelector sel;
  const size_t open = item.find('[');
  if (open == std::string_view::npos) {
    sel.name = std::string(item);
    return sel;
  }
  const size_t eq = item.find('=', open);
  if (item.back() != ']' || eq == std::string_view::npos) {
    throw Error(ErrorCode::kBadPolicy, "line " + std::to_string(line) +
                                           ": bad selector '" +
                                           std::string(item) + "'");
  }
  sel.name = std::string(item.substr(0, open));
  sel.attribute = std::string(item.substr(open + 1, eq - open - 1));
  std::string_view value = item.substr(eq + 1, item.size() - eq - 2);
  if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
      value.back() == value.front()) {
    value = value.substr(1, value.size() - 2);
  }
  sel.value = std::string(value);
  if (sel.name.empty() || sel.attribute.empty()) {
    throw Error(ErrorCode::kBadPolicy,
                "line " + std::to_string(line) + ": bad selector");
  }
  return sel;
}

bool MatchesAny(const std::set<ElementSelector>& selectors,
                const xml::Node& element) {
  for (const auto& sel : selectors) {
    if (sel.Matches(element)) return true;
  }
  return false;
}

}  // namespace

bool ElementSelector::Matches(const xml::Node& element) const {
  if (!element.is_element() || element.name() != name) return false;
  if (attribute.empty()) return true;
  const std::string* v = element.FindAttribute(attribute);
  return v != nullptr && *v == value;
}

bool ElementSelector::operator<(const ElementSelector& other) const {
  return std::tie(name, attribute, value) <
         std::tie(other.name, other.attribute, other.value);
}

ElementPolicy ElementPolicy::Default() {
  return Parse(R"(# Default text/paratext policy for EpiDoc editions.
discard: note app bibl teiHeader figDesc speaker head ref[type=note-anchor]
keep: foreign add p l q quote said div sp lg ab body choice
keep: sic corr abbr expan reg orig hi name persName placeName geogName
keep: num date seg w pc unclear supplied title cit gap lb pb milestone
block: div p l lg sp ab lb
prefer: corr>sic expan>abbr reg>orig
)");
}

ElementPolicy ElementPolicy::Parse(std::string_view content) {
  ElementPolicy policy;
  std::istringstream in{std::string(content)};
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto words = SplitWords(line);
    if (words.empty()) continue;
    const size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kBadPolicy,
                  "line " + std::to_string(line_no) + ": missing ':'");
    }
    const auto key_words = SplitWords(line.substr(0, colon));
    if (key_words.size() != 1) {
      throw Error(ErrorCode::kBadPolicy,
                  "line " + std::to_string(line_no) + ": bad directive");
    }
    const std::string_view key = key_words[0];
    for (std::string_view item : SplitWords(line.substr(colon + 1))) {
      if (key == "discard") {
        policy.discard.insert(ParseSelector(item, line_no));
      } else if (key == "keep") {
        policy.keep.insert(ParseSelector(item, line_no));
      } else if (key == "block") {
        policy.block.insert(std::string(item));
      } else if (key == "prefer") {
        const size_t gt = item.find('>');
        if (gt == std::string_view::npos || gt == 0 || gt + 1 == item.size()) {
          throw Error(ErrorCode::kBadPolicy, "line " + std::to_string(line_no) +
                                                 ": bad preference '" +
                                                 std::string(item) + "'");
        }
        policy.choice_preferences.emplace_back(item.substr(0, gt),
                                               item.substr(gt + 1));
      } else {
        throw Error(ErrorCode::kBadPolicy, "line " + std::to_string(line_no) +
                                               ": unknown directive '" +
                                               std::string(key) + "'");
      }
    }
  }
  for (const auto& sel : policy.discard) {
    if (policy.keep.count(sel) != 0) {
      throw Error(ErrorCode::kBadPolicy,
                  "'" + sel.name + "' is both discarded and kept");
    }
  }
  for (const auto& [winner, loser] : policy.choice_preferences) {
    if (winner == loser) {
      throw Error(ErrorCode::kBadPolicy, "preference '" + winner +
                                             "' names the same element twice");
    }
  }
  return policy;
}

ElementPolicy ElementPolicy::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read policy " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

bool ElementPolicy::IsDiscarded(const xml::Node& element) const {
  return MatchesAny(discard, element);
}

bool ElementPolicy::IsKnown(const xml::Node& element) const {
  if (MatchesAny(keep, element) || MatchesAny(discard, element)) return true;
  if (block.count(element.name()) != 0) return true;
  for (const auto& [winner, loser] : choice_preferences) {
    if (element.name() == winner || element.name() == loser) return true;
  }
  return false;
}

namespace {

class Extractor {
 public:
  Extractor(const ElementPolicy& policy, ExtractionDiagnostics* diagnostics)
      : policy_(policy), diagnostics_(diagnostics) {}

  void Visit(const xml::Node& node) {
    switch (node.kind()) {
      case xml::Node::Kind::kText:
        VisitText(node);
        return;
      case xml::Node::Kind::kComment:
        return;
      case xml::Node::Kind::kElement:
        break;
    }
    if (policy_.IsDiscarded(node)) return;
    if (!policy_.IsKnown(node) && diagnostics_ != nullptr) {
      diagnostics_->unknown_elements.insert(node.name());
    }
    const bool is_block = policy_.block.count(node.name()) != 0;
    if (is_block) BlockBoundary(node);
    if (node.name() == "choice") {
      if (const xml::Node* pick = PickAlternative(node)) Visit(*pick);
    } else {
      for (const auto& child : node.children()) Visit(*child);
    }
    if (is_block) BlockBoundary(node);
  }

  BaseText Finish(std::string document_id) {
    BaseText base;
    base.document_id = std::move(document_id);
    base.text = std::move(text_);
    // Whitespace that collapsed into nothing leaves its node unreferenced;
    // keep only the nodes the map points into, in first-use order.
    std::vector<uint32_t> renumber(node_paths_.size(), kUnused);
    for (CharOrigin& origin : origins_) {
      uint32_t& index = renumber[origin.node];
      if (index == kUnused) {
        index = static_cast<uint32_t>(base.node_paths.size());
        base.node_paths.push_back(std::move(node_paths_[origin.node]));
      }
      origin.node = index;
    }
    base.source_map = CompressSourceMap(origins_);
    return base;
  }

 private:
  static constexpr uint32_t kUnused = UINT32_MAX;

  uint32_t NodeIndex(const xml::Node& node) {
    auto [it, inserted] = node_index_.try_emplace(
        &node, static_cast<uint32_t>(node_paths_.size()));
    if (inserted) node_paths_.push_back(xml::NodePath(node));
    return it->second;
  }

  const xml::Node* PickAlternative(const xml::Node& choice) const {
    auto find = [&](const std::string& name) -> const xml::Node* {
      for (const auto& child : choice.children()) {
        if (child->is_element() && child->name() == name &&
            !policy_.IsDiscarded(*child)) {
          return child.get();
        }
      }
      return nullptr;
    };
    for (const auto& [winner, loser] : policy_.choice_preferences) {
      if (const xml::Node* n = find(winner)) return n;
    }
    for (const auto& [winner, loser] : policy_.choice_preferences) {
      if (const xml::Node* n = find(loser)) return n;
    }
    for (const auto& child : choice.children()) {
      if (child->is_element() && !policy_.IsDiscarded(*child)) {
        return child.get();
      }
    }
    return nullptr;
  }

  void VisitText(const xml::Node& node) {
    const std::u32string& s = node.text();
    uint32_t index = 0;
    bool have_index = false;
    for (size_t i = 0; i < s.size(); ++i) {
      const char32_t c = s[i];
      if (!have_index) {
        index = NodeIndex(node);
        have_index = true;
      }
      const auto pos = static_cast<uint32_t>(i + 1);
      if (IsWhitespace(c)) {
        if (!pending_space_ || pending_synthetic_) {
          pending_space_ = true;
          pending_synthetic_ = false;
          pending_origin_ = {index, pos, 1, 0};
        } else if (pending_origin_.node == index &&
                   pending_origin_.node_begin + pending_origin_.node_length ==
                       pos) {
          ++pending_origin_.node_length;
        }
        continue;
      }
      FlushSpace();
      text_.push_back(c);
      origins_.push_back({index, pos, 1, 0});
    }
  }

  void BlockBoundary(const xml::Node& element) {
    if (element.name() == "lb") {
      const std::string* brk = element.FindAttribute("break");
      if (brk != nullptr && *brk == "no") return;
    }
    if (pending_space_ || text_.empty()) return;
    pending_space_ = true;
    pending_synthetic_ = true;
    pending_origin_ = {NodeIndex(element), 0, 0, 0};
  }

  void FlushSpace() {
    if (!pending_space_) return;
    pending_space_ = false;
    if (text_.empty()) return;
    CharOrigin origin = pending_origin_;
    if (pending_synthetic_) {
      if (diagnostics_ != nullptr) ++diagnostics_->split_words;
      origin.group = next_group_++;
    } else if (origin.node_length != 1) {
      origin.group = next_group_++;
    }
    text_.push_back(U' ');
    origins_.push_back(origin);
  }

  const ElementPolicy& policy_;
  ExtractionDiagnostics* diagnostics_;
  std::u32string text_;
  std::vector<CharOrigin> origins_;
  std::vector<std::string> node_paths_;
  std::unordered_map<const xml::Node*, uint32_t> node_index_;
  bool pending_space_ = false;
  bool pending_synthetic_ = false;
  CharOrigin pending_origin_;
  uint32_t next_group_ = 1;
};

const xml::Node* FindBody(const xml::Node& node) {
  if (node.is_element() && node.name() == "body" && node.parent() != nullptr &&
      node.parent()->name() == "text") {
    return &node;
  }
  for (const auto& child : node.children()) {
    if (!child->is_element() || child->name() == "teiHeader") continue;
    if (const xml::Node* body = FindBody(*child)) return body;
  }
  return nullptr;
}

}  // namespace

BaseText ClassifyAndExtract(const xml::Document& doc,
                            const ElementPolicy& policy,
                            std::string document_id,
                            ExtractionDiagnostics* diagnostics) {
  const xml::Node* body = doc.root() ? FindBody(*doc.root()) : nullptr;
  if (body == nullptr) {
    throw Error(ErrorCode::kMissingBody,
                "no <text><body> in document " + document_id);
  }
  Extractor extractor(policy, diagnostics);
  extractor.Visit(*body);
  return extractor.Finish(std::move(document_id));
}

std::string DocumentIdFromPath(std::string_view path) {
  std::string name = std::filesystem::path(path).filename().string();
  constexpr std::string_view kSuffix = ".xml";
  if (name.size() > kSuffix.size() &&
      name.compare(name.size() - kSuffix.size(), kSuffix.size(), kSuffix) ==
          0) {
    name.resize(name.size() - kSuffix.size());
  }
  return name;
}

const xml::Node* ResolveNodePath(const xml::Document& doc,
                                 std::string_view path) {
  const auto nodes = xml::Select(doc, path);
  return nodes.size() == 1 ? nodes.front() : nullptr;
}

NodePathIndex::NodePathIndex(const xml::Document& doc) {
  if (doc.root() == nullptr) return;
  std::vector<std::pair<const xml::Node*, std::string>> stack;
  stack.emplace_back(doc.root(), "");
  while (!stack.empty()) {
    auto [node, parent_path] = std::move(stack.back());
    stack.pop_back();
    std::string path = std::move(parent_path);
    path += '/';
    if (node->is_element()) {
      path += node->name();
    } else if (node->is_text()) {
      path += "text()";
    } else {
      path += "comment()";
    }
    path += '[' + std::to_string(node->sibling_position()) + ']';
    for (const auto& child : node->children()) {
      stack.emplace_back(child.get(), path);
    }
    nodes_.emplace(std::move(path), node);
  }
}

const xml::Node* NodePathIndex::Find(std::string_view path) const {
  const auto it = nodes_.find(std::string(path));
  return it == nodes_.end() ? nullptr : it->second;
}

}  // namespace standoff
