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

#include <unordered_map>

#include "standoff/error.h"
#include "standoff/tei_ingestion.h"

namespace standoff {
namespace {

// One location step of a citation template, e.g. tei:div[@n='$2'].
struct TemplateStep {
  std::string name;
  std::vector<std::pair<std::string, std::string>> fixed;
  std::string placeholder_attribute;
  size_t level = 0;  // 0 when the step carries no placeholder
};

std::string_view StripXpathWrapper(std::string_view pattern) {
  constexpr std::string_view kPrefix = "#xpath(";
  if (pattern.substr(0, kPrefix.size()) == kPrefix) {
    pattern.remove_prefix(kPrefix.size());
    if (!pattern.empty() && pattern.back() == ')') pattern.remove_suffix(1);
  }
  while (!pattern.empty() && (pattern.back() == ' ' || pattern.back() == '\n'))
    pattern.remove_suffix(1);
  while (!pattern.empty() && (pattern.front() == ' ' || pattern.front() == '\n'))
    pattern.remove_prefix(1);
  return pattern;
}

// Placeholder numbers in order of appearance.
std::vector<size_t> Placeholders(std::string_view text) {
  std::vector<size_t> out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '$') continue;
    size_t j = i + 1;
    size_t value = 0;
    while (j < text.size() && text[j] >= '0' && text[j] <= '9') {
      value = value * 10 + static_cast<size_t>(text[j] - '0');
      ++j;
    }
    if (j > i + 1) out.push_back(value);
    i = j - 1;
  }
  return out;
}

// Splits at '/' outside brackets and quotes. Returns false on "//".
bool SplitSteps(std::string_view path, std::vector<std::string_view>* steps) {
  if (path.empty() || path[0] != '/') return false;
  int depth = 0;
  char quote = 0;
  size_t start = 1;
  for (size_t i = 1; i <= path.size(); ++i) {
    const char c = i < path.size() ? path[i] : '/';
    if (quote != 0) {
      if (c == quote) quote = 0;
      continue;
    }
    if (c == '\'' || c == '"') quote = c;
    else if (c == '[') ++depth;
    else if (c == ']') --depth;
    else if (c == '/' && depth == 0) {
      if (i == start) return false;
      steps->push_back(path.substr(start, i - start));
      start = i + 1;
    }
  }
  return true;
}

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

std::vector<TemplateStep> ParseTemplate(std::string_view xpath) {
  std::vector<std::string_view> raw_steps;
  if (!SplitSteps(xpath, &raw_steps)) {
    throw Error(ErrorCode::kNoCtsDeclaration,
                "unsupported citation template '" + std::string(xpath) + "'");
  }
  std::vector<TemplateStep> steps;
  for (std::string_view raw : raw_steps) {
    TemplateStep step;
    const size_t bracket = raw.find('[');
    std::string_view name = raw.substr(0, bracket);
    if (const size_t colon = name.find(':'); colon != std::string_view::npos) {
      name.remove_prefix(colon + 1);
    }
    step.name = std::string(TrimView(name));
    std::string_view rest =
        bracket == std::string_view::npos ? "" : raw.substr(bracket);
    while (!rest.empty() && rest.front() == '[') {
      const size_t close = rest.find(']');
      if (close == std::string_view::npos) break;
      std::string_view body = rest.substr(1, close - 1);
      rest.remove_prefix(close + 1);
      // Conditions joined by "and": @attr='value'.
      while (!body.empty()) {
        size_t and_pos = body.find(" and ");
        std::string_view cond = TrimView(body.substr(0, and_pos));
        body = and_pos == std::string_view::npos ? ""
                                                 : body.substr(and_pos + 5);
        const size_t eq = cond.find('=');
        if (cond.empty() || cond[0] != '@' || eq == std::string_view::npos) {
          throw Error(ErrorCode::kNoCtsDeclaration,
                      "unsupported predicate '" + std::string(cond) + "'");
        }
        std::string attr(TrimView(cond.substr(1, eq - 1)));
        std::string_view value = TrimView(cond.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '\'' || value.front() == '"')) {
          value = value.substr(1, value.size() - 2);
        }
        const auto placeholders = Placeholders(value);
        if (!placeholders.empty() && value.size() > 1 && value[0] == '$') {
          step.level = placeholders[0];
          step.placeholder_attribute = std::move(attr);
        } else {
          step.fixed.emplace_back(std::move(attr), std::string(value));
        }
      }
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

const xml::Node* FindRefsDecl(const xml::Node& node) {
  if (node.is_element() && node.name() == "refsDecl" &&
      node.parent() != nullptr && node.parent()->name() == "encodingDesc") {
    const std::string* n = node.FindAttribute("n");
    if (n != nullptr && *n == "CTS") return &node;
  }
  for (const auto& child : node.children()) {
    if (!child->is_element()) continue;
    if (const xml::Node* found = FindRefsDecl(*child)) return found;
  }
  return nullptr;
}

}  // namespace

std::string CtsCitation::ToString() const {
  std::string out;
  for (size_t i = 0; i < components.size(); ++i) {
    if (i > 0) out += '.';
    out += components[i];
  }
  return out;
}

CtsCitation CtsCitation::FromString(std::string_view rendered) {
  CtsCitation citation;
  if (rendered.empty()) return citation;
  size_t start = 0;
  while (true) {
    const size_t dot = rendered.find('.', start);
    citation.components.emplace_back(rendered.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return citation;
}

CtsScheme ParseCtsScheme(const xml::Document& doc, std::string document_id) {
  const xml::Node* decl = doc.root() ? FindRefsDecl(*doc.root()) : nullptr;
  if (decl == nullptr) {
    throw Error(ErrorCode::kNoCtsDeclaration,
                "no <refsDecl n=\"CTS\"> in " + document_id);
  }
  struct Pattern {
    std::string name;
    std::string xpath;
    size_t depth;
  };
  std::vector<Pattern> patterns;
  for (const auto& child : decl->children()) {
    if (!child->is_element() || child->name() != "cRefPattern") continue;
    const std::string* replacement = child->FindAttribute("replacementPattern");
    if (replacement == nullptr) continue;
    Pattern p;
    p.xpath = std::string(StripXpathWrapper(*replacement));
    const std::string* n = child->FindAttribute("n");
    p.name = n ? *n : "";
    const auto placeholders = Placeholders(p.xpath);
    for (size_t i = 0; i < placeholders.size(); ++i) {
      if (placeholders[i] != i + 1) {
        throw Error(ErrorCode::kNoCtsDeclaration,
                    "placeholders out of order in '" + p.xpath + "'");
      }
    }
    p.depth = placeholders.size();
    if (p.depth > 0) patterns.push_back(std::move(p));
  }
  if (patterns.empty()) {
    throw Error(ErrorCode::kNoCtsDeclaration,
                "refsDecl in " + document_id + " declares no citation pattern");
  }
  const Pattern* deepest = &patterns.front();
  for (const auto& p : patterns) {
    if (p.depth > deepest->depth) deepest = &p;
  }
  ParseTemplate(deepest->xpath);  // rejects unsupported syntax up front

  CtsScheme scheme;
  scheme.xpath_template = deepest->xpath;
  scheme.document_id = std::move(document_id);
  for (size_t level = 1; level <= deepest->depth; ++level) {
    std::string name;
    for (const auto& p : patterns) {
      if (p.depth == level && !p.name.empty()) name = p.name;
    }
    if (name.empty()) name = "level" + std::to_string(level);
    scheme.division_names.push_back(std::move(name));
  }
  return scheme;
}

std::vector<CtsCitation> AssignCitations(
    const xml::Document& doc, const BaseText& base,
    const std::vector<TokenSpan>& tokens, const CtsScheme& scheme,
    CitationDiagnostics* diagnostics) {
  const std::vector<TemplateStep> steps = ParseTemplate(scheme.xpath_template);
  const NodePathIndex index(doc);
  std::unordered_map<uint32_t, std::pair<CtsCitation, bool>> by_node;
  std::vector<CtsCitation> citations;
  citations.reserve(tokens.size());
  for (const TokenSpan& token : tokens) {
    const SourceLocation loc = MapOffsetToSource(base, token.start);
    auto it = by_node.find(loc.node);
    if (it == by_node.end()) {
      const xml::Node* node = index.Find(loc.node_path);
      std::vector<const xml::Node*> chain;
      for (const xml::Node* n = node; n != nullptr; n = n->parent()) {
        if (n->is_element()) chain.push_back(n);
      }
      CtsCitation citation;
      bool fallback = false;
      size_t k = 0;
      for (auto a = chain.rbegin(); a != chain.rend() && k < steps.size();
           ++a, ++k) {
        const TemplateStep& step = steps[k];
        const xml::Node& element = **a;
        if (element.name() != step.name) break;
        bool fixed_ok = true;
        for (const auto& [attr, value] : step.fixed) {
          const std::string* v = element.FindAttribute(attr);
          if (v == nullptr || *v != value) fixed_ok = false;
        }
        if (!fixed_ok) break;
        if (step.level == 0) continue;
        if (const std::string* v =
                element.FindAttribute(step.placeholder_attribute)) {
          citation.components.push_back(*v);
        } else {
          citation.components.push_back(
              std::to_string(element.sibling_position()));
          fallback = true;
        }
      }
      it = by_node.emplace(loc.node, std::make_pair(std::move(citation), fallback))
               .first;
    }
    if (diagnostics != nullptr) {
      if (it->second.first.empty()) ++diagnostics->outside_division;
      if (it->second.second) ++diagnostics->positional_fallbacks;
    }
    citations.push_back(it->second.first);
  }
  return citations;
}

std::string InstantiateTemplate(const CtsScheme& scheme,
                                const CtsCitation& citation) {
  const size_t m = citation.components.size();
  std::string path = scheme.xpath_template;
  if (m == 0) return {};
  const std::string marker = "$" + std::to_string(m);
  size_t pos = path.find(marker);
  if (pos == std::string::npos) return {};
  // Cut at the end of the step holding the last filled placeholder.
  int depth = 0;
  size_t cut = path.size();
  for (size_t i = pos; i < path.size(); ++i) {
    if (path[i] == '[') ++depth;
    else if (path[i] == ']') --depth;
    else if (path[i] == '/' && depth <= 0) {
      cut = i;
      break;
    }
  }
  path.resize(cut);
  for (size_t k = m; k >= 1; --k) {
    const std::string ph = "$" + std::to_string(k);
    for (size_t at = path.find(ph); at != std::string::npos;
         at = path.find(ph, at + citation.components[k - 1].size())) {
      path.replace(at, ph.size(), citation.components[k - 1]);
    }
  }
  return path;
}

}  // namespace standoff
