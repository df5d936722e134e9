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

#include "standoff/serialization.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "standoff/error.h"
#include "standoff/tei_ingestion.h"
#include "standoff/utf.h"

namespace standoff {
namespace fs = std::filesystem;
namespace {

constexpr std::string_view kXmlDeclaration =
    "<?xml version=\"1.0\" standalone=\"no\"?>\n";
constexpr std::string_view kLaulaDeclaration =
    "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
constexpr std::string_view kXlinkNamespace = "http://www.w3.org/1999/xlink";
constexpr std::string_view kPaulaVersion = "1.1";

std::string FileName(const std::string& doc_id, std::string_view name) {
  return doc_id + "." + std::string(name) + ".xml";
}

std::string LayerFromFileName(const std::string& doc_id,
                              std::string_view file) {
  const std::string prefix = doc_id + ".";
  constexpr std::string_view kSuffix = ".xml";
  if (file.size() <= prefix.size() + kSuffix.size() ||
      file.substr(0, prefix.size()) != prefix ||
      file.substr(file.size() - kSuffix.size()) != kSuffix) {
    throw Error(ErrorCode::kMalformedPointer,
                "file '" + std::string(file) + "' is not part of " + doc_id);
  }
  return std::string(file.substr(
      prefix.size(), file.size() - prefix.size() - kSuffix.size()));
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

xml::Document ReadXml(const fs::path& path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kMissingFile, path.string());
  }
  return xml::Document::ParseFile(path.string());
}

void RequireValid(const AnnotationGraph& graph) {
  const auto violations = Validate(graph);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    throw Error(ErrorCode::kUnvalidatedGraph,
                std::to_string(violations.size()) + " violations, first: " +
                    std::string(ViolationKindName(v.kind)) + " in layer '" +
                    v.layer + "' " + v.id + ": " + v.message);
  }
}

const std::string& RequireAttribute(const xml::Node& node,
                                    std::string_view name) {
  const std::string* value = node.FindAttribute(name);
  if (value == nullptr) {
    throw Error(ErrorCode::kMalformedPointer,
                "<" + node.name() + "> lacks attribute " + std::string(name));
  }
  return *value;
}

size_t RequireNumber(const xml::Node& node, std::string_view name) {
  const std::string& text = RequireAttribute(node, name);
  size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kMalformedPointer,
                "attribute " + std::string(name) + "='" + text +
                    "' is not a number");
  }
  return value;
}

std::vector<const xml::Node*> ChildElements(const xml::Node& node,
                                            std::string_view name = {}) {
  std::vector<const xml::Node*> out;
  for (const auto& child : node.children()) {
    if (child->is_element() && (name.empty() || child->name() == name)) {
      out.push_back(child.get());
    }
  }
  return out;
}

const xml::Node& RequireChild(const xml::Node& node, std::string_view name) {
  for (const auto& child : node.children()) {
    if (child->is_element() && child->name() == name) return *child;
  }
  throw Error(ErrorCode::kMalformedPointer,
              "<" + node.name() + "> lacks <" + std::string(name) + ">");
}

// Comments cannot hold "--"; metadata values are entity-escaped.
std::string EscapeComment(std::string_view text) {
  std::string out;
  for (char c : xml::EscapeAttribute(text)) {
    if (c == '-') {
      out += "&#45;";
    } else {
      out += c;
    }
  }
  return out;
}

std::string UnescapeEntities(std::string_view text) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out += text[i];
      continue;
    }
    const size_t semi = text.find(';', i);
    if (semi == std::string_view::npos) {
      out += text[i];
      continue;
    }
    const std::string_view entity = text.substr(i + 1, semi - i - 1);
    if (entity == "amp") out += '&';
    else if (entity == "lt") out += '<';
    else if (entity == "gt") out += '>';
    else if (entity == "quot") out += '"';
    else if (!entity.empty() && entity[0] == '#') {
      uint32_t cp = 0;
      std::from_chars(entity.data() + 1, entity.data() + entity.size(), cp);
      AppendUtf8(static_cast<char32_t>(cp), &out);
    } else {
      out.append(text.substr(i, semi - i + 1));
    }
    i = semi;
  }
  return out;
}

bool DependsOn(const AnnotationGraph& graph, const Layer& layer,
               std::string_view removed) {
  std::string_view cursor = LayerName(layer);
  for (size_t steps = 0; steps <= graph.layers().size(); ++steps) {
    if (cursor == removed) return true;
    const Layer* l = graph.FindLayer(cursor);
    if (l == nullptr) return false;
    cursor = ReferencedLayer(*l);
  }
  return false;
}

std::string FeatureValueText(std::string_view value) {
  return xml::EscapeAttribute(value);
}

// ----- id-set encodings -----

std::string PaulaIdList(const std::vector<std::string>& ids) {
  if (ids.size() == 1) return "#" + ids[0];
  std::string out = "(";
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ',';
    out += '#' + ids[i];
  }
  return out + ")";
}

std::vector<std::string> ParsePaulaIdList(std::string_view href) {
  std::vector<std::string> ids;
  if (!href.empty() && href.front() == '(') {
    if (href.back() != ')') {
      throw Error(ErrorCode::kMalformedPointer, "bad id list " + std::string(href));
    }
    href = href.substr(1, href.size() - 2);
    size_t start = 0;
    while (true) {
      const size_t comma = href.find(',', start);
      std::string_view item = href.substr(start, comma - start);
      if (item.size() < 2 || item[0] != '#') {
        throw Error(ErrorCode::kMalformedPointer, "bad id '" + std::string(item) + "'");
      }
      ids.emplace_back(item.substr(1));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else {
    if (href.size() < 2 || href[0] != '#') {
      throw Error(ErrorCode::kMalformedPointer, "bad id '" + std::string(href) + "'");
    }
    ids.emplace_back(href.substr(1));
  }
  return ids;
}

// LAULA id sets: space-separated ids, with "a..b" standing for the run of
// target marks from a to b inclusive.
std::string LaulaIdList(const std::vector<std::string>& ids,
                        const std::unordered_map<std::string, size_t>& position) {
  std::string out;
  size_t i = 0;
  while (i < ids.size()) {
    size_t j = i;
    const auto p = position.find(ids[i]);
    if (p != position.end()) {
      while (j + 1 < ids.size()) {
        const auto q = position.find(ids[j + 1]);
        if (q == position.end() || q->second != p->second + (j + 1 - i)) break;
        ++j;
      }
    }
    if (!out.empty()) out += ' ';
    out += ids[i];
    if (j > i) out += ".." + ids[j];
    i = j + 1;
  }
  return out;
}

std::vector<std::string> ParseLaulaIdList(
    std::string_view text, const MarkLayer& target,
    const std::unordered_map<std::string, size_t>& position) {
  std::vector<std::string> ids;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find(' ', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(start, end - start);
    start = end + 1;
    if (item.empty()) continue;
    const size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      ids.emplace_back(item);
      continue;
    }
    const auto a = position.find(std::string(item.substr(0, dots)));
    const auto b = position.find(std::string(item.substr(dots + 2)));
    if (a == position.end() || b == position.end() || b->second < a->second) {
      throw Error(ErrorCode::kDanglingReference,
                  "id range '" + std::string(item) + "'");
    }
    for (size_t k = a->second; k <= b->second; ++k) {
      ids.push_back(target.marks[k].id);
    }
  }
  return ids;
}

std::unordered_map<std::string, size_t> Positions(const MarkLayer& layer) {
  std::unordered_map<std::string, size_t> pos;
  for (size_t i = 0; i < layer.marks.size(); ++i) pos.emplace(layer.marks[i].id, i);
  return pos;
}

std::string FindDocumentId(const fs::path& directory) {
  if (!fs::is_directory(directory)) {
    throw Error(ErrorCode::kMissingFile, "no directory " + directory.string());
  }
  std::string found;
  constexpr std::string_view kSuffix = ".anno.xml";
  for (const auto& entry : fs::directory_iterator(directory)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > kSuffix.size() &&
        name.compare(name.size() - kSuffix.size(), kSuffix.size(), kSuffix) == 0) {
      if (!found.empty()) {
        throw Error(ErrorCode::kMalformedPointer,
                    "several annotation sets in " + directory.string());
      }
      found = name.substr(0, name.size() - kSuffix.size());
    }
  }
  if (found.empty()) {
    throw Error(ErrorCode::kMissingFile, "no *.anno.xml in " + directory.string());
  }
  return found;
}

}  // namespace

std::string PaulaRangePointer(const CharRange& range) {
  return "#xpointer(string-range(//body,''," + std::to_string(range.start) +
         "," + std::to_string(range.length) + "))";
}

CharRange ParsePaulaRangePointer(std::string_view pointer) {
  constexpr std::string_view kPrefix = "#xpointer(string-range(//body,'',";
  constexpr std::string_view kSuffix = "))";
  auto fail = [&]() -> CharRange {
    throw Error(ErrorCode::kMalformedPointer,
                "bad range pointer '" + std::string(pointer) + "'");
  };
  if (pointer.size() <= kPrefix.size() + kSuffix.size() ||
      pointer.substr(0, kPrefix.size()) != kPrefix ||
      pointer.substr(pointer.size() - kSuffix.size()) != kSuffix) {
    return fail();
  }
  const std::string_view args = pointer.substr(
      kPrefix.size(), pointer.size() - kPrefix.size() - kSuffix.size());
  const size_t comma = args.find(',');
  if (comma == std::string_view::npos) return fail();
  CharRange range;
  const auto parse = [&](std::string_view s, size_t* out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
  };
  if (!parse(args.substr(0, comma), &range.start) ||
      !parse(args.substr(comma + 1), &range.length) || range.start < 1 ||
      range.length < 1) {
    return fail();
  }
  return range;
}

const std::vector<NamePair>& LaulaElementNames() {
  static const std::vector<NamePair> kNames = {
      {"paula", "p"},    {"header", "h"},  {"markList", "M"},
      {"mark", "m"},     {"featList", "F"}, {"feat", "f"},
      {"relList", "R"},  {"rel", "r"},     {"structList", "S"},
      {"struct", "s"},   {"body", "b"},
  };
  return kNames;
}

const std::vector<NamePair>& LaulaAttributeNames() {
  static const std::vector<NamePair> kNames = {
      {"version", "V"}, {"paula_id", "p"},  {"type", "t"},
      {"xml:base", "b"}, {"id", "i"},       {"xlink:href", "h"},
      {"value", "v"},   {"target", "g"},
  };
  return kNames;
}

AnnotationGraph WithoutLayer(const AnnotationGraph& graph,
                             std::string_view layer) {
  AnnotationGraph out(graph.base());
  out.metadata() = graph.metadata();
  for (const Layer& l : graph.layers()) {
    if (!DependsOn(graph, l, layer)) out.AddLayer(l);
  }
  return out;
}

// ---------------------------------------------------------------- PAULA

std::vector<std::string> WritePaula(const AnnotationGraph& graph,
                                    const std::string& directory) {
  RequireValid(graph);
  const AnnotationGraph g = WithoutLayer(graph, kSentenceLayer);
  const std::string& doc = g.base().document_id;
  const fs::path dir(directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + directory);

  std::vector<std::string> written;
  std::vector<std::string> files;
  auto emit = [&](std::string_view name, const std::string& content) {
    const std::string file = FileName(doc, name);
    WriteFile(dir / file, content);
    written.push_back((dir / file).string());
    files.push_back(file);
  };
  auto open = [&](std::string_view dtd, std::string_view name,
                  std::string_view header_type) {
    std::string s(kXmlDeclaration);
    s += "<!DOCTYPE paula SYSTEM \"" + std::string(dtd) + "\">\n";
    s += "<paula version=\"" + std::string(kPaulaVersion) + "\">\n";
    s += "<header paula_id=\"" + xml::EscapeAttribute(doc + "." + std::string(name)) + "\"";
    if (!header_type.empty()) s += " type=\"" + std::string(header_type) + "\"";
    s += "/>\n";
    return s;
  };

  {
    std::string s = open("paula_text.dtd", kTextLayer, "text");
    s += "<body>" + xml::EscapeText(Utf32ToUtf8(g.base().text)) + "</body>\n";
    s += "</paula>\n";
    emit(kTextLayer, s);
  }

  for (const Layer& layer : g.layers()) {
    const std::string& name = LayerName(layer);
    const std::string base_file =
        FileName(doc, ReferencedLayer(layer));
    std::string s;
    if (const auto* marks = std::get_if<MarkLayer>(&layer)) {
      s = open("paula_mark.dtd", name, "");
      s += "<markList xmlns:xlink=\"" + std::string(kXlinkNamespace) +
           "\" type=\"" + xml::EscapeAttribute(name) + "\" xml:base=\"" +
           xml::EscapeAttribute(base_file) + "\">\n";
      for (const Mark& m : marks->marks) {
        std::string href;
        if (const auto* r = std::get_if<CharRange>(&m.target)) {
          href = PaulaRangePointer(*r);
        } else {
          href = PaulaIdList(std::get<std::vector<std::string>>(m.target));
        }
        s += "<mark id=\"" + xml::EscapeAttribute(m.id) + "\" xlink:href=\"" +
             xml::EscapeAttribute(href) + "\"/>\n";
      }
      s += "</markList>\n";
    } else if (const auto* feature = std::get_if<FeatureLayer>(&layer)) {
      s = open("paula_feat.dtd", name, "");
      s += "<featList xmlns:xlink=\"" + std::string(kXlinkNamespace) +
           "\" type=\"" + xml::EscapeAttribute(name) + "\" xml:base=\"" +
           xml::EscapeAttribute(base_file) + "\">\n";
      for (const auto& [id, value] : feature->values) {
        s += "<feat xlink:href=\"#" + xml::EscapeAttribute(id) +
             "\" value=\"" + FeatureValueText(value) + "\"/>\n";
      }
      s += "</featList>\n";
    } else {
      const auto& relation = std::get<RelationLayer>(layer);
      s = open("paula_rel.dtd", name, "");
      s += "<relList xmlns:xlink=\"" + std::string(kXlinkNamespace) +
           "\" type=\"" + xml::EscapeAttribute(name) + "\" xml:base=\"" +
           xml::EscapeAttribute(base_file) + "\">\n";
      size_t n = 0;
      for (const DependencyEdge& e : relation.edges) {
        // Root attachments are implicit: a token without a rel is a root.
        if (e.head == kRootId) continue;
        s += "<rel id=\"rel_" + std::to_string(++n) + "\" xlink:href=\"#" +
             xml::EscapeAttribute(e.head) + "\" target=\"#" +
             xml::EscapeAttribute(e.dependent) + "\"/>\n";
      }
      s += "</relList>\n";
    }
    s += "</paula>\n";
    emit(name, s);
  }

  std::string anno = open("paula_struct.dtd", "anno", "");
  for (const auto& [key, value] : g.metadata()) {
    anno += "<!-- meta " + EscapeComment(key) + "=\"" + EscapeComment(value) +
            "\" -->\n";
  }
  anno += "<structList xmlns:xlink=\"" + std::string(kXlinkNamespace) +
          "\" type=\"annoSet\">\n<struct id=\"anno_1\">\n";
  for (size_t i = 0; i < files.size(); ++i) {
    anno += "<rel id=\"rel_" + std::to_string(i + 1) + "\" xlink:href=\"" +
            xml::EscapeAttribute(files[i]) + "\"/>\n";
  }
  anno += "</struct>\n</structList>\n</paula>\n";
  emit("anno", anno);
  return written;
}

AnnotationGraph ReadPaula(const std::string& directory) {
  const fs::path dir(directory);
  const std::string doc = FindDocumentId(dir);
  const xml::Document anno = ReadXml(dir / FileName(doc, "anno"));

  std::map<std::string, std::string> metadata;
  std::vector<std::string> files;
  const xml::Node& root = *anno.root();
  for (const auto& child : root.children()) {
    if (child->kind() == xml::Node::Kind::kComment) {
      const std::string text = Utf32ToUtf8(child->text());
      constexpr std::string_view kMeta = " meta ";
      if (text.rfind(kMeta, 0) != 0) continue;
      const size_t eq = text.find("=\"");
      const size_t close = text.rfind('"');
      if (eq == std::string::npos || close <= eq + 1) continue;
      metadata[UnescapeEntities(text.substr(kMeta.size(), eq - kMeta.size()))] =
          UnescapeEntities(text.substr(eq + 2, close - eq - 2));
    }
  }
  const xml::Node& struct_list = RequireChild(root, "structList");
  for (const xml::Node* s : ChildElements(struct_list, "struct")) {
    for (const xml::Node* rel : ChildElements(*s, "rel")) {
      files.push_back(RequireAttribute(*rel, "href"));
    }
  }
  const std::string text_file = FileName(doc, kTextLayer);
  if (std::find(files.begin(), files.end(), text_file) == files.end()) {
    throw Error(ErrorCode::kMissingFile, "annotation set lacks " + text_file);
  }
  if (std::find(files.begin(), files.end(), FileName(doc, kTokenLayer)) ==
      files.end()) {
    throw Error(ErrorCode::kMissingFile, "annotation set lacks the token layer");
  }

  BaseText base;
  base.document_id = doc;
  {
    const xml::Document text = ReadXml(dir / text_file);
    base.text = xml::StringValue(RequireChild(*text.root(), "body"));
  }
  AnnotationGraph graph(std::move(base));
  graph.metadata() = std::move(metadata);

  for (const std::string& file : files) {
    if (file == text_file) continue;
    const std::string name = LayerFromFileName(doc, file);
    const xml::Document layer_doc = ReadXml(dir / file);
    const xml::Node& layer_root = *layer_doc.root();
    const std::vector<const xml::Node*> lists = ChildElements(layer_root);
    const xml::Node* list = nullptr;
    for (const xml::Node* n : lists) {
      if (n->name() == "markList" || n->name() == "featList" ||
          n->name() == "relList") {
        list = n;
      }
    }
    if (list == nullptr) {
      throw Error(ErrorCode::kMalformedPointer, file + " holds no layer");
    }
    const std::string referenced =
        LayerFromFileName(doc, RequireAttribute(*list, "xml:base"));
    if (list->name() == "markList") {
      MarkLayer marks{name, referenced, {}};
      for (const xml::Node* m : ChildElements(*list, "mark")) {
        const std::string& href = RequireAttribute(*m, "href");
        Mark mark;
        mark.id = RequireAttribute(*m, "id");
        if (referenced == kTextLayer) {
          const CharRange r = ParsePaulaRangePointer(href);
          if (r.start + r.length - 1 > graph.base().length()) {
            throw Error(ErrorCode::kMalformedPointer,
                        "mark " + mark.id + " points beyond the text (" +
                            std::to_string(graph.base().length()) + " chars)");
          }
          mark.target = r;
        } else {
          mark.target = ParsePaulaIdList(href);
        }
        marks.marks.push_back(std::move(mark));
      }
      graph.AddLayer(std::move(marks));
    } else if (list->name() == "featList") {
      FeatureLayer feature{name, referenced, {}};
      for (const xml::Node* f : ChildElements(*list, "feat")) {
        const auto ids = ParsePaulaIdList(RequireAttribute(*f, "href"));
        if (ids.size() != 1) {
          throw Error(ErrorCode::kMalformedPointer, "feature on several ids");
        }
        feature.values.emplace_back(ids[0], RequireAttribute(*f, "value"));
      }
      graph.AddLayer(std::move(feature));
    } else {
      const MarkLayer* base_marks = graph.FindMarkLayer(referenced);
      if (base_marks == nullptr) {
        throw Error(ErrorCode::kDanglingReference,
                    file + " refers to unknown layer " + referenced);
      }
      std::unordered_map<std::string, std::string> head_of;
      for (const xml::Node* r : ChildElements(*list, "rel")) {
        const auto heads = ParsePaulaIdList(RequireAttribute(*r, "href"));
        const auto deps = ParsePaulaIdList(RequireAttribute(*r, "target"));
        if (heads.size() != 1 || deps.size() != 1) {
          throw Error(ErrorCode::kMalformedPointer, "relation on several ids");
        }
        if (!head_of.emplace(deps[0], heads[0]).second) {
          throw Error(ErrorCode::kMalformedPointer,
                      "token " + deps[0] + " has several heads");
        }
      }
      RelationLayer relation{name, referenced, {}};
      for (const Mark& m : base_marks->marks) {
        const auto it = head_of.find(m.id);
        relation.edges.push_back(
            {m.id, it == head_of.end() ? std::string(kRootId) : it->second});
        if (it != head_of.end()) head_of.erase(it);
      }
      if (!head_of.empty()) {
        throw Error(ErrorCode::kDanglingReference,
                    "relation on unknown token " + head_of.begin()->first);
      }
      graph.AddLayer(std::move(relation));
    }
  }
  return graph;
}

// ---------------------------------------------------------------- LAULA

std::vector<std::string> WriteLaula(const AnnotationGraph& graph,
                                    const xml::Document& tei,
                                    const std::string& directory) {
  RequireValid(graph);
  const BaseText& base = graph.base();
  if (base.source_map.empty() && base.length() > 0) {
    throw Error(ErrorCode::kSourceMapMissing,
                "document " + base.document_id + " has no source map");
  }
  const std::string& doc = base.document_id;
  const fs::path dir(directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + directory);

  std::vector<std::string> written;
  std::vector<std::string> files;
  auto emit = [&](std::string_view name, const std::string& content) {
    const std::string file = FileName(doc, name);
    WriteFile(dir / file, content);
    written.push_back((dir / file).string());
    files.push_back(file);
  };
  auto open = [&](std::string_view name) {
    std::string s(kLaulaDeclaration);
    s += "<p V=\"" + std::string(kPaulaVersion) + "\"><h p=\"" +
         xml::EscapeAttribute(doc + "." + std::string(name)) + "\"/>\n";
    return s;
  };

  // Source map: node table and segments. A segment carries its text in v
  // whenever the base text differs from the source characters.
  {
    const NodePathIndex index(tei);
    std::vector<const xml::Node*> nodes;
    std::string s = open("map");
    s += "<N>";
    for (size_t i = 0; i < base.node_paths.size(); ++i) {
      const xml::Node* node = index.Find(base.node_paths[i]);
      if (node == nullptr) {
        throw Error(ErrorCode::kSourceMapMissing,
                    "node " + base.node_paths[i] + " not in the TEI document");
      }
      nodes.push_back(node);
      s += "<n i=\"" + std::to_string(i) + "\" x=\"" +
           xml::EscapeAttribute(base.node_paths[i]) + "\"/>";
    }
    s += "</N>\n<G c=\"" + std::to_string(base.length()) + "\">\n";
    for (const SourceSegment& seg : base.source_map) {
      const std::u32string_view text(base.text.data() + seg.text_begin - 1,
                                     seg.text_length);
      s += "<g n=\"" + std::to_string(seg.node) + "\" o=\"" +
           std::to_string(seg.node_begin) + "\"";
      if (seg.chunk) {
        s += " k=\"" + std::to_string(seg.node_length) + "\" c=\"" +
             std::to_string(seg.text_length) + "\" v=\"" +
             xml::EscapeAttribute(Utf32ToUtf8(text)) + "\"";
      } else {
        // Split the run into stretches that repeat the TEI text, which
        // need no value, and stretches that differ, which carry it.
        const std::u32string& node_text = nodes[seg.node]->text();
        size_t i = 0;
        while (i < seg.text_length) {
          const auto matches = [&](size_t k) {
            const size_t at = seg.node_begin - 1 + k;
            return at < node_text.size() && node_text[at] == text[k];
          };
          const bool same = matches(i);
          size_t j = i + 1;
          while (j < seg.text_length && matches(j) == same) ++j;
          if (i > 0) {
            s += "/>\n<g n=\"" + std::to_string(seg.node) + "\" o=\"" +
                 std::to_string(seg.node_begin + i) + "\"";
          }
          s += " l=\"" + std::to_string(j - i) + "\"";
          if (!same) {
            s += " v=\"" + xml::EscapeAttribute(Utf32ToUtf8(text.substr(i, j - i))) + "\"";
          }
          i = j;
        }
      }
      s += "/>\n";
    }
    s += "</G>\n</p>\n";
    emit("map", s);
  }

  for (const Layer& layer : graph.layers()) {
    const std::string& name = LayerName(layer);
    const std::string base_file = ReferencedLayer(layer) == kTextLayer
                                      ? FileName(doc, "map")
                                      : FileName(doc, ReferencedLayer(layer));
    std::string s = open(name);
    if (const auto* marks = std::get_if<MarkLayer>(&layer)) {
      s += "<M t=\"" + xml::EscapeAttribute(name) + "\" b=\"" +
           xml::EscapeAttribute(base_file) + "\">\n";
      std::unordered_map<std::string, size_t> target_pos;
      if (const MarkLayer* target = graph.FindMarkLayer(marks->target_layer)) {
        target_pos = Positions(*target);
      }
      for (const Mark& m : marks->marks) {
        s += "<m i=\"" + xml::EscapeAttribute(m.id) + "\"";
        if (const auto* r = std::get_if<CharRange>(&m.target)) {
          const SourceLocation first = MapOffsetToSource(base, r->start);
          const SourceLocation last =
              MapOffsetToSource(base, r->start + r->length - 1);
          s += " n=\"" + std::to_string(first.node) + "\" o=\"" +
               std::to_string(first.node_offset) + "\"";
          if (last.node != first.node) {
            s += " e=\"" + std::to_string(last.node) + "\"";
          }
          s += " z=\"" +
               std::to_string(last.node_offset + last.node_length - 1) + "\"";
        } else {
          s += " h=\"" +
               xml::EscapeAttribute(LaulaIdList(
                   std::get<std::vector<std::string>>(m.target), target_pos)) +
               "\"";
        }
        s += "/>\n";
      }
      s += "</M>\n";
    } else if (const auto* feature = std::get_if<FeatureLayer>(&layer)) {
      s += "<F t=\"" + xml::EscapeAttribute(name) + "\" b=\"" +
           xml::EscapeAttribute(base_file) + "\">\n";
      for (const auto& [id, value] : feature->values) {
        s += "<f h=\"" + xml::EscapeAttribute(id) + "\" v=\"" +
             FeatureValueText(value) + "\"/>\n";
      }
      s += "</F>\n";
    } else {
      const auto& relation = std::get<RelationLayer>(layer);
      s += "<R t=\"" + xml::EscapeAttribute(name) + "\" b=\"" +
           xml::EscapeAttribute(base_file) + "\">\n";
      for (const DependencyEdge& e : relation.edges) {
        s += "<r h=\"" + xml::EscapeAttribute(e.head) + "\" g=\"" +
             xml::EscapeAttribute(e.dependent) + "\"/>\n";
      }
      s += "</R>\n";
    }
    s += "</p>\n";
    emit(name, s);
  }

  std::string anno = open("anno");
  for (const auto& [key, value] : graph.metadata()) {
    anno += "<d k=\"" + xml::EscapeAttribute(key) + "\" v=\"" +
            xml::EscapeAttribute(value) + "\"/>\n";
  }
  anno += "<S t=\"annoSet\"><s i=\"anno_1\">\n";
  for (size_t i = 0; i < files.size(); ++i) {
    anno += "<r i=\"rel_" + std::to_string(i + 1) + "\" h=\"" +
            xml::EscapeAttribute(files[i]) + "\"/>\n";
  }
  anno += "</s></S>\n</p>\n";
  emit("anno", anno);
  return written;
}

AnnotationGraph ReadLaula(const std::string& directory,
                          const xml::Document& tei) {
  const fs::path dir(directory);
  const std::string doc = FindDocumentId(dir);
  const xml::Document anno = ReadXml(dir / FileName(doc, "anno"));
  const xml::Node& root = *anno.root();

  std::map<std::string, std::string> metadata;
  for (const xml::Node* d : ChildElements(root, "d")) {
    metadata[RequireAttribute(*d, "k")] = RequireAttribute(*d, "v");
  }
  std::vector<std::string> files;
  for (const xml::Node* s : ChildElements(RequireChild(root, "S"), "s")) {
    for (const xml::Node* r : ChildElements(*s, "r")) {
      files.push_back(RequireAttribute(*r, "h"));
    }
  }
  const std::string map_file = FileName(doc, "map");
  if (std::find(files.begin(), files.end(), map_file) == files.end()) {
    throw Error(ErrorCode::kMissingFile, "annotation set lacks " + map_file);
  }
  if (std::find(files.begin(), files.end(), FileName(doc, kTokenLayer)) ==
      files.end()) {
    throw Error(ErrorCode::kMissingFile, "annotation set lacks the token layer");
  }

  // Rebuild the base text from the source document and the map.
  BaseText base;
  base.document_id = doc;
  {
    const xml::Document map = ReadXml(dir / map_file);
    const NodePathIndex index(tei);
    std::vector<const xml::Node*> nodes;
    for (const xml::Node* n : ChildElements(RequireChild(*map.root(), "N"), "n")) {
      if (RequireNumber(*n, "i") != nodes.size()) {
        throw Error(ErrorCode::kMalformedPointer, "node table out of order");
      }
      const std::string& path = RequireAttribute(*n, "x");
      const xml::Node* node = index.Find(path);
      if (node == nullptr) {
        throw Error(ErrorCode::kMalformedPointer,
                    "node " + path + " not in the TEI document");
      }
      base.node_paths.push_back(path);
      nodes.push_back(node);
    }
    const xml::Node& segments = RequireChild(*map.root(), "G");
    const size_t declared_length = RequireNumber(segments, "c");
    for (const xml::Node* g : ChildElements(segments, "g")) {
      SourceSegment seg;
      seg.text_begin = base.text.size() + 1;
      seg.node = static_cast<uint32_t>(RequireNumber(*g, "n"));
      seg.node_begin = RequireNumber(*g, "o");
      if (seg.node >= nodes.size()) {
        throw Error(ErrorCode::kMalformedPointer, "segment node out of range");
      }
      const std::u32string& node_text = nodes[seg.node]->text();
      if (g->FindAttribute("k") != nullptr) {
        seg.chunk = true;
        seg.node_length = RequireNumber(*g, "k");
        seg.text_length = RequireNumber(*g, "c");
        const std::u32string v = Utf8ToUtf32(RequireAttribute(*g, "v"));
        if (v.size() != seg.text_length) {
          throw Error(ErrorCode::kMalformedPointer, "chunk length mismatch");
        }
        base.text += v;
      } else {
        seg.text_length = RequireNumber(*g, "l");
        seg.node_length = seg.text_length;
        if (seg.node_begin < 1 ||
            seg.node_begin - 1 + seg.text_length > node_text.size()) {
          throw Error(ErrorCode::kMalformedPointer,
                      "segment beyond node " + base.node_paths[seg.node]);
        }
        if (const std::string* v = g->FindAttribute("v")) {
          const std::u32string text = Utf8ToUtf32(*v);
          if (text.size() != seg.text_length) {
            throw Error(ErrorCode::kMalformedPointer, "segment length mismatch");
          }
          base.text += text;
        } else {
          base.text += node_text.substr(seg.node_begin - 1, seg.text_length);
        }
      }
      // Plain runs written in pieces join back into one segment.
      if (!seg.chunk && !base.source_map.empty()) {
        SourceSegment& prev = base.source_map.back();
        if (!prev.chunk && prev.node == seg.node &&
            prev.node_begin + prev.node_length == seg.node_begin) {
          prev.text_length += seg.text_length;
          prev.node_length += seg.node_length;
          continue;
        }
      }
      base.source_map.push_back(seg);
    }
    if (base.text.size() != declared_length) {
      throw Error(ErrorCode::kMalformedPointer, "map rebuilds " +
                                                    std::to_string(base.text.size()) +
                                                    " characters, declared " +
                                                    std::to_string(declared_length));
    }
  }
  AnnotationGraph graph(std::move(base));
  graph.metadata() = std::move(metadata);
  const SourceIndex source_index(graph.base());

  for (const std::string& file : files) {
    if (file == map_file) continue;
    const std::string name = LayerFromFileName(doc, file);
    const xml::Document layer_doc = ReadXml(dir / file);
    const xml::Node* list = nullptr;
    for (const xml::Node* n : ChildElements(*layer_doc.root())) {
      if (n->name() == "M" || n->name() == "F" || n->name() == "R") list = n;
    }
    if (list == nullptr) {
      throw Error(ErrorCode::kMalformedPointer, file + " holds no layer");
    }
    const std::string& base_attr = RequireAttribute(*list, "b");
    const std::string referenced = base_attr == map_file
                                       ? std::string(kTextLayer)
                                       : LayerFromFileName(doc, base_attr);
    if (list->name() == "M") {
      MarkLayer marks{name, referenced, {}};
      const MarkLayer* target = graph.FindMarkLayer(referenced);
      std::unordered_map<std::string, size_t> target_pos;
      if (target != nullptr) target_pos = Positions(*target);
      for (const xml::Node* m : ChildElements(*list, "m")) {
        Mark mark;
        mark.id = RequireAttribute(*m, "i");
        if (referenced == kTextLayer) {
          const auto start_node = static_cast<uint32_t>(RequireNumber(*m, "n"));
          const auto end_node =
              m->FindAttribute("e") != nullptr
                  ? static_cast<uint32_t>(RequireNumber(*m, "e"))
                  : start_node;
          size_t first = 0;
          size_t last = 0;
          try {
            first = source_index.Lookup(start_node, RequireNumber(*m, "o")).first;
            last = source_index.Lookup(end_node, RequireNumber(*m, "z")).second;
          } catch (const Error& e) {
            throw Error(ErrorCode::kMalformedPointer,
                        "mark " + mark.id + ": " + e.what());
          }
          if (last < first) {
            throw Error(ErrorCode::kMalformedPointer,
                        "mark " + mark.id + " ends before it starts");
          }
          mark.target = CharRange{first, last - first + 1};
        } else {
          if (target == nullptr) {
            throw Error(ErrorCode::kDanglingReference,
                        file + " refers to unknown layer " + referenced);
          }
          mark.target =
              ParseLaulaIdList(RequireAttribute(*m, "h"), *target, target_pos);
        }
        marks.marks.push_back(std::move(mark));
      }
      graph.AddLayer(std::move(marks));
    } else if (list->name() == "F") {
      FeatureLayer feature{name, referenced, {}};
      for (const xml::Node* f : ChildElements(*list, "f")) {
        feature.values.emplace_back(RequireAttribute(*f, "h"),
                                    RequireAttribute(*f, "v"));
      }
      graph.AddLayer(std::move(feature));
    } else {
      RelationLayer relation{name, referenced, {}};
      for (const xml::Node* r : ChildElements(*list, "r")) {
        relation.edges.push_back(
            {RequireAttribute(*r, "g"), RequireAttribute(*r, "h")});
      }
      graph.AddLayer(std::move(relation));
    }
  }
  return graph;
}

}  // namespace standoff
