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

#include "standoff/annotation_graph.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "standoff/error.h"

namespace standoff {

const std::string& LayerName(const Layer& layer) {
  return std::visit([](const auto& l) -> const std::string& { return l.name; },
                    layer);
}

const std::string& ReferencedLayer(const Layer& layer) {
  if (const auto* mark = std::get_if<MarkLayer>(&layer)) {
    return mark->target_layer;
  }
  if (const auto* feature = std::get_if<FeatureLayer>(&layer)) {
    return feature->base_layer;
  }
  return std::get<RelationLayer>(layer).base_layer;
}

const Layer* AnnotationGraph::FindLayer(std::string_view name) const {
  for (const Layer& layer : layers_) {
    if (LayerName(layer) == name) return &layer;
  }
  return nullptr;
}

const MarkLayer* AnnotationGraph::FindMarkLayer(std::string_view name) const {
  const Layer* layer = FindLayer(name);
  return layer ? std::get_if<MarkLayer>(layer) : nullptr;
}

const FeatureLayer* AnnotationGraph::FindFeatureLayer(
    std::string_view name) const {
  const Layer* layer = FindLayer(name);
  return layer ? std::get_if<FeatureLayer>(layer) : nullptr;
}

const RelationLayer* AnnotationGraph::FindRelationLayer(
    std::string_view name) const {
  const Layer* layer = FindLayer(name);
  return layer ? std::get_if<RelationLayer>(layer) : nullptr;
}

bool AnnotationGraph::operator==(const AnnotationGraph& other) const {
  return base_.document_id == other.base_.document_id &&
         base_.text == other.base_.text && layers_ == other.layers_ &&
         metadata_ == other.metadata_;
}

namespace {

std::unordered_set<std::string> MarkIds(const MarkLayer& layer) {
  std::unordered_set<std::string> ids;
  ids.reserve(layer.marks.size());
  for (const Mark& m : layer.marks) ids.insert(m.id);
  return ids;
}

bool RangeInText(const CharRange& r, size_t text_length) {
  return r.start >= 1 && r.length >= 1 && r.start + r.length - 1 <= text_length;
}

[[noreturn]] void Dangling(const std::string& layer, const std::string& what) {
  throw Error(ErrorCode::kDanglingReference, "layer '" + layer + "': " + what);
}

}  // namespace

void AnnotationGraph::AddLayer(Layer layer) {
  const std::string& name = LayerName(layer);
  if (name.empty() || name == kTextLayer || name == "anno" || name == "map" ||
      FindLayer(name) != nullptr) {
    throw Error(ErrorCode::kDuplicateLayerName, "layer name '" + name + "'");
  }
  const std::string& referenced = ReferencedLayer(layer);
  if (referenced == name) {
    throw Error(ErrorCode::kCycleIntroduced,
                "layer '" + name + "' refers to itself");
  }
  // Existing layers only refer to existing layers, so the new layer can
  // only close a cycle by reaching itself; walk the reference chain.
  {
    std::string_view cursor = referenced;
    std::unordered_set<std::string_view> seen;
    while (cursor != kTextLayer) {
      if (cursor == name) {
        throw Error(ErrorCode::kCycleIntroduced,
                    "layer '" + name + "' closes a reference cycle");
      }
      if (!seen.insert(cursor).second) break;
      const Layer* next = FindLayer(cursor);
      if (next == nullptr) break;
      cursor = ReferencedLayer(*next);
    }
  }

  if (auto* mark_layer = std::get_if<MarkLayer>(&layer)) {
    if (mark_layer->target_layer == kTextLayer) {
      for (const Mark& m : mark_layer->marks) {
        const auto* range = std::get_if<CharRange>(&m.target);
        if (range == nullptr) {
          throw Error(ErrorCode::kInvalidLayer,
                      "layer '" + name + "' mixes id and range targets");
        }
        if (!RangeInText(*range, base_.length())) {
          Dangling(name, "mark " + m.id + " range outside the base text");
        }
      }
    } else {
      const MarkLayer* target = FindMarkLayer(mark_layer->target_layer);
      if (target == nullptr) {
        Dangling(name, "no mark layer '" + mark_layer->target_layer + "'");
      }
      const auto ids = MarkIds(*target);
      for (const Mark& m : mark_layer->marks) {
        const auto* refs = std::get_if<std::vector<std::string>>(&m.target);
        if (refs == nullptr) {
          throw Error(ErrorCode::kInvalidLayer,
                      "layer '" + name + "' mixes id and range targets");
        }
        for (const std::string& ref : *refs) {
          if (ids.count(ref) == 0) Dangling(name, "mark " + m.id + " -> " + ref);
        }
      }
    }
  } else if (auto* feature = std::get_if<FeatureLayer>(&layer)) {
    const MarkLayer* target = FindMarkLayer(feature->base_layer);
    if (target == nullptr) {
      Dangling(name, "no mark layer '" + feature->base_layer + "'");
    }
    const auto ids = MarkIds(*target);
    for (const auto& [id, value] : feature->values) {
      if (ids.count(id) == 0) Dangling(name, "feature on unknown id " + id);
    }
  } else {
    const auto& relation = std::get<RelationLayer>(layer);
    const MarkLayer* target = FindMarkLayer(relation.base_layer);
    if (target == nullptr) {
      Dangling(name, "no mark layer '" + relation.base_layer + "'");
    }
    const auto ids = MarkIds(*target);
    for (const DependencyEdge& e : relation.edges) {
      if (ids.count(e.dependent) == 0) {
        Dangling(name, "unknown dependent " + e.dependent);
      }
      if (e.head != kRootId && ids.count(e.head) == 0) {
        Dangling(name, "unknown head " + e.head);
      }
    }
  }
  layers_.push_back(std::move(layer));
}

std::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDuplicateLayerName: return "DuplicateLayerName";
    case ViolationKind::kTokenLayerCount: return "TokenLayerCount";
    case ViolationKind::kSentenceLayerCount: return "SentenceLayerCount";
    case ViolationKind::kLayerCycle: return "LayerCycle";
    case ViolationKind::kUnreachableLayer: return "UnreachableLayer";
    case ViolationKind::kDuplicateId: return "DuplicateId";
    case ViolationKind::kBadRange: return "BadRange";
    case ViolationKind::kDanglingReference: return "DanglingReference";
    case ViolationKind::kMixedTargets: return "MixedTargets";
    case ViolationKind::kTokenOrder: return "TokenOrder";
    case ViolationKind::kSentencePartition: return "SentencePartition";
    case ViolationKind::kBadMorphTag: return "BadMorphTag";
    case ViolationKind::kMultipleHeads: return "MultipleHeads";
    case ViolationKind::kMissingHead: return "MissingHead";
    case ViolationKind::kDependencyCycle: return "DependencyCycle";
    case ViolationKind::kCrossSentenceEdge: return "CrossSentenceEdge";
    case ViolationKind::kSourceMap: return "SourceMap";
  }
  return "Unknown";
}

bool IsDependencyForest(const RelationLayer& layer,
                        std::vector<Violation>* violations) {
  bool ok = true;
  auto report = [&](ViolationKind kind, const std::string& id,
                    const std::string& message) {
    ok = false;
    if (violations != nullptr) {
      violations->push_back({kind, layer.name, id, message});
    }
  };

  // Dense numbering of every id that occurs in an edge.
  std::unordered_map<std::string_view, size_t> index;
  std::vector<std::string_view> names;
  auto intern = [&](std::string_view id) {
    auto [it, inserted] = index.try_emplace(id, names.size());
    if (inserted) names.push_back(id);
    return it->second;
  };
  std::vector<std::vector<size_t>> heads;
  for (const DependencyEdge& e : layer.edges) {
    const size_t d = intern(e.dependent);
    heads.resize(names.size());
    if (e.head == kRootId) continue;
    const size_t h = intern(e.head);
    heads.resize(names.size());
    heads[d].push_back(h);
  }
  std::vector<size_t> edge_count(names.size(), 0);
  for (const DependencyEdge& e : layer.edges) ++edge_count[index[e.dependent]];
  for (size_t i = 0; i < names.size(); ++i) {
    if (edge_count[i] > 1) {
      report(ViolationKind::kMultipleHeads, std::string(names[i]),
             std::to_string(edge_count[i]) + " heads");
    }
  }

  // Iterative three-colour DFS along dependent -> head edges.
  enum : uint8_t { kWhite, kGrey, kBlack };
  std::vector<uint8_t> colour(names.size(), kWhite);
  for (size_t root = 0; root < names.size(); ++root) {
    if (colour[root] != kWhite) continue;
    std::vector<std::pair<size_t, size_t>> stack{{root, 0}};
    colour[root] = kGrey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < heads[node].size()) {
        const size_t h = heads[node][next++];
        if (colour[h] == kGrey) {
          report(ViolationKind::kDependencyCycle, std::string(names[h]),
                 "cycle through " + std::string(names[h]));
        } else if (colour[h] == kWhite) {
          colour[h] = kGrey;
          stack.emplace_back(h, 0);
        }
      } else {
        colour[node] = kBlack;
        stack.pop_back();
      }
    }
  }
  return ok;
}

std::vector<Violation> Validate(const AnnotationGraph& graph) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind kind, const std::string& layer,
                 const std::string& id, const std::string& message) {
    out.push_back({kind, layer, id, message});
  };
  const BaseText& base = graph.base();

  if (!base.source_map.empty()) {
    const std::string problem = CheckSourceMap(base);
    if (!problem.empty()) add(ViolationKind::kSourceMap, "", "", problem);
  }

  // Layer graph.
  std::unordered_map<std::string, const Layer*> by_name;
  size_t token_layers = 0;
  size_t sentence_layers = 0;
  for (const Layer& layer : graph.layers()) {
    const std::string& name = LayerName(layer);
    if (!by_name.emplace(name, &layer).second || name == kTextLayer) {
      add(ViolationKind::kDuplicateLayerName, name, "", "duplicate layer");
    }
    if (name == kTokenLayer) ++token_layers;
    if (name == kSentenceLayer) ++sentence_layers;
  }
  if (token_layers != 1) {
    add(ViolationKind::kTokenLayerCount, std::string(kTokenLayer), "",
        std::to_string(token_layers) + " token layers");
  }
  if (sentence_layers > 1) {
    add(ViolationKind::kSentenceLayerCount, std::string(kSentenceLayer), "",
        std::to_string(sentence_layers) + " sentence layers");
  }
  for (const Layer& layer : graph.layers()) {
    const std::string& name = LayerName(layer);
    std::unordered_set<std::string> seen{name};
    std::string cursor = ReferencedLayer(layer);
    while (true) {
      if (cursor == kTextLayer) break;
      if (!seen.insert(cursor).second) {
        add(ViolationKind::kLayerCycle, name, "", "reference cycle via " + cursor);
        break;
      }
      const auto it = by_name.find(cursor);
      if (it == by_name.end()) {
        add(ViolationKind::kUnreachableLayer, name, "",
            "refers to missing layer '" + cursor + "'");
        break;
      }
      cursor = ReferencedLayer(*it->second);
    }
  }

  // Id sets and positions of every mark layer.
  std::unordered_map<std::string, std::unordered_map<std::string, size_t>>
      positions;
  for (const Layer& layer : graph.layers()) {
    const auto* marks = std::get_if<MarkLayer>(&layer);
    if (marks == nullptr) continue;
    auto& pos = positions[marks->name];
    for (size_t i = 0; i < marks->marks.size(); ++i) {
      if (!pos.emplace(marks->marks[i].id, i).second) {
        add(ViolationKind::kDuplicateId, marks->name, marks->marks[i].id,
            "duplicate id");
      }
    }
  }

  for (const Layer& layer : graph.layers()) {
    if (const auto* marks = std::get_if<MarkLayer>(&layer)) {
      const bool on_text = marks->target_layer == kTextLayer;
      const auto target_pos = positions.find(marks->target_layer);
      for (const Mark& m : marks->marks) {
        if (const auto* r = std::get_if<CharRange>(&m.target)) {
          if (!on_text) {
            add(ViolationKind::kMixedTargets, marks->name, m.id,
                "range target in a layer over marks");
          } else if (!RangeInText(*r, base.length())) {
            add(ViolationKind::kBadRange, marks->name, m.id,
                "range (" + std::to_string(r->start) + "," +
                    std::to_string(r->length) + ") outside text of length " +
                    std::to_string(base.length()));
          }
        } else {
          const auto& refs = std::get<std::vector<std::string>>(m.target);
          if (on_text) {
            add(ViolationKind::kMixedTargets, marks->name, m.id,
                "id target in a layer over the text");
            continue;
          }
          if (refs.empty()) {
            add(ViolationKind::kDanglingReference, marks->name, m.id,
                "empty id set");
          }
          for (const std::string& ref : refs) {
            if (target_pos == positions.end() ||
                target_pos->second.count(ref) == 0) {
              add(ViolationKind::kDanglingReference, marks->name, m.id,
                  "unknown target " + ref);
            }
          }
        }
      }
      if (marks->name == kTokenLayer) {
        size_t end = 0;
        for (const Mark& m : marks->marks) {
          const auto* r = std::get_if<CharRange>(&m.target);
          if (r == nullptr) continue;
          if (r->start <= end) {
            add(ViolationKind::kTokenOrder, marks->name, m.id,
                "token overlaps or precedes its predecessor");
          }
          end = std::max(end, r->start + r->length - 1);
        }
      }
      if (marks->name == kSentenceLayer && target_pos != positions.end()) {
        const MarkLayer* tokens = graph.FindMarkLayer(marks->target_layer);
        size_t expected = 0;
        for (const Mark& m : marks->marks) {
          const auto* refs = std::get_if<std::vector<std::string>>(&m.target);
          if (refs == nullptr) continue;
          for (const std::string& ref : *refs) {
            const auto p = target_pos->second.find(ref);
            if (p == target_pos->second.end()) continue;
            if (p->second != expected) {
              add(ViolationKind::kSentencePartition, marks->name, m.id,
                  "token " + ref + " out of sequence");
              expected = p->second;
            }
            ++expected;
          }
        }
        if (tokens != nullptr && expected != tokens->marks.size()) {
          add(ViolationKind::kSentencePartition, marks->name, "",
              "sentences cover " + std::to_string(expected) + " of " +
                  std::to_string(tokens->marks.size()) + " tokens");
        }
      }
    } else if (const auto* feature = std::get_if<FeatureLayer>(&layer)) {
      const auto target_pos = positions.find(feature->base_layer);
      std::unordered_set<std::string> keys;
      for (const auto& [id, value] : feature->values) {
        if (!keys.insert(id).second) {
          add(ViolationKind::kDuplicateId, feature->name, id,
              "duplicate feature key");
        }
        if (target_pos == positions.end() ||
            target_pos->second.count(id) == 0) {
          add(ViolationKind::kDanglingReference, feature->name, id,
              "feature on unknown id");
        }
        if (feature->name == "morph") {
          size_t length = 0;
          for (unsigned char c : value) length += (c & 0xC0) != 0x80;
          if (length != 9) {
            add(ViolationKind::kBadMorphTag, feature->name, id,
                "morph tag '" + value + "' is not 9 characters");
          }
        }
      }
    } else {
      const auto& relation = std::get<RelationLayer>(layer);
      const auto target_pos = positions.find(relation.base_layer);
      std::unordered_map<std::string, size_t> edge_count;
      for (const DependencyEdge& e : relation.edges) {
        ++edge_count[e.dependent];
        if (target_pos == positions.end() ||
            target_pos->second.count(e.dependent) == 0) {
          add(ViolationKind::kDanglingReference, relation.name, e.dependent,
              "unknown dependent");
        }
        if (e.head != kRootId && (target_pos == positions.end() ||
                                  target_pos->second.count(e.head) == 0)) {
          add(ViolationKind::kDanglingReference, relation.name, e.dependent,
              "unknown head " + e.head);
        }
      }
      IsDependencyForest(relation, &out);
      if (const MarkLayer* base_marks = graph.FindMarkLayer(relation.base_layer)) {
        for (const Mark& m : base_marks->marks) {
          if (edge_count.count(m.id) == 0) {
            add(ViolationKind::kMissingHead, relation.name, m.id, "no head");
          }
        }
      }
      // Edges stay within one sentence when sentences group the base layer.
      const MarkLayer* sentences = graph.FindMarkLayer(kSentenceLayer);
      if (sentences != nullptr &&
          sentences->target_layer == relation.base_layer) {
        std::unordered_map<std::string, size_t> sentence_of;
        for (size_t s = 0; s < sentences->marks.size(); ++s) {
          if (const auto* refs = std::get_if<std::vector<std::string>>(
                  &sentences->marks[s].target)) {
            for (const std::string& ref : *refs) sentence_of[ref] = s;
          }
        }
        for (const DependencyEdge& e : relation.edges) {
          if (e.head == kRootId) continue;
          const auto d = sentence_of.find(e.dependent);
          const auto h = sentence_of.find(e.head);
          if (d != sentence_of.end() && h != sentence_of.end() &&
              d->second != h->second) {
            add(ViolationKind::kCrossSentenceEdge, relation.name, e.dependent,
                "head " + e.head + " lies in another sentence");
          }
        }
      }
    }
  }
  return out;
}

std::optional<size_t> LayerDepth(const AnnotationGraph& graph,
                                 std::string_view layer) {
  size_t depth = 0;
  std::string_view cursor = layer;
  while (cursor != kTextLayer) {
    const Layer* l = graph.FindLayer(cursor);
    if (l == nullptr || depth > graph.layers().size()) return std::nullopt;
    cursor = ReferencedLayer(*l);
    ++depth;
  }
  return depth;
}

std::optional<CharRange> ResolveToText(const AnnotationGraph& graph,
                                       std::string_view layer,
                                       std::string_view id) {
  const Layer* l = graph.FindLayer(layer);
  if (l == nullptr) return std::nullopt;
  if (!std::holds_alternative<MarkLayer>(*l)) {
    return ResolveToText(graph, ReferencedLayer(*l), id);
  }
  const auto& marks = std::get<MarkLayer>(*l);
  const auto it = std::find_if(marks.marks.begin(), marks.marks.end(),
                               [&](const Mark& m) { return m.id == id; });
  if (it == marks.marks.end()) return std::nullopt;
  if (const auto* r = std::get_if<CharRange>(&it->target)) return *r;
  std::optional<CharRange> cover;
  for (const std::string& ref :
       std::get<std::vector<std::string>>(it->target)) {
    const auto sub = ResolveToText(graph, marks.target_layer, ref);
    if (!sub) return std::nullopt;
    if (!cover) {
      cover = sub;
    } else {
      const size_t start = std::min(cover->start, sub->start);
      const size_t end = std::max(cover->start + cover->length,
                                  sub->start + sub->length);
      cover = CharRange{start, end - start};
    }
  }
  return cover;
}

}  // namespace standoff
