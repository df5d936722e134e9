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

#ifndef STANDOFF_ANNOTATION_GRAPH_H_
#define STANDOFF_ANNOTATION_GRAPH_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "standoff/base_text.h"

namespace standoff {

// Name of the base text in the layer reference graph.
inline constexpr std::string_view kTextLayer = "text";
inline constexpr std::string_view kTokenLayer = "tok";
inline constexpr std::string_view kSentenceLayer = "sent";
// Head of every sentence root in a dependency layer.
inline constexpr std::string_view kRootId = "0";

// 1-based offset and length into the base text.
struct CharRange {
  size_t start = 0;
  size_t length = 0;
  bool operator==(const CharRange&) const = default;
};

struct Mark {
  std::string id;
  // A character range when the layer targets the base text, otherwise the
  // ids of the marks it groups in the target layer.
  std::variant<CharRange, std::vector<std::string>> target;
  bool operator==(const Mark&) const = default;
};

struct MarkLayer {
  std::string name;
  std::string target_layer = std::string(kTextLayer);
  std::vector<Mark> marks;
  bool operator==(const MarkLayer&) const = default;
};

// Values keyed by mark id, in the order of the annotated layer.
struct FeatureLayer {
  std::string name;
  std::string base_layer;
  std::vector<std::pair<std::string, std::string>> values;
  bool operator==(const FeatureLayer&) const = default;
};

struct DependencyEdge {
  std::string dependent;
  std::string head;  // a mark id of the base layer, or kRootId
  bool operator==(const DependencyEdge&) const = default;
};

struct RelationLayer {
  std::string name;
  std::string base_layer;
  std::vector<DependencyEdge> edges;
  bool operator==(const RelationLayer&) const = default;
};

using Layer = std::variant<MarkLayer, FeatureLayer, RelationLayer>;

const std::string& LayerName(const Layer& layer);
// The layer a layer refers to: its target or base layer.
const std::string& ReferencedLayer(const Layer& layer);

// Base text plus standoff layers. Layers are added through AddLayer, which
// keeps every reference resolvable and the layer graph acyclic.
class AnnotationGraph {
 public:
  AnnotationGraph() = default;
  explicit AnnotationGraph(BaseText base) : base_(std::move(base)) {}

  const BaseText& base() const { return base_; }
  const std::vector<Layer>& layers() const { return layers_; }

  const Layer* FindLayer(std::string_view name) const;
  const MarkLayer* FindMarkLayer(std::string_view name) const;
  const FeatureLayer* FindFeatureLayer(std::string_view name) const;
  const RelationLayer* FindRelationLayer(std::string_view name) const;

  // Throws Error(kDuplicateLayerName), Error(kDanglingReference) for a
  // missing target layer, id or out-of-text range, Error(kCycleIntroduced)
  // when the layer would close a reference cycle, and Error(kInvalidLayer)
  // when a mark layer mixes target kinds.
  void AddLayer(Layer layer);

  // Document-level key/value metadata (source file, citation scheme).
  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const {
    return metadata_;
  }

  // Structural equality: document id, text, layers, metadata. The source
  // map is provenance, not structure, and is not compared.
  bool operator==(const AnnotationGraph& other) const;

 private:
  BaseText base_;
  std::vector<Layer> layers_;
  std::map<std::string, std::string> metadata_;
};

enum class ViolationKind {
  kDuplicateLayerName,
  kTokenLayerCount,
  kSentenceLayerCount,
  kLayerCycle,
  kUnreachableLayer,
  kDuplicateId,
  kBadRange,
  kDanglingReference,
  kMixedTargets,
  kTokenOrder,
  kSentencePartition,
  kBadMorphTag,
  kMultipleHeads,
  kMissingHead,
  kDependencyCycle,
  kCrossSentenceEdge,
  kSourceMap,
};

std::string_view ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string layer;
  std::string id;
  std::string message;
};

// Every structural problem of the graph; empty when the graph is valid.
std::vector<Violation> Validate(const AnnotationGraph& graph);

// Whether the head assignment of a dependency layer is a forest under ROOT:
// one head per dependent and no cycle. Edges may be arbitrary; multiple
// heads or cycles are reported through `violations` when non-null.
bool IsDependencyForest(const RelationLayer& layer,
                        std::vector<Violation>* violations = nullptr);

// Number of reference steps from a layer down to the base text (1 for a
// token layer, 2 for sentences over tokens); nullopt if it never gets there.
std::optional<size_t> LayerDepth(const AnnotationGraph& graph,
                                 std::string_view layer);

// The text range a mark id covers, following id-set references down to
// character ranges. nullopt when the id does not resolve.
std::optional<CharRange> ResolveToText(const AnnotationGraph& graph,
                                       std::string_view layer,
                                       std::string_view id);

}  // namespace standoff

#endif  // STANDOFF_ANNOTATION_GRAPH_H_
