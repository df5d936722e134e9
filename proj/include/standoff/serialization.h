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

#ifndef STANDOFF_SERIALIZATION_H_
#define STANDOFF_SERIALIZATION_H_

#include <string>
#include <string_view>
#include <vector>

#include "standoff/annotation_graph.h"
#include "standoff/xml.h"

namespace standoff {

// File sets are written into one directory per document. Every file is
// named <document id>.<name>.xml: "text" (PAULA base text), "map" (LAULA
// source map), "anno" (the file listing a document's layers) and one file
// per layer. See docs/formats.md for the exact grammar.

// The PAULA pointer to a base-text range, e.g.
// "#xpointer(string-range(//body,'',1,5))".
std::string PaulaRangePointer(const CharRange& range);
// Throws Error(kMalformedPointer) unless `pointer` matches the grammar.
CharRange ParsePaulaRangePointer(std::string_view pointer);

// Element and attribute names shared by PAULA and LAULA, as
// (PAULA name, LAULA name) pairs. The mapping is a bijection.
struct NamePair {
  std::string_view paula;
  std::string_view laula;
};
const std::vector<NamePair>& LaulaElementNames();
const std::vector<NamePair>& LaulaAttributeNames();

// Writes a PAULA file set. The sentence layer, and any layer built on it,
// is left out. Returns the paths written, "anno" file last.
// Throws Error(kUnvalidatedGraph) when Validate reports violations and
// Error(kIoFailure) when a file cannot be written.
std::vector<std::string> WritePaula(const AnnotationGraph& graph,
                                    const std::string& directory);

// Writes a LAULA file set whose token marks point into `tei` through node
// paths and in-node offsets. Returns the paths written.
// Throws Error(kUnvalidatedGraph), Error(kSourceMapMissing) when the base
// text has no source map, and Error(kIoFailure).
std::vector<std::string> WriteLaula(const AnnotationGraph& graph,
                                    const xml::Document& tei,
                                    const std::string& directory);

// Read a file set back. The PAULA graph has no source map; the LAULA graph
// recovers it. Both throw Error(kMissingFile) for an incomplete set,
// Error(kMalformedPointer) for a pointer that does not parse or leaves the
// text, and Error(kDanglingReference) for references to unknown ids.
AnnotationGraph ReadPaula(const std::string& directory);
AnnotationGraph ReadLaula(const std::string& directory,
                          const xml::Document& tei);

// The graph with the named layer and every layer depending on it removed.
AnnotationGraph WithoutLayer(const AnnotationGraph& graph,
                             std::string_view layer);

}  // namespace standoff

#endif  // STANDOFF_SERIALIZATION_H_
