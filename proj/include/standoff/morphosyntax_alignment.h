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

#ifndef STANDOFF_MORPHOSYNTAX_ALIGNMENT_H_
#define STANDOFF_MORPHOSYNTAX_ALIGNMENT_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "standoff/annotation_graph.h"

namespace standoff {

inline constexpr size_t kMorphTagLength = 9;
inline constexpr char kEmptyFeature = '-';

// Allowed characters for each of the nine positions of a morphological tag:
// part of speech, person, number, tense, mood, voice, gender, case, degree.
// '-' is accepted everywhere.
//
// File format: one line per position, "<position> <name> <characters>",
// '#' comments. Positions are 1..9 and each must appear exactly once.
class MorphAlphabet {
 public:
  static MorphAlphabet Default();
  // Throws Error(kBadConfig) on a malformed file.
  static MorphAlphabet Parse(std::string_view content);
  static MorphAlphabet Load(const std::string& path);

  // Empty when `tag` is a valid tag; otherwise one message per problem.
  std::vector<std::string> Check(std::string_view tag) const;

  const std::string& position_name(size_t position) const {
    return names_.at(position);
  }

 private:
  std::array<std::string, kMorphTagLength> names_;
  std::array<std::string, kMorphTagLength> allowed_;
};

struct ExternalRow {
  size_t ordinal = 0;
  std::string form;
  std::string lemma;
  std::string morph;
  size_t head = 0;  // 0 attaches to ROOT
  std::string relation;

  bool operator==(const ExternalRow&) const = default;
};

struct ExternalSentence {
  size_t ordinal = 0;
  std::vector<ExternalRow> rows;

  bool operator==(const ExternalSentence&) const = default;
};

// Reads externally produced annotations.
//
// Format: UTF-8, one token per line with six tab-separated columns
//   ID  FORM  LEMMA  MORPH  HEAD  REL
// ID counts 1..n within a sentence, MORPH is a 9-character tag, HEAD is an
// ID of the same sentence or 0. Sentences are separated by blank lines;
// lines starting with '#' are comments.
//
// Throws Error(kMalformedRow) for a wrong column count, a non-numeric or
// non-contiguous ID, an empty relation or a lemma containing whitespace;
// Error(kBadMorphTag) for a tag that is not 9 characters or, when an
// alphabet is given, uses characters outside it; Error(kBadHead) for a head
// outside 0..n.
std::vector<ExternalSentence> ParseExternal(
    std::string_view content, const MorphAlphabet* alphabet = nullptr);

struct AlignmentOptions {
  // Escalate form mismatches from warnings to Error(kFormMismatch).
  bool strict = false;
};

struct AlignmentReport {
  // Token ids whose external form differs from the token form.
  std::vector<std::string> form_mismatches;
};

// Adds the lemma, morph and deprel feature layers and the dep relation
// layer to `graph`, pairing the i-th row of the k-th external sentence with
// the i-th token of the k-th sentence. On error the graph is unchanged.
//
// Throws Error(kSentenceCountMismatch), Error(kTokenCountMismatch),
// Error(kFormMismatch) in strict mode, and Error(kCyclicDependency) when
// the external heads do not form a tree.
AlignmentReport Align(AnnotationGraph& graph,
                      const std::vector<ExternalSentence>& external,
                      const AlignmentOptions& options = {});

}  // namespace standoff

#endif  // STANDOFF_MORPHOSYNTAX_ALIGNMENT_H_
