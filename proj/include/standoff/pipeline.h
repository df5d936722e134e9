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

#ifndef STANDOFF_PIPELINE_H_
#define STANDOFF_PIPELINE_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "standoff/annotation_graph.h"
#include "standoff/morphosyntax_alignment.h"
#include "standoff/tei_ingestion.h"
#include "standoff/tokenization.h"
#include "standoff/unicode_normalization.h"
#include "standoff/xml.h"

namespace standoff {

// Metadata keys stored in every emitted annotation set.
inline constexpr std::string_view kMetaSource = "source";
inline constexpr std::string_view kMetaCtsTemplate = "cts_template";
inline constexpr std::string_view kMetaCtsDivisions = "cts_divisions";
inline constexpr std::string_view kMetaSentences = "sentences";

// Feature layers the pipeline adds over the token layer.
inline constexpr std::string_view kFormLayer = "form";
inline constexpr std::string_view kCtsLayer = "cts";

struct PipelineConfig {
  std::string input_directory;
  std::string output_directory;
  std::string policy_path;      // empty: built-in default policy
  std::string elision_path;
  std::string crasis_path;
  std::string alphabet_path;    // empty: built-in default alphabet
  std::string annotation_directory;  // optional <docid>.tsv files
  bool emit_paula = true;
  bool emit_laula = true;
  bool strict = false;
  size_t workers = 1;

  // Config with the data files shipped in the source tree.
  static PipelineConfig Defaults();
  // Throws Error(kBadConfig) unless every path is usable and workers >= 1.
  void Check() const;
};

// Lexicons and policies, loaded once and shared read-only by all workers.
struct PipelineResources {
  ElementPolicy policy;
  ElisionLexicon elision;
  CrasisLexicon crasis;
  MorphAlphabet alphabet;

  static PipelineResources Load(const PipelineConfig& config);
};

struct DocumentReport {
  NormalizationReport normalization;
  ExtractionDiagnostics extraction;
  size_t crasis_splits = 0;
  size_t positional_fallbacks = 0;
  size_t outside_division = 0;
  size_t form_mismatches = 0;
  bool aligned = false;
};

// The full per-document chain: extract, normalize, tokenize, segment, cite
// and, when `external` is given, align. The graph is validated; a graph
// with violations raises Error(kUnvalidatedGraph).
AnnotationGraph BuildGraph(const xml::Document& tei,
                           const std::string& document_id,
                           const std::string& source_name,
                           const PipelineResources& resources,
                           const std::string* external, bool strict,
                           DocumentReport* report = nullptr);

struct CorpusStats {
  size_t processed = 0;
  size_t rejected = 0;
  size_t tokens = 0;
  size_t sentences = 0;
  // Error class name -> documents rejected for it.
  std::map<std::string, size_t> errors;

  std::string ToText() const;
  static CorpusStats Parse(std::string_view text);
  bool operator==(const CorpusStats&) const = default;
};

// TEI inputs of a directory (*.xml), sorted by file name.
std::vector<std::string> ListInputs(const std::string& directory);

// Runs the corpus pipeline. Writes <out>/paula/<doc>/, <out>/laula/<doc>/,
// <out>/stats.txt and <out>/rejected.txt. Only configuration problems are
// thrown; document failures are counted and listed in rejected.txt.
CorpusStats Run(const PipelineConfig& config);

// Recomputes the statistics from the emitted file sets.
CorpusStats Stats(const std::string& output_directory);

// Re-reads and re-validates every emitted file set. LAULA sets are checked
// only when the TEI input directory is given. Returns one line per problem.
std::vector<std::string> ValidateOutput(const std::string& output_directory,
                                        const std::string& input_directory);

struct CrasisCandidate {
  std::string document_id;
  std::string word;
};

// Words that look like crasis and are not yet in the crasis lexicon.
std::vector<CrasisCandidate> ListCrasisCandidates(
    const PipelineConfig& config);

}  // namespace standoff

#endif  // STANDOFF_PIPELINE_H_
