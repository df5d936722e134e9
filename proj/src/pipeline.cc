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

#include "standoff/pipeline.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "standoff/cts_resolution.h"
#include "standoff/error.h"
#include "standoff/sentence_segmentation.h"
#include "standoff/serialization.h"
#include "standoff/utf.h"

namespace standoff {
namespace fs = std::filesystem;
namespace {

constexpr std::string_view kPaulaDirectory = "paula";
constexpr std::string_view kLaulaDirectory = "laula";
constexpr std::string_view kStagingDirectory = ".staging";
constexpr std::string_view kStatsFile = "stats.txt";
constexpr std::string_view kRejectedFile = "rejected.txt";
constexpr std::string_view kInternalError = "Internal";

std::string ReadWholeFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteWholeFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

void RequireReadableFile(const std::string& path, std::string_view what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kBadConfig,
                std::string(what) + " '" + path + "' is not a readable file");
  }
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kBadConfig,
                std::string(what) + " '" + path + "' cannot be opened");
  }
}

void RequireDirectory(const std::string& path, std::string_view what) {
  std::error_code ec;
  if (!fs::is_directory(path, ec)) {
    throw Error(ErrorCode::kBadConfig,
                std::string(what) + " '" + path + "' is not a directory");
  }
}

// Outcome of one document, filled by a worker and merged in input order.
struct DocumentResult {
  std::string document_id;
  bool ok = false;
  std::string error_class;
  std::string message;
  size_t tokens = 0;
  size_t sentences = 0;
};

DocumentResult ProcessOne(const std::string& input,
                          const PipelineConfig& config,
                          const PipelineResources& resources,
                          const fs::path& output, const fs::path& staging) {
  DocumentResult result;
  result.document_id = DocumentIdFromPath(input);
  const auto started = std::chrono::steady_clock::now();
  const fs::path stage = staging / result.document_id;
  std::error_code ec;
  try {
    const xml::Document tei = xml::Document::ParseFile(input);
    std::optional<std::string> external;
    if (!config.annotation_directory.empty()) {
      const fs::path tsv =
          fs::path(config.annotation_directory) / (result.document_id + ".tsv");
      if (fs::exists(tsv)) external = ReadWholeFile(tsv);
    }
    DocumentReport report;
    const AnnotationGraph graph = BuildGraph(
        tei, result.document_id, fs::path(input).filename().string(),
        resources, external ? &*external : nullptr, config.strict, &report);

    fs::remove_all(stage, ec);
    if (config.emit_paula) {
      WritePaula(graph, (stage / kPaulaDirectory).string());
    }
    if (config.emit_laula) {
      WriteLaula(graph, tei, (stage / kLaulaDirectory).string());
    }
    // Publish: every file set was written, so move them into place.
    for (std::string_view format : {kPaulaDirectory, kLaulaDirectory}) {
      const fs::path from = stage / format;
      if (!fs::exists(from)) continue;
      const fs::path to = output / format / result.document_id;
      fs::remove_all(to, ec);
      fs::rename(from, to);
    }
    fs::remove_all(stage, ec);

    result.ok = true;
    result.tokens = graph.FindMarkLayer(kTokenLayer)->marks.size();
    result.sentences = graph.FindMarkLayer(kSentenceLayer)->marks.size();
    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    spdlog::info(
        "doc={} status=ok chars={} tokens={} sentences={} nfc_changes={} "
        "apostrophes={} crasis_splits={} positional_fallbacks={} "
        "form_mismatches={} aligned={} ms={:.1f}",
        result.document_id, graph.base().length(), result.tokens,
        result.sentences, report.normalization.nfc_changes,
        report.normalization.TotalSubstitutions(), report.crasis_splits,
        report.positional_fallbacks, report.form_mismatches, report.aligned,
        elapsed);
    if (!report.extraction.unknown_elements.empty()) {
      std::string names;
      for (const std::string& name : report.extraction.unknown_elements) {
        names += (names.empty() ? "" : ",") + name;
      }
      spdlog::warn("doc={} unknown_elements={} (content kept)",
                   result.document_id, names);
    }
  } catch (const Error& e) {
    result.error_class = std::string(ErrorCodeName(e.code()));
    result.message = e.what();
  } catch (const std::exception& e) {
    result.error_class = std::string(kInternalError);
    result.message = e.what();
  }
  if (!result.ok) {
    fs::remove_all(stage, ec);
    for (std::string_view format : {kPaulaDirectory, kLaulaDirectory}) {
      fs::remove_all(output / format / result.document_id, ec);
    }
    spdlog::warn("doc={} status=rejected class={} reason=\"{}\"",
                 result.document_id, result.error_class, result.message);
  }
  return result;
}

size_t CountElements(const fs::path& file, std::string_view list,
                     std::string_view item) {
  const xml::Document doc = xml::Document::ParseFile(file.string());
  size_t count = 0;
  for (const auto& child : doc.root()->children()) {
    if (!child->is_element() || child->name() != list) continue;
    for (const auto& grandchild : child->children()) {
      if (grandchild->is_element() && grandchild->name() == item) ++count;
    }
  }
  return count;
}

std::vector<std::string> SortedSubdirectories(const fs::path& directory) {
  std::vector<std::string> names;
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) return names;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_directory()) names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

PipelineConfig PipelineConfig::Defaults() {
  PipelineConfig config;
  const std::string data = STANDOFF_DATA_DIR;
  config.policy_path = data + "/element_policy.conf";
  config.elision_path = data + "/elision.txt";
  config.crasis_path = data + "/crasis.tsv";
  config.alphabet_path = data + "/morph_alphabet.txt";
  return config;
}

void PipelineConfig::Check() const {
  if (workers < 1) throw Error(ErrorCode::kBadConfig, "workers must be >= 1");
  if (!emit_paula && !emit_laula) {
    throw Error(ErrorCode::kBadConfig, "no output format selected");
  }
  RequireDirectory(input_directory, "input directory");
  if (output_directory.empty()) {
    throw Error(ErrorCode::kBadConfig, "no output directory");
  }
  if (!policy_path.empty()) RequireReadableFile(policy_path, "element policy");
  RequireReadableFile(elision_path, "elision lexicon");
  RequireReadableFile(crasis_path, "crasis lexicon");
  if (!alphabet_path.empty()) RequireReadableFile(alphabet_path, "morph alphabet");
  if (!annotation_directory.empty()) {
    RequireDirectory(annotation_directory, "annotation directory");
  }
}

PipelineResources PipelineResources::Load(const PipelineConfig& config) {
  PipelineResources resources;
  resources.policy = config.policy_path.empty()
                         ? ElementPolicy::Default()
                         : ElementPolicy::Load(config.policy_path);
  resources.elision = ElisionLexicon::Load(config.elision_path);
  resources.crasis = CrasisLexicon::Load(config.crasis_path);
  resources.alphabet = config.alphabet_path.empty()
                           ? MorphAlphabet::Default()
                           : MorphAlphabet::Load(config.alphabet_path);
  return resources;
}

AnnotationGraph BuildGraph(const xml::Document& tei,
                           const std::string& document_id,
                           const std::string& source_name,
                           const PipelineResources& resources,
                           const std::string* external, bool strict,
                           DocumentReport* report) {
  DocumentReport local;
  DocumentReport& r = report != nullptr ? *report : local;

  // Rejection of non-CTS documents happens before any text work.
  const CtsScheme scheme = ParseCtsScheme(tei, document_id);
  const BaseText extracted =
      ClassifyAndExtract(tei, resources.policy, document_id, &r.extraction);
  BaseText base = NormalizeBaseText(extracted, resources.elision, &r.normalization);
  const std::vector<TokenSpan> tokens = Tokenize(base, resources.crasis);
  const std::vector<SentenceSpan> sentences = Segment(tokens);
  CitationDiagnostics citation_diagnostics;
  const std::vector<CtsCitation> citations =
      AssignCitations(tei, base, tokens, scheme, &citation_diagnostics);
  r.positional_fallbacks = citation_diagnostics.positional_fallbacks;
  r.outside_division = citation_diagnostics.outside_division;

  AnnotationGraph graph(std::move(base));
  graph.metadata()[std::string(kMetaSource)] = source_name;
  graph.metadata()[std::string(kMetaCtsTemplate)] = scheme.xpath_template;
  std::string divisions;
  for (const std::string& name : scheme.division_names) {
    if (!divisions.empty()) divisions += '.';
    divisions += name;
  }
  graph.metadata()[std::string(kMetaCtsDivisions)] = divisions;
  graph.metadata()[std::string(kMetaSentences)] = std::to_string(sentences.size());

  MarkLayer token_layer{std::string(kTokenLayer), std::string(kTextLayer), {}};
  FeatureLayer form_layer{std::string(kFormLayer), std::string(kTokenLayer), {}};
  FeatureLayer cts_layer{std::string(kCtsLayer), std::string(kTokenLayer), {}};
  token_layer.marks.reserve(tokens.size());
  form_layer.values.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    const TokenSpan& t = tokens[i];
    token_layer.marks.push_back({t.id, CharRange{t.start, t.length}});
    form_layer.values.emplace_back(t.id, Utf32ToUtf8(t.form));
    // Two word tokens with no gap between them are the halves of a crasis.
    if (i + 1 < tokens.size() && tokens[i + 1].start == t.start + t.length &&
        IsWordCharacter(t.surface.front()) &&
        IsWordCharacter(tokens[i + 1].surface.front())) {
      ++r.crasis_splits;
    }
    if (!citations[i].empty()) {
      cts_layer.values.emplace_back(t.id, citations[i].ToString());
    }
  }
  MarkLayer sentence_layer{std::string(kSentenceLayer), std::string(kTokenLayer), {}};
  sentence_layer.marks.reserve(sentences.size());
  for (const SentenceSpan& s : sentences) {
    std::vector<std::string> ids;
    ids.reserve(s.last - s.first + 1);
    for (size_t i = s.first; i <= s.last; ++i) ids.push_back(tokens[i].id);
    sentence_layer.marks.push_back({s.id, std::move(ids)});
  }
  graph.AddLayer(std::move(token_layer));
  graph.AddLayer(std::move(form_layer));
  graph.AddLayer(std::move(cts_layer));
  graph.AddLayer(std::move(sentence_layer));

  if (external != nullptr) {
    const auto rows = ParseExternal(*external, &resources.alphabet);
    AlignmentOptions options;
    options.strict = strict;
    const AlignmentReport alignment = Align(graph, rows, options);
    r.form_mismatches = alignment.form_mismatches.size();
    r.aligned = true;
  }

  const auto violations = Validate(graph);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    throw Error(ErrorCode::kUnvalidatedGraph,
                std::string(ViolationKindName(v.kind)) + " in layer '" +
                    v.layer + "' " + v.id + ": " + v.message);
  }
  return graph;
}

std::string CorpusStats::ToText() const {
  std::string out;
  out += "documents_processed=" + std::to_string(processed) + "\n";
  out += "documents_rejected=" + std::to_string(rejected) + "\n";
  out += "tokens=" + std::to_string(tokens) + "\n";
  out += "sentences=" + std::to_string(sentences) + "\n";
  for (const auto& [name, count] : errors) {
    out += "errors." + name + "=" + std::to_string(count) + "\n";
  }
  return out;
}

CorpusStats CorpusStats::Parse(std::string_view text) {
  CorpusStats stats;
  size_t line_number = 0;
  while (!text.empty()) {
    const size_t end = std::min(text.find('\n'), text.size());
    const std::string_view line = text.substr(0, end);
    text.remove_prefix(std::min(end + 1, text.size()));
    ++line_number;
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    size_t value = 0;
    const std::string_view number =
        eq == std::string_view::npos ? std::string_view() : line.substr(eq + 1);
    const auto [ptr, ec] =
        std::from_chars(number.data(), number.data() + number.size(), value);
    if (eq == std::string_view::npos || number.empty() || ec != std::errc() ||
        ptr != number.data() + number.size()) {
      throw Error(ErrorCode::kBadConfig,
                  "stats line " + std::to_string(line_number) + " is not key=count");
    }
    const std::string_view key = line.substr(0, eq);
    if (key == "documents_processed") stats.processed = value;
    else if (key == "documents_rejected") stats.rejected = value;
    else if (key == "tokens") stats.tokens = value;
    else if (key == "sentences") stats.sentences = value;
    else if (key.rfind("errors.", 0) == 0) stats.errors[std::string(key.substr(7))] = value;
  }
  return stats;
}

std::vector<std::string> ListInputs(const std::string& directory) {
  std::vector<std::string> inputs;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      inputs.push_back(entry.path().string());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  return inputs;
}

CorpusStats Run(const PipelineConfig& config) {
  config.Check();
  const PipelineResources resources = PipelineResources::Load(config);
  const std::vector<std::string> inputs = ListInputs(config.input_directory);

  const fs::path output(config.output_directory);
  const fs::path staging = output / kStagingDirectory;
  std::error_code ec;
  // Earlier runs must not leak into this one's file sets.
  for (std::string_view format : {kPaulaDirectory, kLaulaDirectory}) {
    fs::remove_all(output / format, ec);
  }
  fs::remove_all(staging, ec);
  fs::create_directories(staging, ec);
  if (config.emit_paula) fs::create_directories(output / kPaulaDirectory, ec);
  if (config.emit_laula) fs::create_directories(output / kLaulaDirectory, ec);
  if (ec) {
    throw Error(ErrorCode::kBadConfig,
                "cannot create output directory " + output.string());
  }

  std::vector<DocumentResult> results(inputs.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < inputs.size(); i = next++) {
      results[i] = ProcessOne(inputs[i], config, resources, output, staging);
    }
  };
  const size_t worker_count = std::min(config.workers, std::max<size_t>(1, inputs.size()));
  if (worker_count <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(worker_count);
    for (size_t w = 0; w < worker_count; ++w) pool.emplace_back(work);
  }
  fs::remove_all(staging, ec);

  CorpusStats stats;
  std::string rejected;
  for (const DocumentResult& r : results) {
    if (r.ok) {
      ++stats.processed;
      stats.tokens += r.tokens;
      stats.sentences += r.sentences;
    } else {
      ++stats.rejected;
      ++stats.errors[r.error_class];
      rejected += r.document_id + "\t" + r.error_class + "\n";
    }
  }
  WriteWholeFile(output / kStatsFile, stats.ToText());
  WriteWholeFile(output / kRejectedFile, rejected);
  spdlog::info("corpus processed={} rejected={} tokens={} sentences={}",
               stats.processed, stats.rejected, stats.tokens, stats.sentences);
  return stats;
}

CorpusStats Stats(const std::string& output_directory) {
  const fs::path output(output_directory);
  std::error_code ec;
  if (!fs::is_directory(output, ec)) {
    throw Error(ErrorCode::kMissingFile, "no directory " + output_directory);
  }
  CorpusStats stats;
  const auto laula = SortedSubdirectories(output / kLaulaDirectory);
  const auto paula = SortedSubdirectories(output / kPaulaDirectory);
  if (!laula.empty()) {
    for (const std::string& doc : laula) {
      const fs::path dir = output / kLaulaDirectory / doc;
      ++stats.processed;
      stats.tokens += CountElements(dir / (doc + ".tok.xml"), "M", "m");
      stats.sentences += CountElements(dir / (doc + ".sent.xml"), "M", "m");
    }
  } else {
    // PAULA sets carry no sentence layer; the count is kept as metadata.
    for (const std::string& doc : paula) {
      const fs::path dir = output / kPaulaDirectory / doc;
      ++stats.processed;
      stats.tokens += CountElements(dir / (doc + ".tok.xml"), "markList", "mark");
      const AnnotationGraph graph = ReadPaula(dir.string());
      const auto it = graph.metadata().find(std::string(kMetaSentences));
      if (it != graph.metadata().end()) stats.sentences += std::stoul(it->second);
    }
  }
  const fs::path rejected = output / kRejectedFile;
  if (fs::exists(rejected)) {
    std::istringstream in(ReadWholeFile(rejected));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const size_t tab = line.find('\t');
      ++stats.rejected;
      ++stats.errors[tab == std::string::npos ? std::string(kInternalError)
                                              : line.substr(tab + 1)];
    }
  }
  return stats;
}

std::vector<std::string> ValidateOutput(const std::string& output_directory,
                                        const std::string& input_directory) {
  const fs::path output(output_directory);
  std::vector<std::string> problems;
  auto check = [&](const std::string& label, const AnnotationGraph& graph) {
    for (const Violation& v : Validate(graph)) {
      problems.push_back(label + ": " + std::string(ViolationKindName(v.kind)) +
                         " in layer '" + v.layer + "' " + v.id + ": " + v.message);
    }
  };
  for (const std::string& doc : SortedSubdirectories(output / kPaulaDirectory)) {
    const std::string label = std::string(kPaulaDirectory) + "/" + doc;
    try {
      check(label, ReadPaula((output / kPaulaDirectory / doc).string()));
    } catch (const Error& e) {
      problems.push_back(label + ": " + e.what());
    }
  }
  if (input_directory.empty()) return problems;
  for (const std::string& doc : SortedSubdirectories(output / kLaulaDirectory)) {
    const std::string label = std::string(kLaulaDirectory) + "/" + doc;
    try {
      const xml::Document tei = xml::Document::ParseFile(
          (fs::path(input_directory) / (doc + ".xml")).string());
      check(label, ReadLaula((output / kLaulaDirectory / doc).string(), tei));
    } catch (const Error& e) {
      problems.push_back(label + ": " + e.what());
    }
  }
  return problems;
}

std::vector<CrasisCandidate> ListCrasisCandidates(const PipelineConfig& config) {
  RequireDirectory(config.input_directory, "input directory");
  const ElementPolicy policy = config.policy_path.empty()
                                   ? ElementPolicy::Default()
                                   : ElementPolicy::Load(config.policy_path);
  const ElisionLexicon elision = ElisionLexicon::Load(config.elision_path);
  const CrasisLexicon crasis = CrasisLexicon::Load(config.crasis_path);
  std::vector<CrasisCandidate> out;
  for (const std::string& input : ListInputs(config.input_directory)) {
    const std::string doc = DocumentIdFromPath(input);
    try {
      const xml::Document tei = xml::Document::ParseFile(input);
      const BaseText base = NormalizeBaseText(
          ClassifyAndExtract(tei, policy, doc), elision);
      for (const std::u32string& word : DetectCrasisCandidates(base)) {
        if (crasis.Find(word) == nullptr) {
          out.push_back({doc, Utf32ToUtf8(word)});
        }
      }
    } catch (const Error& e) {
      spdlog::warn("doc={} skipped: {}", doc, e.what());
    }
  }
  return out;
}

}  // namespace standoff
