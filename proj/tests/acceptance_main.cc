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

// End-to-end acceptance checks. Prints one PASS/FAIL line per check and
// exits non-zero if any check fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "oracles.h"
#include "standoff/annotation_graph.h"
#include "standoff/cts_resolution.h"
#include "standoff/pipeline.h"
#include "standoff/sentence_segmentation.h"
#include "standoff/serialization.h"
#include "standoff/tei_ingestion.h"
#include "standoff/tokenization.h"
#include "standoff/unicode_normalization.h"
#include "synthetic_tei.h"
#include "test_util.h"

namespace standoff {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using testing::U32;
using testing::U8;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects failures of one check; the first few are shown.
class Outcome {
 public:
  void Fail(const std::string& what) {
    if (failures_++ < 5) details_ += "\n    " + what;
  }
  void Require(bool condition, const std::string& what) {
    if (!condition) Fail(what);
  }
  void Note(const std::string& note) { note_ = note; }
  bool ok() const { return failures_ == 0; }
  std::string Summary() const {
    std::string s = note_;
    if (failures_ > 0) s += " (" + std::to_string(failures_) + " failures)" + details_;
    return s;
  }

 private:
  size_t failures_ = 0;
  std::string details_;
  std::string note_;
};

struct Document {
  xml::Document tei;
  BaseText base;
  std::vector<TokenSpan> tokens;
};

std::vector<std::string> SyntheticCorpus() {
  static const std::vector<std::string> corpus = [] {
    std::vector<std::string> docs;
    const auto crasis = testing::CrasisForms(testing::DataPath("crasis.tsv"));
    for (uint32_t seed = 1; seed <= 24; ++seed) {
      testing::SyntheticOptions options;
      options.seed = seed;
      options.books = 3;
      options.chapters = 5;
      options.sections = 6;
      options.crasis_forms = crasis;
      docs.push_back(testing::GenerateTei(options));
    }
    return docs;
  }();
  return corpus;
}

Document Process(const std::string& xml_text) {
  const auto& resources = testing::ShippedResources();
  Document d{xml::Document::Parse(xml_text), {}, {}};
  d.base = NormalizeBaseText(ClassifyAndExtract(d.tei, resources.policy, "d"),
                             resources.elision);
  d.tokens = Tokenize(d.base, resources.crasis);
  return d;
}

// Every token's offsets select its surface in the base text and map back
// to the TEI characters it was extracted from; the LAULA pointers resolve
// to the same offsets.
void OffsetRoundTrip(Outcome& out) {
  const auto corpus = SyntheticCorpus();
  const auto start = Clock::now();
  size_t tokens = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const Document d = Process(corpus[i]);
    tokens += d.tokens.size();
    out.Require(CheckSourceMap(d.base).empty(), "doc " + std::to_string(i) + ": source map");
    const testing::SourceTextOracle source_text(d.base, d.tei);
    for (const TokenSpan& t : d.tokens) {
      const std::string where = "doc " + std::to_string(i) + " " + t.id;
      out.Require(d.base.text.substr(t.start - 1, t.length) == t.surface, where + ": surface");
      out.Require(source_text(t.start, t.length) == t.surface,
                  where + ": source text of " + U8(t.surface));
    }
  }
  const double seconds = SecondsSince(start);
  // The LAULA pointers of a few documents read back to identical tokens.
  for (size_t i = 0; i < 3; ++i) {
    const xml::Document tei = xml::Document::Parse(corpus[i]);
    const AnnotationGraph g = testing::GraphFromTei(corpus[i], "d");
    testing::TempDir dir;
    WriteLaula(g, tei, dir.str());
    const AnnotationGraph back = ReadLaula(dir.str(), tei);
    out.Require(back.base().text == g.base().text, "laula text " + std::to_string(i));
    out.Require(*back.FindMarkLayer(kTokenLayer) == *g.FindMarkLayer(kTokenLayer),
                "laula tokens " + std::to_string(i));
  }
  out.Require(corpus.size() >= 20, "fewer than 20 documents");
  out.Require(tokens >= 50000, "only " + std::to_string(tokens) + " tokens");
  out.Require(seconds < 10.0, "took " + std::to_string(seconds) + " s");
  char note[128];
  std::snprintf(note, sizeof note, "%zu documents, %zu tokens, %.2f s", corpus.size(),
                tokens, seconds);
  out.Note(note);
}

size_t CountOf(std::u32string_view text, char32_t c) {
  return static_cast<size_t>(std::count(text.begin(), text.end(), c));
}

void UnicodeSuite(Outcome& out) {
  const auto& elision = testing::ShippedResources().elision;
  std::mt19937 rng(2026);
  for (int i = 0; i < 1000; ++i) {
    const std::u32string s = testing::RandomPolytonic(rng, 1 + rng() % 40);
    const std::u32string once = NfcNormalize(s);
    out.Require(NfcNormalize(once) == once, "NFC not idempotent on string " + std::to_string(i));
    const auto [unified, report] = NormalizeApostrophes(once, elision);
    out.Require(NfcNormalize(unified) == unified, "unified text not NFC, string " + std::to_string(i));
    out.Require(CountOf(unified, U'ʼ') - CountOf(once, U'ʼ') ==
                    report.TotalSubstitutions(),
                "substitution count, string " + std::to_string(i));
    for (char32_t banned : {U'᾽', U';', U'·'}) {
      out.Require(CountOf(unified, banned) == 0, "banned character in string " + std::to_string(i));
    }
  }
  out.Require(NfcNormalize(U"έ") == U"έ", "U+1F73 does not become U+03AD");
  // The same properties over whole extracted documents.
  for (const std::string& xml_text : SyntheticCorpus()) {
    const auto& resources = testing::ShippedResources();
    const xml::Document doc = xml::Document::Parse(xml_text);
    const BaseText raw = ClassifyAndExtract(doc, resources.policy, "d");
    NormalizationReport report;
    const BaseText base = NormalizeBaseText(raw, resources.elision, &report);
    for (char32_t banned : {U'᾽', U';', U'·', U'έ'}) {
      out.Require(CountOf(base.text, banned) == 0, "banned character in document text");
    }
    const std::u32string nfc = NfcNormalize(raw.text);
    out.Require(CountOf(base.text, U'ʼ') - CountOf(nfc, U'ʼ') ==
                    report.TotalSubstitutions(),
                "document substitution count");
  }
  out.Note("1000 random strings, " + std::to_string(SyntheticCorpus().size()) + " documents");
}

BaseText PlainBase(const std::u32string& text) {
  const auto& resources = testing::ShippedResources();
  const xml::Document doc = xml::Document::Parse(
      "<TEI><text><body><p>" + U8(text) + "</p></body></text></TEI>");
  return NormalizeBaseText(ClassifyAndExtract(doc, resources.policy, "d"), resources.elision);
}

void Crasis(Outcome& out) {
  const CrasisLexicon& lexicon = testing::ShippedResources().crasis;
  for (const auto& [form, entry] : lexicon.entries()) {
    const auto tokens = Tokenize(PlainBase(form), lexicon);
    if (tokens.size() != 2) {
      out.Fail(U8(form) + ": " + std::to_string(tokens.size()) + " tokens");
      continue;
    }
    out.Require(tokens[0].form == entry.first_form && tokens[1].form == entry.second_form,
                U8(form) + ": forms " + U8(tokens[0].form) + " + " + U8(tokens[1].form));
    out.Require(tokens[0].surface + tokens[1].surface == form, U8(form) + ": surfaces");
  }
  const auto tokens = Tokenize(PlainBase(U32("κἐκεῖνος")), lexicon);
  out.Require(tokens.size() == 2 && U8(tokens[0].form) == "καὶ" &&
                  U8(tokens[1].form) == "ἐκεῖνος",
              "κἐκεῖνος is not καὶ + ἐκεῖνος");
  out.Note(std::to_string(lexicon.entries().size()) + " lexicon entries");
}

void Segmentation(Outcome& out) {
  size_t sentences = 0;
  for (const std::string& xml_text : SyntheticCorpus()) {
    const Document d = Process(xml_text);
    const auto spans = Segment(d.tokens);
    sentences += spans.size();
    // Partition: consecutive, non-empty, covering every token once.
    size_t next = 0;
    for (const SentenceSpan& s : spans) {
      out.Require(s.first == next && s.last >= s.first, s.id + " breaks the partition");
      next = s.last + 1;
    }
    out.Require(next == d.tokens.size(), "sentences do not cover every token");
    size_t boundaries = 0;
    for (const TokenSpan& t : d.tokens) boundaries += IsSentenceBoundary(t);
    out.Require(spans.size() <= boundaries + 1, "more sentences than boundaries + 1");
    for (size_t k = 0; k + 1 < spans.size(); ++k) {
      size_t last = spans[k].last;
      while (last > spans[k].first &&
             IsClosingWrapper(d.tokens[last], &d.tokens[last - 1])) {
        --last;
      }
      const std::u32string& f = d.tokens[last].form;
      out.Require(f == U"." || f == U";" || f == U"·",
                  spans[k].id + " ends in " + U8(f));
    }
  }
  out.Note(std::to_string(sentences) + " sentences");
}

void DependencyForests(Outcome& out) {
  std::mt19937 rng(12);
  size_t forests = 0;
  for (int round = 0; round < 100; ++round) {
    const size_t n = 1 + rng() % 12;
    RelationLayer layer{"dep", "tok", {}};
    std::vector<std::pair<std::string, std::string>> edges;
    for (size_t d = 1; d <= n; ++d) {
      const size_t heads = rng() % 10 == 0 ? 2 : 1;
      for (size_t k = 0; k < heads; ++k) {
        // Lean towards earlier heads so that forests are common.
        const size_t h = rng() % 3 == 0 ? rng() % (n + 1) : rng() % d;
        const std::string head = h == 0 ? std::string(kRootId) : "t" + std::to_string(h);
        layer.edges.push_back({"t" + std::to_string(d), head});
        edges.emplace_back("t" + std::to_string(d), head);
      }
    }
    const bool expected = testing::OracleIsForest(edges);
    forests += expected;
    out.Require(IsDependencyForest(layer) == expected, "round " + std::to_string(round));
  }
  out.Note("100 graphs, " + std::to_string(forests) + " forests");
}

void Citations(Outcome& out) {
  const Document d = Process(testing::ReadFile(testing::TestDataPath("cts_fixture.xml")));
  const CtsScheme scheme = ParseCtsScheme(d.tei, "fx");
  const auto citations = AssignCitations(d.tei, d.base, d.tokens, scheme);
  std::istringstream expected(testing::ReadFile(testing::TestDataPath("cts_fixture.expected")));
  std::string line;
  size_t i = 0;
  while (std::getline(expected, line)) {
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (i >= d.tokens.size()) {
      out.Fail("fewer tokens than expected rows");
      break;
    }
    out.Require(U8(d.tokens[i].surface) == line.substr(0, tab), "token " + std::to_string(i));
    out.Require(citations[i].ToString() == line.substr(tab + 1),
                U8(d.tokens[i].surface) + " cited " + citations[i].ToString());
    out.Require(testing::OracleCitationContainsToken(d.tei, d.base, scheme, citations[i],
                                                     d.tokens[i]),
                U8(d.tokens[i].surface) + ": template disagrees");
    ++i;
  }
  out.Require(i == d.tokens.size(), "token count differs from expected rows");
  out.Note(std::to_string(i) + " tokens, " + std::to_string(scheme.depth()) + " levels");
}

size_t DirectorySize(const fs::path& dir) {
  size_t total = 0;
  for (const auto& entry : fs::directory_iterator(dir)) total += entry.file_size();
  return total;
}

void Serialization(Outcome& out) {
  const std::string annotated_xml =
      testing::ReadFile(testing::TestDataPath("corpus/tlg0001.tlg001.xml"));
  const std::string external =
      testing::ReadFile(testing::TestDataPath("annotations/tlg0001.tlg001.tsv"));
  std::vector<std::pair<std::string, std::string>> inputs = {
      {annotated_xml, external}, {SyntheticCorpus()[0], ""}, {SyntheticCorpus()[1], ""}};
  size_t paula_bytes = 0;
  size_t laula_bytes = 0;
  for (size_t i = 0; i < inputs.size(); ++i) {
    const std::string tag = "document " + std::to_string(i);
    const xml::Document tei = xml::Document::Parse(inputs[i].first);
    const AnnotationGraph g = testing::GraphFromTei(
        inputs[i].first, "d", inputs[i].second.empty() ? nullptr : &inputs[i].second);
    testing::TempDir paula, laula;
    WritePaula(g, paula.str());
    WriteLaula(g, tei, laula.str());
    out.Require(ReadPaula(paula.str()) == WithoutLayer(g, kSentenceLayer), tag + ": PAULA");
    out.Require(ReadLaula(laula.str(), tei) == g, tag + ": LAULA");
    out.Require(!fs::exists(paula.path() / "d.sent.xml"), tag + ": PAULA has sentences");
    out.Require(fs::exists(laula.path() / "d.sent.xml"), tag + ": LAULA lacks sentences");
    const size_t p = DirectorySize(paula.path());
    const size_t l = DirectorySize(laula.path());
    out.Require(l < p, tag + ": LAULA " + std::to_string(l) + " >= PAULA " + std::to_string(p));
    paula_bytes += p;
    laula_bytes += l;
  }
  out.Note("PAULA " + std::to_string(paula_bytes) + " bytes, LAULA " +
           std::to_string(laula_bytes) + " bytes");
}

std::map<std::string, std::string> Snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), root).string()] = testing::ReadFile(entry.path());
    }
  }
  return files;
}

void Determinism(Outcome& out) {
  testing::TempDir in, one, four;
  const auto corpus = SyntheticCorpus();
  for (size_t i = 0; i < 12; ++i) {
    testing::WriteFile(in.path() / ("tlg9" + std::to_string(i) + ".tlg001.xml"), corpus[i]);
  }
  fs::copy_file(testing::TestDataPath("corpus/nocts.xml"), in.path() / "nocts.xml");
  PipelineConfig config = PipelineConfig::Defaults();
  config.input_directory = in.str();
  config.output_directory = one.str();
  config.workers = 1;
  const CorpusStats a = Run(config);
  config.output_directory = four.str();
  config.workers = 4;
  const CorpusStats b = Run(config);
  out.Require(a == b, "statistics differ");
  const auto files_one = Snapshot(one.path());
  const auto files_four = Snapshot(four.path());
  out.Require(files_one.size() == files_four.size(), "different file sets");
  for (const auto& [name, content] : files_one) {
    const auto it = files_four.find(name);
    out.Require(it != files_four.end() && it->second == content, name + " differs");
  }
  out.Note(std::to_string(files_one.size()) + " files compared");
}

void LargeDocument(Outcome& out) {
  testing::TempDir in, output;
  testing::SyntheticOptions options;
  options.seed = 99;
  options.books = 12;
  options.chapters = 10;
  options.sections = 10;
  options.sentences_per_section = 20;
  options.crasis_forms = testing::CrasisForms(testing::DataPath("crasis.tsv"));
  testing::WriteFile(in.path() / "tlg0000.tlg000.xml", testing::GenerateTei(options));
  PipelineConfig config = PipelineConfig::Defaults();
  config.input_directory = in.str();
  config.output_directory = output.str();
  const auto start = Clock::now();
  const CorpusStats stats = Run(config);
  const double seconds = SecondsSince(start);
  out.Require(stats.processed == 1, "document rejected");
  const AnnotationGraph g = ReadPaula((output.path() / "paula" / "tlg0000.tlg000").string());
  const size_t characters = g.base().length();
  out.Require(characters >= 1000000, "only " + std::to_string(characters) + " characters");
  out.Require(seconds < 60.0, "took " + std::to_string(seconds) + " s");
  char note[128];
  std::snprintf(note, sizeof note, "%zu characters, %zu tokens, %.2f s", characters,
                stats.tokens, seconds);
  out.Note(note);
}

struct Check {
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace
}  // namespace standoff

int main() {
  using namespace standoff;
  // Per-document progress stays on stderr and only when something goes wrong.
  spdlog::set_default_logger(spdlog::stderr_color_mt("acceptance"));
  spdlog::set_level(spdlog::level::warn);
  const std::vector<Check> checks = {
      {"offset round-trip", OffsetRoundTrip},
      {"unicode normalization", UnicodeSuite},
      {"crasis splitting", Crasis},
      {"sentence segmentation", Segmentation},
      {"dependency forest validation", DependencyForests},
      {"CTS citations", Citations},
      {"PAULA/LAULA round trip", Serialization},
      {"worker-count determinism", Determinism},
      {"large document throughput", LargeDocument},
  };
  int failed = 0;
  for (size_t i = 0; i < checks.size(); ++i) {
    Outcome outcome;
    try {
      checks[i].run(outcome);
    } catch (const std::exception& e) {
      outcome.Fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %zu %s: %s\n", outcome.ok() ? "PASS" : "FAIL", i + 1, checks[i].name,
                outcome.Summary().c_str());
    std::fflush(stdout);
    failed += !outcome.ok();
  }
  return failed == 0 ? 0 : 1;
}
