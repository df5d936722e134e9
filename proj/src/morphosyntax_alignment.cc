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

#include "standoff/morphosyntax_alignment.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "standoff/error.h"
#include "standoff/unicode_normalization.h"
#include "standoff/utf.h"

namespace standoff {
namespace {

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    fields.emplace_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

bool ParseSize(std::string_view s, size_t* out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string At(size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

MorphAlphabet MorphAlphabet::Default() {
  return Parse(R"(# Part of speech and morphological features, one line per position.
1 pos nvadlgcrpmiuxe
2 person 123
3 number spd
4 tense pilrtfa
5 mood isonmp
6 voice apme
7 gender mfn
8 case ngdavl
9 degree cs
)");
}

MorphAlphabet MorphAlphabet::Parse(std::string_view content) {
  MorphAlphabet alphabet;
  std::array<bool, kMorphTagLength> seen{};
  std::istringstream in{std::string(content)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string position, name, chars;
    if (!(fields >> position) || position[0] == '#') continue;
    size_t p = 0;
    if (!ParseSize(position, &p) || p < 1 || p > kMorphTagLength ||
        !(fields >> name >> chars)) {
      throw Error(ErrorCode::kBadConfig, "morph alphabet " + At(line_no) +
                                             "expected '<1-9> <name> <chars>'");
    }
    if (seen[p - 1]) {
      throw Error(ErrorCode::kBadConfig,
                  "morph alphabet " + At(line_no) + "position repeated");
    }
    seen[p - 1] = true;
    alphabet.names_[p - 1] = name;
    alphabet.allowed_[p - 1] = chars;
  }
  for (size_t i = 0; i < kMorphTagLength; ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::kBadConfig, "morph alphabet lacks position " +
                                             std::to_string(i + 1));
    }
  }
  return alphabet;
}

MorphAlphabet MorphAlphabet::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::vector<std::string> MorphAlphabet::Check(std::string_view tag) const {
  std::vector<std::string> problems;
  if (Utf8Length(tag) != kMorphTagLength) {
    problems.push_back("tag '" + std::string(tag) + "' has " +
                       std::to_string(Utf8Length(tag)) + " characters");
    return problems;
  }
  for (size_t i = 0; i < kMorphTagLength; ++i) {
    const char c = tag[i];
    if (c == kEmptyFeature) continue;
    if (allowed_[i].find(c) == std::string::npos) {
      problems.push_back("'" + std::string(1, c) + "' is not a valid " +
                         names_[i] + " at position " + std::to_string(i + 1));
    }
  }
  return problems;
}

std::vector<ExternalSentence> ParseExternal(std::string_view content,
                                            const MorphAlphabet* alphabet) {
  std::vector<ExternalSentence> sentences;
  ExternalSentence current;
  std::vector<size_t> head_lines;
  auto finish = [&] {
    if (current.rows.empty()) return;
    const size_t n = current.rows.size();
    for (size_t i = 0; i < n; ++i) {
      if (current.rows[i].head > n) {
        throw Error(ErrorCode::kBadHead,
                    At(head_lines[i]) + "head " +
                        std::to_string(current.rows[i].head) +
                        " outside 0.." + std::to_string(n));
      }
    }
    current.ordinal = sentences.size() + 1;
    sentences.push_back(std::move(current));
    current = ExternalSentence();
    head_lines.clear();
  };

  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= content.size()) {
    size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      finish();
      if (end == content.size()) break;
      continue;
    }
    if (line.front() == '#') continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 6) {
      throw Error(ErrorCode::kMalformedRow,
                  At(line_no) + "expected 6 columns, got " +
                      std::to_string(fields.size()));
    }
    ExternalRow row;
    if (!ParseSize(fields[0], &row.ordinal) ||
        row.ordinal != current.rows.size() + 1) {
      throw Error(ErrorCode::kMalformedRow,
                  At(line_no) + "ID '" + fields[0] + "' expected " +
                      std::to_string(current.rows.size() + 1));
    }
    row.form = fields[1];
    row.lemma = fields[2];
    for (char32_t c : Utf8ToUtf32(row.lemma)) {
      if (IsWhitespace(c)) {
        throw Error(ErrorCode::kMalformedRow,
                    At(line_no) + "lemma '" + row.lemma +
                        "' is not a single word form");
      }
    }
    if (row.form.empty() || row.lemma.empty()) {
      throw Error(ErrorCode::kMalformedRow, At(line_no) + "empty form or lemma");
    }
    row.morph = fields[3];
    if (Utf8Length(row.morph) != kMorphTagLength) {
      throw Error(ErrorCode::kBadMorphTag,
                  At(line_no) + "tag '" + row.morph + "' is not 9 characters");
    }
    if (alphabet != nullptr) {
      const auto problems = alphabet->Check(row.morph);
      if (!problems.empty()) {
        throw Error(ErrorCode::kBadMorphTag, At(line_no) + problems.front());
      }
    }
    if (!ParseSize(fields[4], &row.head)) {
      throw Error(ErrorCode::kBadHead,
                  At(line_no) + "head '" + fields[4] + "' is not a number");
    }
    row.relation = fields[5];
    if (row.relation.empty()) {
      throw Error(ErrorCode::kMalformedRow, At(line_no) + "empty relation");
    }
    current.rows.push_back(std::move(row));
    head_lines.push_back(line_no);
    if (end == content.size()) break;
  }
  finish();
  return sentences;
}

AlignmentReport Align(AnnotationGraph& graph,
                      const std::vector<ExternalSentence>& external,
                      const AlignmentOptions& options) {
  const MarkLayer* tokens = graph.FindMarkLayer(kTokenLayer);
  const MarkLayer* sentences = graph.FindMarkLayer(kSentenceLayer);
  if (tokens == nullptr || sentences == nullptr) {
    throw Error(ErrorCode::kInvalidLayer,
                "alignment needs token and sentence layers");
  }
  if (sentences->marks.size() != external.size()) {
    throw Error(ErrorCode::kSentenceCountMismatch,
                std::to_string(sentences->marks.size()) +
                    " sentences in the document, " +
                    std::to_string(external.size()) + " in the annotations");
  }

  std::unordered_map<std::string, std::u32string> forms;
  if (const FeatureLayer* form_layer = graph.FindFeatureLayer("form")) {
    for (const auto& [id, value] : form_layer->values) {
      forms.emplace(id, Utf8ToUtf32(value));
    }
  } else {
    for (const Mark& m : tokens->marks) {
      if (const auto* r = std::get_if<CharRange>(&m.target)) {
        forms.emplace(m.id, graph.base().text.substr(r->start - 1, r->length));
      }
    }
  }

  FeatureLayer lemma{"lemma", std::string(kTokenLayer), {}};
  FeatureLayer morph{"morph", std::string(kTokenLayer), {}};
  FeatureLayer deprel{"deprel", std::string(kTokenLayer), {}};
  RelationLayer dep{"dep", std::string(kTokenLayer), {}};
  AlignmentReport report;

  for (size_t s = 0; s < external.size(); ++s) {
    const auto& ids = std::get<std::vector<std::string>>(
        sentences->marks[s].target);
    const auto& rows = external[s].rows;
    if (ids.size() != rows.size()) {
      throw Error(ErrorCode::kTokenCountMismatch,
                  "sentence " + std::to_string(s + 1) + ": " +
                      std::to_string(ids.size()) + " tokens, " +
                      std::to_string(rows.size()) + " annotation rows");
    }
    for (size_t i = 0; i < rows.size(); ++i) {
      const ExternalRow& row = rows[i];
      const std::string& id = ids[i];
      const auto form = forms.find(id);
      if (form != forms.end() &&
          form->second != NfcNormalize(Utf8ToUtf32(row.form))) {
        if (options.strict) {
          throw Error(ErrorCode::kFormMismatch,
                      "token " + id + ": '" + Utf32ToUtf8(form->second) +
                          "' vs '" + row.form + "'");
        }
        report.form_mismatches.push_back(id);
      }
      lemma.values.emplace_back(id, row.lemma);
      morph.values.emplace_back(id, row.morph);
      deprel.values.emplace_back(id, row.relation);
      dep.edges.push_back(
          {id, row.head == 0 ? std::string(kRootId) : ids[row.head - 1]});
    }
  }

  std::vector<Violation> violations;
  if (!IsDependencyForest(dep, &violations)) {
    throw Error(ErrorCode::kCyclicDependency,
                "external heads form a cycle at token " + violations.front().id);
  }
  AnnotationGraph updated = graph;
  updated.AddLayer(std::move(lemma));
  updated.AddLayer(std::move(morph));
  updated.AddLayer(std::move(dep));
  updated.AddLayer(std::move(deprel));
  graph = std::move(updated);
  return report;
}

}  // namespace standoff
