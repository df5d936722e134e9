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

#include "synthetic_tei.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <fstream>
#include <sstream>

#include "standoff/utf.h"

namespace standoff::testing {
namespace {

const std::vector<std::string>& Vocabulary() {
  static const std::vector<std::string> kWords = {
      "λόγος", "ἄνθρωπος", "θεός", "πόλις", "ἀνήρ", "γυνή", "παῖς", "ἔργον",
      "ἡμέρα", "νύξ", "ὁδός", "ψυχή", "σῶμα", "δῆμος", "βασιλεύς", "στρατός",
      "ναῦς", "θάλασσα", "ποταμός", "χώρα", "ἱερόν", "οἶκος", "φίλος",
      "πολέμιος", "ἀγαθός", "καλός", "μέγας", "μικρός", "πολύς", "σοφός",
      "λέγει", "ἔφη", "ἦλθε", "εἶπε", "ἔχει", "ποιεῖ", "ὁρᾷ", "ἀκούει",
      "γράφει", "πέμπει", "λαμβάνει", "φέρει", "καί", "γάρ", "οὖν", "μέν",
      "ἀλλά", "οὐ", "μή", "ἐν", "εἰς", "ἐκ", "πρός", "ὑπό", "περί", "διά",
      "ὁ", "ἡ", "τό", "τοῦ", "τῆς", "τῷ", "τόν", "τήν", "αὐτός", "οὗτος",
      "ἐκεῖνος", "Ἀθηναῖοι", "Λακεδαιμόνιοι", "Ἕλληνες", "Ἡρόδοτος",
      "ῥήτωρ", "ἐλέγετο", "ἐποίησαν", "στρατηγός", "ἔτος"};
  return kWords;
}

// Elided stems present in the shipped elision lexicon.
const std::vector<std::string>& ElidedStems() {
  static const std::vector<std::string> kStems = {"δ", "ἀλλ", "ἐπ", "κατ",
                                                  "μετ", "τ", "οὐδ", "παρ"};
  return kStems;
}

std::string Nfd(const std::string& utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
  icu::UnicodeString out =
      nfd->normalize(icu::UnicodeString::fromUTF8(utf8), status);
  std::string result;
  out.toUTF8String(result);
  return result;
}

// Replaces tonos vowels by their oxia twins (canonically equivalent).
std::string Oxia(const std::string& utf8) {
  std::u32string text = Utf8ToUtf32(utf8);
  for (char32_t& c : text) {
    switch (c) {
      case U'ά': c = U'ά'; break;
      case U'έ': c = U'έ'; break;
      case U'ή': c = U'ή'; break;
      case U'ί': c = U'ί'; break;
      case U'ό': c = U'ό'; break;
      case U'ύ': c = U'ύ'; break;
      case U'ώ': c = U'ώ'; break;
      default: break;
    }
  }
  return Utf32ToUtf8(text);
}

class Writer {
 public:
  Writer(const SyntheticOptions& options)
      : options_(options), rng_(options.seed) {}

  std::string Document() {
    out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ += "<TEI xmlns=\"http://www.tei-c.org/ns/1.0\">\n<teiHeader>\n";
    out_ += "<fileDesc><titleStmt><title>Synthetic ";
    out_ += std::to_string(options_.seed);
    out_ += "</title></titleStmt></fileDesc>\n<encodingDesc>\n<refsDecl n=\"CTS\">\n";
    out_ +=
        "<cRefPattern n=\"section\" matchPattern=\"(\\w+).(\\w+).(\\w+)\" "
        "replacementPattern=\"#xpath(/tei:TEI/tei:text/tei:body/tei:div/"
        "tei:div[@n='$1']/tei:div[@n='$2']/tei:div[@n='$3'])\"/>\n";
    out_ +=
        "<cRefPattern n=\"chapter\" matchPattern=\"(\\w+).(\\w+)\" "
        "replacementPattern=\"#xpath(/tei:TEI/tei:text/tei:body/tei:div/"
        "tei:div[@n='$1']/tei:div[@n='$2'])\"/>\n";
    out_ +=
        "<cRefPattern n=\"book\" matchPattern=\"(\\w+)\" "
        "replacementPattern=\"#xpath(/tei:TEI/tei:text/tei:body/tei:div/"
        "tei:div[@n='$1'])\"/>\n";
    out_ += "</refsDecl>\n</encodingDesc>\n</teiHeader>\n<text>\n<body>\n";
    out_ += "<div type=\"edition\" n=\"urn:cts:greekLit:tlg9999.tlg";
    out_ += std::to_string(options_.seed) + ".synthetic\">\n";
    for (size_t b = 1; b <= options_.books; ++b) {
      out_ += "<div type=\"textpart\" subtype=\"book\" n=\"" + std::to_string(b) + "\">\n";
      if (options_.noisy) out_ += "<head>Book " + std::to_string(b) + "</head>\n";
      for (size_t c = 1; c <= options_.chapters; ++c) {
        out_ += " <div type=\"textpart\" subtype=\"chapter\" n=\"" + std::to_string(c) + "\">\n";
        for (size_t s = 1; s <= options_.sections; ++s) {
          out_ += "  <div type=\"textpart\" subtype=\"section\" n=\"" +
                  std::to_string(s) + "\">\n   <p>";
          for (size_t k = 0; k < options_.sentences_per_section; ++k) {
            if (k > 0) out_ += Chance(0.2) ? "\n    " : " ";
            Sentence();
          }
          out_ += "</p>\n  </div>\n";
        }
        out_ += " </div>\n";
      }
      out_ += "</div>\n";
    }
    out_ += "</div>\n</body>\n</text>\n</TEI>\n";
    return std::move(out_);
  }

 private:
  bool Chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  size_t Pick(size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng_);
  }

  void Word() {
    const bool noisy = options_.noisy;
    if (!options_.crasis_forms.empty() && Chance(0.03)) {
      out_ += options_.crasis_forms[Pick(options_.crasis_forms.size())];
      return;
    }
    if (noisy && Chance(0.04)) {
      static const char* kApostrophes[] = {"'", "’", "᾽", "ʼ"};
      out_ += ElidedStems()[Pick(ElidedStems().size())];
      out_ += kApostrophes[Pick(4)];
      return;
    }
    std::string word = Vocabulary()[Pick(Vocabulary().size())];
    if (noisy && Chance(0.1)) word = Nfd(word);
    if (noisy && Chance(0.1)) word = Oxia(word);
    if (noisy && Chance(0.03)) {
      out_ += "<choice><sic>" + word + "ς</sic><corr>" + word + "</corr></choice>";
      return;
    }
    if (noisy && Chance(0.02) && Utf8ToUtf32(word).size() >= 4) {
      const std::u32string w = Utf8ToUtf32(word);
      const size_t cut = 1 + Pick(w.size() - 2);
      // Never cut between a letter and its combining marks.
      if (!(w[cut] >= 0x300 && w[cut] <= 0x36F)) {
        out_ += Utf32ToUtf8(w.substr(0, cut)) + "<lb break=\"no\"/>" +
                Utf32ToUtf8(w.substr(cut));
        return;
      }
    }
    if (noisy && Chance(0.03)) {
      out_ += "<foreign xml:lang=\"grc\">" + word + "</foreign>";
      return;
    }
    out_ += word;
  }

  void Sentence() {
    const bool noisy = options_.noisy;
    const size_t words = options_.min_words +
                         Pick(options_.max_words - options_.min_words + 1);
    const bool quoted = noisy && Chance(0.1);
    if (quoted) out_ += "«";
    for (size_t w = 0; w < words; ++w) {
      if (w > 0) {
        if (noisy && Chance(0.08)) {
          out_ += ",";
        }
        out_ += Chance(0.05) ? "\n      " : " ";
        if (noisy && Chance(0.02)) out_ += "<lb/>";
      }
      Word();
      if (noisy && Chance(0.02)) {
        out_ += "<note type=\"footnote\">cf. " + std::to_string(Pick(100)) + "</note>";
      }
    }
    static const char* kPlain[] = {".", ";", "·"};
    static const char* kNoisy[] = {".", ";", "·", ";", "·"};
    out_ += noisy ? kNoisy[Pick(5)] : kPlain[Pick(3)];
    if (quoted) out_ += "»";
  }

  const SyntheticOptions& options_;
  std::mt19937 rng_;
  std::string out_;
};

}  // namespace

std::string GenerateTei(const SyntheticOptions& options) {
  return Writer(options).Document();
}

std::u32string RandomPolytonic(std::mt19937& rng, size_t length) {
  // Grave, acute, diaeresis, psili, dasia, perispomeni, ypogegrammeni.
  static const std::u32string kMarks = U"̀́̈̓̔͂ͅ";
  // Monotonic tonos letters, Greek question mark, ano teleia, koronis,
  // apostrophes, spaces and ASCII punctuation.
  static const std::u32string kOther =
      U"ΆΈΉΊΌΎΏΐάέή"
      U"ίόύώ;·᾽ '’.;·";
  auto below = [&](size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
  };
  std::u32string out;
  while (out.size() < length) {
    switch (below(6)) {
      case 0:
      case 1:
        out += static_cast<char32_t>(U'α' + below(25));
        break;
      case 2:
        out += kMarks[below(kMarks.size())];
        break;
      case 3:
      case 4: {
        // Greek Extended; unassigned code points fall back to alpha psili.
        const char32_t c = static_cast<char32_t>(0x1F00 + below(0x100));
        out += u_charType(static_cast<UChar32>(c)) == U_UNASSIGNED ? U'ἀ' : c;
        break;
      }
      default:
        out += kOther[below(kOther.size())];
        break;
    }
  }
  return out;
}

std::vector<std::string> CrasisForms(const std::string& lexicon_path) {
  std::ifstream in(lexicon_path);
  std::vector<std::string> forms;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    forms.push_back(line.substr(0, line.find('\t')));
  }
  return forms;
}

}  // namespace standoff::testing
