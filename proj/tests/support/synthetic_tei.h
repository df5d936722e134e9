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

// Seeded generator of EpiDoc-like TEI documents for tests and benchmarks.

#ifndef STANDOFF_TESTS_SYNTHETIC_TEI_H_
#define STANDOFF_TESTS_SYNTHETIC_TEI_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace standoff::testing {

struct SyntheticOptions {
  uint32_t seed = 1;
  size_t books = 2;
  size_t chapters = 3;
  size_t sections = 4;
  size_t sentences_per_section = 3;
  size_t min_words = 4;
  size_t max_words = 12;
  // Decomposed words, oxia vowels, U+037E/U+0387, apostrophe variants,
  // notes, <choice>, quotations and mid-word line breaks.
  bool noisy = true;
  // Graphic crasis forms to scatter through the text.
  std::vector<std::string> crasis_forms;
};

// A TEI document with a three-level CTS declaration (book.chapter.section).
std::string GenerateTei(const SyntheticOptions& options);

// A random string of Greek letters, combining marks and precomposed
// polytonic characters, in no particular normalization form.
std::u32string RandomPolytonic(std::mt19937& rng, size_t length);

// Graphic forms of a crasis lexicon file (first column).
std::vector<std::string> CrasisForms(const std::string& lexicon_path);

}  // namespace standoff::testing

#endif  // STANDOFF_TESTS_SYNTHETIC_TEI_H_
