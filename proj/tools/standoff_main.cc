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

// Command-line front end: run, validate, stats, detect-crasis.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "standoff/error.h"
#include "standoff/pipeline.h"

namespace {

void AddInputOptions(CLI::App* app, standoff::PipelineConfig* config) {
  app->add_option("-i,--input", config->input_directory,
                  "Directory of TEI XML files")
      ->required();
  app->add_option("--policy", config->policy_path, "Element policy file");
  app->add_option("--elision", config->elision_path, "Elision lexicon");
  app->add_option("--crasis", config->crasis_path, "Crasis lexicon");
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("standoff"));
  spdlog::set_pattern("%Y-%m-%dT%H:%M:%S.%e %l %v");

  standoff::PipelineConfig config = standoff::PipelineConfig::Defaults();
  CLI::App app{"Builds standoff PAULA/LAULA corpora from EpiDoc TEI XML"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML config file; flags given on the "
                 "command line take precedence");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  CLI::App* run = app.add_subcommand("run", "Convert a directory of TEI files");
  AddInputOptions(run, &config);
  run->add_option("-o,--output", config.output_directory, "Output directory")
      ->required();
  run->add_option("--annotations", config.annotation_directory,
                  "Directory of <docid>.tsv morphosyntax files");
  run->add_option("--alphabet", config.alphabet_path, "Morph tag alphabet");
  std::string formats = "both";
  run->add_option("--formats", formats, "paula, laula or both")
      ->check(CLI::IsMember({"paula", "laula", "both"}));
  run->add_flag("--strict", config.strict, "Reject documents on form mismatch");
  run->add_option("-j,--workers", config.workers, "Worker threads")
      ->check(CLI::PositiveNumber);

  CLI::App* validate =
      app.add_subcommand("validate", "Re-read and re-validate emitted file sets");
  std::string output_directory;
  std::string tei_directory;
  validate->add_option("-o,--output", output_directory, "Output directory")
      ->required();
  validate->add_option("-i,--input", tei_directory,
                       "TEI directory (needed to check LAULA sets)");

  CLI::App* stats = app.add_subcommand("stats", "Recount an output directory");
  stats->add_option("-o,--output", output_directory, "Output directory")
      ->required();

  CLI::App* detect = app.add_subcommand(
      "detect-crasis", "List likely crasis forms missing from the lexicon");
  AddInputOptions(detect, &config);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*run) {
      config.emit_paula = formats != "laula";
      config.emit_laula = formats != "paula";
      const standoff::CorpusStats result = standoff::Run(config);
      std::cout << result.ToText();
      return 0;
    }
    if (*validate) {
      const auto problems =
          standoff::ValidateOutput(output_directory, tei_directory);
      for (const std::string& p : problems) std::cout << p << "\n";
      return problems.empty() ? 0 : 1;
    }
    if (*stats) {
      std::cout << standoff::Stats(output_directory).ToText();
      return 0;
    }
    if (*detect) {
      for (const auto& c : standoff::ListCrasisCandidates(config)) {
        std::cout << c.document_id << "\t" << c.word << "\n";
      }
      return 0;
    }
  } catch (const standoff::Error& e) {
    spdlog::critical("{}", e.what());
    return 2;
  }
  return 0;
}
