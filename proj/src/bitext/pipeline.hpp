// Copyright 2026 The bitext-mine Authors.
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

#ifndef BITEXT_PIPELINE_HPP_
#define BITEXT_PIPELINE_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bitext/aligner.hpp"
#include "bitext/filter.hpp"
#include "bitext/lang.hpp"
#include "bitext/translator.hpp"

namespace bitext {

namespace fs = std::filesystem;

enum class Stage { kCrawl, kClean, kAlign, kTranslate, kFilter };
inline constexpr std::array<Stage, 5> kStages{Stage::kCrawl, Stage::kClean, Stage::kAlign,
                                              Stage::kTranslate, Stage::kFilter};
const char *stage_name(Stage s);

struct EngineConfig {
  std::string kind = "gloss";  // gloss, memory or external
  fs::path lexicon;            // gloss lexicon (also the memory fallback)
  fs::path memory;             // memory TSV
  std::string command;         // external command line
  bool gloss_fallback = false; // memory misses go to the gloss engine
};

struct PipelineConfig {
  LangCode source_lang{"pl"};
  LangCode target_lang{"en"};
  std::array<bool, 5> stages{true, true, true, true, true};

  fs::path out_dir = "out";
  fs::path fixtures_dir;
  fs::path cache_dir;  // defaults to <out_dir>/cache
  fs::path raw_dir;    // crawl output / clean input; defaults under out_dir
  fs::path docs_dir;   // clean output / align input; defaults under out_dir

  std::string crawl_seed;
  std::size_t max_articles = 20;
  std::size_t delay_ms = 0;
  fs::path clean_rules;

  fs::path abbreviations_source;
  fs::path abbreviations_target;
  fs::path stopwords_target;
  fs::path synonyms_target;
  std::size_t max_variants = kDefaultMaxVariants;

  AlignerParams aligner;
  fs::path aligner_lexicon;

  EngineConfig engine;

  std::vector<FilterTier> tiers = default_tiers();
  WindowPolicy window;
  bool ratio_on_filtered_tokens = true;

  std::uint64_t random_seed = 1;
  std::size_t jobs = 1;

  bool enabled(Stage s) const { return stages[static_cast<std::size_t>(s)]; }
  fs::path stage_dir(Stage s) const;

  // Relative paths are taken from `base_dir`. Throws Error(kConfig) naming
  // the offending key.
  static PipelineConfig from_json(const std::string &text, const fs::path &base_dir);
  static PipelineConfig load(const fs::path &path);

  // Checks ranges and that referenced files exist.
  void validate() const;

  // Hash of everything that affects artifact bytes (not out_dir or jobs).
  std::string hash() const;
  std::string to_json() const;
};

struct MiningRow {
  std::string doc_id;
  std::size_t src_sents = 0;
  std::size_t tgt_sents = 0;
  std::size_t aligned = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<std::size_t> per_tier;
};

struct MiningReport {
  std::vector<std::string> tier_names;
  std::vector<MiningRow> rows;  // ascending doc id
  MiningRow totals;
  std::string config_hash;

  void compute_totals();
  // Throws Error(kStage) unless totals equal the column sums and every row
  // satisfies accepted + rejected == aligned.
  void check() const;
  std::string to_json() const;
  std::string to_tsv() const;
};

struct RunOptions {
  std::function<void(const std::string &)> log;  // progress lines
};

// Runs the enabled stages in order. A disabled stage's artifacts must
// already exist. Stage failures surface as StageError.
MiningReport run_pipeline(const PipelineConfig &config, const RunOptions &opts = {});

struct BootstrapResult {
  std::vector<MiningReport> rounds;
  bool stopped_early = false;
};

// Round 1 is run_pipeline into <out_dir>/round-1. Each later round learns a
// lexicon from the accepted pairs so far, merges it into the aligner and
// gloss lexicons, and reruns align, translate and filter. The final
// round's corpus and report are copied to out_dir.
BootstrapResult iterate_bootstrap(const PipelineConfig &config, std::size_t rounds,
                                  const RunOptions &opts = {});

// Per-stage helpers shared with the CLI subcommands.
std::unique_ptr<TranslationEngine> make_engine(const EngineConfig &cfg);

std::string format_accepted_tsv(const FilterResult &result,
                                std::span<const std::string> src_lines,
                                std::span<const std::string> tgt_lines,
                                std::span<const FilterTier> tiers);
std::string format_filter_report(const FilterReport &report,
                                 std::span<const FilterTier> tiers);

}  // namespace bitext

#endif  // BITEXT_PIPELINE_HPP_
