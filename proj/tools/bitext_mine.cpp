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

// bitext-mine: command-line front end over the C API.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bitext/bitext.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

struct Globals {
  std::string config;
  std::string out_dir;
  unsigned jobs = 0;
  bool verbose = false;
};

int exit_code(bx_status st) {
  if (st == BX_OK) return 0;
  if (st == BX_ERR_CONFIG || st == BX_ERR_INVALID_ARGUMENT) return kExitConfig;
  return kExitStage;
}

int report(bx_session *s, bx_status st, const char *what) {
  if (st != BX_OK) {
    std::fprintf(stderr, "bitext-mine %s: %s: %s\n", what, bx_status_name(st), bx_last_error(s));
  }
  return exit_code(st);
}

void log_line(const char *line, void *user) {
  const bool verbose = *static_cast<bool *>(user);
  if (verbose || std::strstr(line, "warning")) std::fprintf(stderr, "%s\n", line);
}

const char *opt(const std::string &s) { return s.empty() ? nullptr : s.c_str(); }

std::vector<std::string> split_commas(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Parallel sentence mining from comparable bilingual documents"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "pipeline config (JSON)");
  app.add_option("--out-dir", g.out_dir, "output directory");
  app.add_option("--jobs", g.jobs, "worker threads");
  app.add_flag("--verbose,-v", g.verbose, "progress on stderr");
  app.set_version_flag("--version", bx_version());

  // crawl
  auto *crawl = app.add_subcommand("crawl", "crawl article pairs and write clean documents");
  crawl->fallthrough();
  bx_crawl_options co{};
  std::string seed, src_lang, tgt_lang, fixtures, rules;
  crawl->add_option("--seed", seed, "seed article URL (fixture:// or http[s]://)");
  crawl->add_option("--max-articles", co.max_articles, "stop after this many pairs");
  crawl->add_option("--delay-ms", co.delay_ms, "minimum delay between requests");
  crawl->add_option("--source-lang", src_lang);
  crawl->add_option("--target-lang", tgt_lang);
  crawl->add_option("--fixtures-dir", fixtures, "root for fixture:// URLs");
  crawl->add_option("--rules", rules, "cleaning rules (JSON)");

  // clean
  auto *clean = app.add_subcommand("clean", "extract paragraph text from one HTML page");
  clean->fallthrough();
  std::string clean_in, clean_out, clean_lang;
  clean->add_option("--in", clean_in, "HTML file")->required();
  clean->add_option("--out", clean_out, "text file (default stdout)");
  clean->add_option("--lang", clean_lang, "page language");
  clean->add_option("--rules", rules, "cleaning rules (JSON)");

  // align
  auto *align = app.add_subcommand("align", "two-pass sentence alignment of a document pair");
  align->fallthrough();
  bx_align_options ao{};
  std::string align_src, align_tgt, align_lex;
  bool presegmented = false;
  align->add_option("--src", align_src, "source text")->required();
  align->add_option("--tgt", align_tgt, "target text")->required();
  align->add_option("--source-lang", src_lang);
  align->add_option("--target-lang", tgt_lang);
  align->add_option("--lexicon", align_lex, "external dictionary TSV");
  align->add_flag("--presegmented", presegmented, "inputs hold one sentence per line");

  // translate
  auto *translate = app.add_subcommand("translate", "translate a file line by line");
  translate->fallthrough();
  std::string engine, cmd, tm, lexicon, cache, tr_in, tr_out;
  translate->add_option("--engine", engine)->check(CLI::IsMember({"memory", "gloss", "external"}));
  translate->add_option("--cmd", cmd, "external command (stdin/stdout, one line each)");
  translate->add_option("--tm", tm, "translation memory TSV");
  translate->add_option("--lexicon", lexicon, "gloss lexicon TSV");
  translate->add_option("--cache", cache, "cache directory");
  translate->add_option("--in", tr_in)->required();
  translate->add_option("--out", tr_out)->required();
  translate->add_option("--source-lang", src_lang);
  translate->add_option("--target-lang", tgt_lang);

  // filter
  auto *filter = app.add_subcommand("filter", "keep truly parallel pairs");
  filter->fallthrough();
  std::string f_src, f_trans, f_tgt, f_tiers, f_stops, f_syn, f_window = "auto";
  filter->add_option("--src", f_src, "source lines")->required();
  filter->add_option("--trans", f_trans, "their translations")->required();
  filter->add_option("--tgt", f_tgt, "target lines")->required();
  filter->add_option("--tiers", f_tiers, "tier ladder file");
  filter->add_option("--stopwords", f_stops, "target-language stopwords");
  filter->add_option("--synonyms", f_syn, "target-language synonyms TSV");
  filter->add_option("--window", f_window, "auto, unbounded or a radius");

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "BLEU, NIST, METEOR and TER");
  evaluate->fallthrough();
  std::string cand, refs;
  bool percent = false;
  evaluate->add_option("--cand", cand)->required();
  evaluate->add_option("--refs", refs, "comma-separated reference files")->required();
  evaluate->add_flag("--percent", percent, "scale BLEU, METEOR and TER by 100");

  // symmetrize
  auto *sym = app.add_subcommand("symmetrize", "grow-diag-final-and symmetrization");
  sym->fallthrough();
  std::string fwd, bwd, sym_out, method = "grow-diag-final-and";
  sym->add_option("--forward", fwd)->required();
  sym->add_option("--backward", bwd)->required();
  sym->add_option("--out", sym_out)->required();
  sym->add_option("--method", method)->check(CLI::IsMember({"grow-diag-final-and"}));

  auto *pipeline = app.add_subcommand("pipeline", "run the configured stages");
  pipeline->fallthrough();

  auto *bootstrap = app.add_subcommand("bootstrap", "rerun align and filter with learned lexicons");
  bootstrap->fallthrough();
  unsigned rounds = 2;
  bootstrap->add_option("--rounds", rounds)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  bx_session *s = nullptr;
  if (bx_session_create(&s) != BX_OK) return kExitStage;
  struct Closer {
    bx_session *s;
    ~Closer() { bx_session_destroy(s); }
  } closer{s};
  bx_set_log(s, log_line, &g.verbose);
  if (!g.config.empty()) {
    if (auto st = bx_load_config(s, g.config.c_str()); st != BX_OK) return report(s, st, "config");
  }
  if (g.jobs) bx_set_jobs(s, g.jobs);
  if (!g.out_dir.empty()) bx_set_out_dir(s, g.out_dir.c_str());
  const std::string out_dir = g.out_dir.empty() ? "." : g.out_dir;

  if (crawl->parsed()) {
    co.seed = opt(seed);
    co.source_lang = opt(src_lang);
    co.target_lang = opt(tgt_lang);
    co.fixtures_dir = opt(fixtures);
    co.clean_rules = opt(rules);
    co.out_dir = opt(g.out_dir);
    size_t n = 0;
    auto st = bx_crawl(s, &co, &n);
    if (st == BX_OK) std::printf("%zu document pairs\n", n);
    return report(s, st, "crawl");
  }
  if (clean->parsed()) {
    std::ifstream in(clean_in, std::ios::binary);
    if (!in) {
      std::fprintf(stderr, "bitext-mine clean: cannot read %s\n", clean_in.c_str());
      return kExitStage;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    char *text = nullptr;
    auto st = bx_clean_html(s, buf.str().c_str(), opt(clean_lang), opt(rules), &text);
    if (st == BX_OK) {
      if (clean_out.empty()) {
        std::printf("%s\n", text);
      } else {
        std::ofstream(clean_out, std::ios::binary) << text << '\n';
      }
      bx_string_free(text);
    }
    return report(s, st, "clean");
  }
  if (align->parsed()) {
    ao.source_file = align_src.c_str();
    ao.target_file = align_tgt.c_str();
    ao.presegmented = presegmented;
    ao.source_lang = opt(src_lang);
    ao.target_lang = opt(tgt_lang);
    ao.lexicon = opt(align_lex);
    ao.out_dir = out_dir.c_str();
    return report(s, bx_align_files(s, &ao), "align");
  }
  if (translate->parsed()) {
    bx_translate_options to{};
    to.input = tr_in.c_str();
    to.output = tr_out.c_str();
    to.engine = opt(engine);
    to.command = opt(cmd);
    to.memory = opt(tm);
    to.lexicon = opt(lexicon);
    to.cache_dir = opt(cache);
    to.source_lang = opt(src_lang);
    to.target_lang = opt(tgt_lang);
    return report(s, bx_translate_file(s, &to), "translate");
  }
  if (filter->parsed()) {
    bx_filter_options fo{};
    fo.source_file = f_src.c_str();
    fo.trans_file = f_trans.c_str();
    fo.target_file = f_tgt.c_str();
    fo.tiers_file = opt(f_tiers);
    fo.stopwords = opt(f_stops);
    fo.synonyms = opt(f_syn);
    if (f_window == "auto") {
      fo.window = BX_WINDOW_AUTO;
    } else if (f_window == "unbounded") {
      fo.window = BX_WINDOW_UNBOUNDED;
    } else {
      try {
        fo.window = std::stoi(f_window);
      } catch (const std::exception &) {
        fo.window = -2;
      }
      if (fo.window <= 0) {
        std::fprintf(stderr, "bitext-mine filter: --window must be auto, unbounded or positive\n");
        return kExitConfig;
      }
    }
    fo.out_dir = out_dir.c_str();
    size_t n = 0;
    auto st = bx_filter_files(s, &fo, &n);
    if (st == BX_OK) std::printf("%zu pairs accepted\n", n);
    return report(s, st, "filter");
  }
  if (evaluate->parsed()) {
    auto files = split_commas(refs);
    std::vector<const char *> ptrs;
    for (const auto &f : files) ptrs.push_back(f.c_str());
    char *json = nullptr;
    auto st = bx_evaluate_files(s, cand.c_str(), ptrs.data(), ptrs.size(), percent, &json);
    if (st == BX_OK) {
      std::fputs(json, stdout);
      bx_string_free(json);
    }
    return report(s, st, "evaluate");
  }
  if (sym->parsed()) {
    return report(s, bx_symmetrize_files(s, fwd.c_str(), bwd.c_str(), sym_out.c_str()),
                  "symmetrize");
  }
  if (pipeline->parsed()) {
    char *json = nullptr;
    auto st = bx_run_pipeline(s, &json);
    if (st == BX_OK) {
      std::fputs(json, stdout);
      bx_string_free(json);
    }
    return report(s, st, "pipeline");
  }
  if (bootstrap->parsed()) {
    char *json = nullptr;
    auto st = bx_run_bootstrap(s, rounds, &json);
    if (st == BX_OK) {
      std::fputs(json, stdout);
      bx_string_free(json);
    }
    return report(s, st, "bootstrap");
  }
  return kExitConfig;
}
