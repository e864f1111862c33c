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

#include "bitext/bitext.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bitext/acquisition.hpp"
#include "bitext/aligner.hpp"
#include "bitext/error.hpp"
#include "bitext/filter.hpp"
#include "bitext/io.hpp"
#include "bitext/metrics.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/translator.hpp"
#include "bitext/word_alignment.hpp"

struct bx_session {
  std::optional<bitext::PipelineConfig> config;
  unsigned jobs = 0;
  std::string out_dir;
  std::string last_error;
  bx_log_fn log = nullptr;
  void *log_user = nullptr;
};

namespace {

using namespace bitext;

bx_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return BX_ERR_INVALID_ARGUMENT;
    case ErrorKind::kConfig: return BX_ERR_CONFIG;
    case ErrorKind::kIo: return BX_ERR_IO;
    case ErrorKind::kInput: return BX_ERR_INPUT;
    case ErrorKind::kStage: return BX_ERR_STAGE;
    case ErrorKind::kNetwork: return BX_ERR_NETWORK;
    case ErrorKind::kEmptyDocument: return BX_ERR_EMPTY_DOCUMENT;
    case ErrorKind::kEngine: return BX_ERR_ENGINE;
  }
  return BX_ERR_INTERNAL;
}

// Runs fn, converting exceptions into a status and the session's message.
template <class F>
bx_status guarded(bx_session *s, F &&fn) {
  if (!s) return BX_ERR_INVALID_ARGUMENT;
  s->last_error.clear();
  try {
    fn();
    return BX_OK;
  } catch (const Error &e) {
    s->last_error = e.what();
    return to_status(e.kind());
  } catch (const std::filesystem::filesystem_error &e) {
    s->last_error = e.what();
    return BX_ERR_IO;
  } catch (const std::exception &e) {
    s->last_error = e.what();
    return BX_ERR_INTERNAL;
  }
}

char *dup_string(const std::string &s) {
  auto *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

bool given(const char *p) { return p && *p; }

std::string require(const char *p, const char *what) {
  if (!given(p)) throw Error(ErrorKind::kInvalidArgument, std::string(what) + " is required");
  return p;
}

std::function<void(const std::string &)> logger(bx_session *s) {
  if (!s->log) return {};
  return [s](const std::string &line) { s->log(line.c_str(), s->log_user); };
}

// Session config with the overrides applied; defaults when none is loaded.
PipelineConfig effective_config(const bx_session *s) {
  PipelineConfig c = s->config ? *s->config : PipelineConfig{};
  if (s->jobs) c.jobs = s->jobs;
  if (!s->out_dir.empty()) c.out_dir = std::filesystem::absolute(s->out_dir);
  return c;
}

LangCode lang_or(const char *given_lang, const LangCode &fallback) {
  return given(given_lang) ? LangCode(given_lang) : fallback;
}

}  // namespace

extern "C" {

const char *bx_version(void) { return "0.1.0"; }

const char *bx_status_name(bx_status status) {
  switch (status) {
    case BX_OK: return "ok";
    case BX_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BX_ERR_CONFIG: return "configuration error";
    case BX_ERR_IO: return "i/o error";
    case BX_ERR_INPUT: return "bad input";
    case BX_ERR_STAGE: return "stage failure";
    case BX_ERR_NETWORK: return "network error";
    case BX_ERR_EMPTY_DOCUMENT: return "empty document";
    case BX_ERR_ENGINE: return "translation engine error";
    case BX_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

bx_status bx_session_create(bx_session **out) {
  if (!out) return BX_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) bx_session();
  return *out ? BX_OK : BX_ERR_INTERNAL;
}

void bx_session_destroy(bx_session *session) { delete session; }

const char *bx_last_error(const bx_session *session) {
  return session ? session->last_error.c_str() : "";
}

void bx_set_log(bx_session *session, bx_log_fn fn, void *user) {
  if (!session) return;
  session->log = fn;
  session->log_user = user;
}

bx_status bx_set_jobs(bx_session *session, unsigned jobs) {
  return guarded(session, [&] { session->jobs = jobs; });
}

bx_status bx_set_out_dir(bx_session *session, const char *dir) {
  return guarded(session, [&] { session->out_dir = dir ? dir : ""; });
}

bx_status bx_load_config(bx_session *session, const char *path) {
  return guarded(session, [&] {
    auto c = PipelineConfig::load(require(path, "config path"));
    session->config = std::move(c);
  });
}

void bx_string_free(char *s) { std::free(s); }

bx_status bx_crawl(bx_session *session, const bx_crawl_options *o, size_t *pairs_written) {
  return guarded(session, [&] {
    if (!o) throw Error(ErrorKind::kInvalidArgument, "options are required");
    auto cfg = effective_config(session);
    CrawlOptions co;
    co.seed = given(o->seed) ? std::string(o->seed) : cfg.crawl_seed;
    if (co.seed.empty()) throw Error(ErrorKind::kConfig, "a seed URL is required");
    co.max_articles = o->max_articles ? o->max_articles : cfg.max_articles;
    co.delay = std::chrono::milliseconds(o->delay_ms ? o->delay_ms : cfg.delay_ms);
    co.source_lang = lang_or(o->source_lang, cfg.source_lang);
    co.target_lang = lang_or(o->target_lang, cfg.target_lang);
    if (co.source_lang == co.target_lang) {
      throw Error(ErrorKind::kConfig, "source and target languages must differ");
    }
    const std::filesystem::path rules_path =
        given(o->clean_rules) ? std::filesystem::path(o->clean_rules) : cfg.clean_rules;
    co.rules = rules_path.empty() ? CleanRules::defaults() : CleanRules::load(rules_path);
    co.log = logger(session);
    const bool fixture = co.seed.rfind("fixture://", 0) == 0;
    std::unique_ptr<Fetcher> fetcher;
    if (fixture) {
      std::filesystem::path root = given(o->fixtures_dir) ? std::filesystem::path(o->fixtures_dir)
                                                          : cfg.fixtures_dir;
      if (root.empty() || !std::filesystem::is_directory(root)) {
        throw Error(ErrorKind::kConfig, "fixture seed needs an existing --fixtures-dir");
      }
      fetcher = std::make_unique<FixtureFetcher>(root);
    } else {
      fetcher = std::make_unique<HttpFetcher>();
    }
    const std::filesystem::path out =
        given(o->out_dir) ? std::filesystem::path(o->out_dir) : cfg.stage_dir(Stage::kClean);
    auto crawl = crawl_topic(co, *fetcher);
    std::size_t written = 0;
    for (const auto &raw : assign_ids(crawl, fixture ? Origin::kFixture : Origin::kCrawled)) {
      auto pair = clean_pair(raw, co.rules, co.log);
      if (!pair) continue;
      write_document_pair(out, *pair);
      ++written;
    }
    if (pairs_written) *pairs_written = written;
  });
}

bx_status bx_clean_html(bx_session *session, const char *html, const char *lang,
                        const char *clean_rules, char **text_out) {
  return guarded(session, [&] {
    if (!html || !text_out) throw Error(ErrorKind::kInvalidArgument, "html and output required");
    auto cfg = effective_config(session);
    RawArticle a;
    a.lang = lang_or(lang, cfg.source_lang);
    a.html = html;
    const std::filesystem::path rules_path =
        given(clean_rules) ? std::filesystem::path(clean_rules) : cfg.clean_rules;
    auto rules = rules_path.empty() ? CleanRules::defaults() : CleanRules::load(rules_path);
    *text_out = dup_string(extract_clean_text(a, rules).text);
  });
}

bx_status bx_align_files(bx_session *session, const bx_align_options *o) {
  return guarded(session, [&] {
    if (!o) throw Error(ErrorKind::kInvalidArgument, "options are required");
    auto cfg = effective_config(session);
    const auto sl = lang_or(o->source_lang, cfg.source_lang);
    const auto tl = lang_or(o->target_lang, cfg.target_lang);
    if (sl == tl) throw Error(ErrorKind::kConfig, "source and target languages must differ");
    const std::filesystem::path out(require(o->out_dir, "out_dir"));
    auto load = [&](const char *path, const std::filesystem::path &abbrev_path) {
      std::vector<Sentence> sents;
      const auto file = require(path, "input file");
      if (o->presegmented) {
        for (auto &line : io::read_lines(file)) {
          if (!line.empty()) sents.push_back(Sentence::from_text(line));
        }
      } else {
        auto abbrevs = abbrev_path.empty() ? AbbreviationList{} : load_abbreviations(abbrev_path);
        sents = segment_sentences(io::read_file(file), abbrevs);
      }
      return sents;
    };
    auto src = load(o->source_file, cfg.abbreviations_source);
    auto tgt = load(o->target_file, cfg.abbreviations_target);
    std::optional<Lexicon> lex;
    if (given(o->lexicon)) {
      lex = Lexicon::load(o->lexicon);
    } else if (!cfg.aligner_lexicon.empty()) {
      lex = Lexicon::load(cfg.aligner_lexicon);
    }
    auto result = align_two_pass(src, tgt, lex ? &*lex : nullptr, cfg.aligner);
    std::vector<std::string> src_sents, tgt_sents, src_lines, tgt_lines;
    for (const auto &s : src) src_sents.push_back(s.text);
    for (const auto &s : tgt) tgt_sents.push_back(s.text);
    auto join = [](const std::vector<Sentence> &sents, const IndexSpan &span) {
      std::string text;
      for (std::size_t k = span.begin; k < span.end(); ++k) {
        if (!text.empty()) text += ' ';
        text += sents[k].text;
      }
      return text;
    };
    for (const auto &link : result.alignment.links) {
      if (link.src.empty() || link.tgt.empty()) continue;
      src_lines.push_back(join(src, link.src));
      tgt_lines.push_back(join(tgt, link.tgt));
    }
    io::write_lines(out / ("sents." + sl.str()), src_sents);
    io::write_lines(out / ("sents." + tl.str()), tgt_sents);
    io::write_file(out / "align.tsv", format_alignment_tsv(result.alignment));
    io::write_file(out / "lexicon.tsv", result.lexicon.to_tsv());
    io::write_lines(out / ("src." + sl.str()), src_lines);
    io::write_lines(out / ("src." + tl.str()), tgt_lines);
  });
}

bx_status bx_translate_file(bx_session *session, const bx_translate_options *o) {
  return guarded(session, [&] {
    if (!o) throw Error(ErrorKind::kInvalidArgument, "options are required");
    auto cfg = effective_config(session);
    EngineConfig ec = cfg.engine;
    if (given(o->engine)) ec.kind = o->engine;
    if (given(o->command)) ec.command = o->command;
    if (given(o->memory)) ec.memory = o->memory;
    if (given(o->lexicon)) {
      ec.lexicon = o->lexicon;
      if (ec.kind == "memory") ec.gloss_fallback = true;
    }
    if (ec.kind == "gloss" && ec.lexicon.empty()) {
      throw Error(ErrorKind::kConfig, "the gloss engine needs --lexicon");
    }
    if (ec.kind == "memory" && ec.memory.empty()) {
      throw Error(ErrorKind::kConfig, "the memory engine needs --tm");
    }
    if (ec.kind == "external" && ec.command.empty()) {
      throw Error(ErrorKind::kConfig, "the external engine needs --cmd");
    }
    auto engine = make_engine(ec);
    TranslationRequest req;
    req.lines = io::read_lines(require(o->input, "input"));
    req.source_lang = lang_or(o->source_lang, cfg.source_lang);
    req.target_lang = lang_or(o->target_lang, cfg.target_lang);
    std::filesystem::path cache =
        given(o->cache_dir) ? std::filesystem::path(o->cache_dir) : cfg.cache_dir;
    auto result = translate_lines(req, *engine, cache);
    io::write_lines(require(o->output, "output"), result.lines);
  });
}

bx_status bx_filter_files(bx_session *session, const bx_filter_options *o, size_t *accepted) {
  return guarded(session, [&] {
    if (!o) throw Error(ErrorKind::kInvalidArgument, "options are required");
    auto cfg = effective_config(session);
    auto src = io::read_lines(require(o->source_file, "source file"));
    auto trans = io::read_lines(require(o->trans_file, "translation file"));
    auto tgt = io::read_lines(require(o->target_file, "target file"));
    auto tiers = given(o->tiers_file) ? parse_tiers(io::read_file(o->tiers_file)) : cfg.tiers;
    StopwordSet stops;
    const std::filesystem::path stop_path =
        given(o->stopwords) ? std::filesystem::path(o->stopwords) : cfg.stopwords_target;
    if (!stop_path.empty()) stops = StopwordSet::load(stop_path, cfg.target_lang);
    SynonymLexicon syn;
    const std::filesystem::path syn_path =
        given(o->synonyms) ? std::filesystem::path(o->synonyms) : cfg.synonyms_target;
    if (!syn_path.empty()) syn = SynonymLexicon::load(syn_path);
    WindowPolicy window = cfg.window;
    if (o->window == BX_WINDOW_UNBOUNDED) {
      window = WindowPolicy::unbounded();
    } else if (o->window > 0) {
      window = WindowPolicy::bounded(static_cast<std::size_t>(o->window));
    } else if (o->window < 0) {
      throw Error(ErrorKind::kInvalidArgument, "window must be auto, unbounded or positive");
    }
    FilterResources res;
    res.stops = &stops;
    res.synonyms = &syn;
    res.max_variants = cfg.max_variants;
    res.ratio_on_filtered_tokens = cfg.ratio_on_filtered_tokens;
    std::vector<std::size_t> suggestions;
    if (!tgt.empty()) {
      for (std::size_t i = 0; i < src.size(); ++i) suggestions.push_back(i);
    }
    auto result = filter_corpus(src, trans, tgt, tiers, window, res, suggestions);
    const std::filesystem::path out(require(o->out_dir, "out_dir"));
    io::write_file(out / "accepted.tsv", format_accepted_tsv(result, src, tgt, tiers));
    io::write_file(out / "report.json", format_filter_report(result.report, tiers));
    if (accepted) *accepted = result.pairs.size();
  });
}

bx_status bx_ratio_similarity(const char *a, const char *b, double *out) {
  if (!a || !b || !out) return BX_ERR_INVALID_ARGUMENT;
  try {
    *out = ratio_similarity(std::string_view(a), std::string_view(b));
    return BX_OK;
  } catch (...) {
    return BX_ERR_INTERNAL;
  }
}

bx_status bx_evaluate_files(bx_session *session, const char *candidate,
                            const char *const *references, size_t n_references, int percent,
                            char **report_json) {
  return guarded(session, [&] {
    if (!report_json) throw Error(ErrorKind::kInvalidArgument, "output pointer required");
    std::vector<std::filesystem::path> refs;
    for (size_t i = 0; i < n_references; ++i) refs.emplace_back(require(references[i], "reference"));
    auto corpus = load_eval_corpus(require(candidate, "candidate"), refs);
    *report_json = dup_string(evaluate(corpus).to_json(percent != 0));
  });
}

bx_status bx_symmetrize_files(bx_session *session, const char *forward, const char *backward,
                              const char *output) {
  return guarded(session, [&] {
    auto f = io::read_lines(require(forward, "forward file"));
    auto b = io::read_lines(require(backward, "backward file"));
    io::write_lines(require(output, "output"), symmetrize_pharaoh_lines(f, b));
  });
}

bx_status bx_run_pipeline(bx_session *session, char **report_json) {
  return guarded(session, [&] {
    if (!session->config) throw Error(ErrorKind::kConfig, "no config loaded (use --config)");
    RunOptions opts;
    opts.log = logger(session);
    auto report = run_pipeline(effective_config(session), opts);
    if (report_json) *report_json = dup_string(report.to_json());
  });
}

bx_status bx_run_bootstrap(bx_session *session, unsigned rounds, char **summary_json) {
  return guarded(session, [&] {
    if (!session->config) throw Error(ErrorKind::kConfig, "no config loaded (use --config)");
    RunOptions opts;
    opts.log = logger(session);
    auto cfg = effective_config(session);
    iterate_bootstrap(cfg, rounds, opts);
    if (summary_json) {
      *summary_json = dup_string(io::read_file(cfg.out_dir / "bootstrap_report.json"));
    }
  });
}

}  // extern "C"
