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

#include "bitext/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "bitext/acquisition.hpp"
#include "bitext/error.hpp"
#include "bitext/io.hpp"
#include "bitext/textproc.hpp"
#include "bitext/utf8.hpp"
#include "json.hpp"

namespace bitext {
namespace {

using json = nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string &key, const std::string &problem) {
  throw Error(ErrorKind::kConfig, "config: " + key + ": " + problem);
}

void check_keys(const json &obj, const std::string &where,
                std::initializer_list<const char *> allowed) {
  if (!obj.is_object()) config_error(where.empty() ? "<root>" : where, "expected an object");
  for (const auto &[key, value] : obj.items()) {
    bool ok = false;
    for (const char *a : allowed) ok = ok || key == a;
    if (!ok) {
      std::string list;
      for (const char *a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      config_error((where.empty() ? "" : where + ".") + key,
                   "unknown key (allowed: " + list + ")");
    }
  }
}

template <class T>
T get(const json &obj, const std::string &where, const char *key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception &) {
    config_error(where + "." + key, "wrong type");
  }
}

std::size_t get_count(const json &obj, const std::string &where, const char *key,
                      std::size_t fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  const auto &v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    config_error(where + "." + key, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

fs::path get_path(const json &obj, const std::string &where, const char *key,
                  const fs::path &base) {
  auto s = get<std::string>(obj, where, key, "");
  if (s.empty()) return {};
  fs::path p(s);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

void require_file(const fs::path &p, const std::string &key) {
  if (!p.empty() && !fs::is_regular_file(p)) {
    config_error(key, "file not found: " + p.string());
  }
}

std::string file_digest(const fs::path &p) {
  if (p.empty()) return "";
  try {
    return io::sha256_hex(io::read_file(p));
  } catch (const Error &) {
    return "missing";
  }
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The failure with the
// lowest index is rethrown once all workers have stopped.
void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)> &fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max<std::size_t>(jobs, 1), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto &th : pool) th.join();
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Wraps anything thrown for one document as a StageError.
template <class F>
void run_for_doc(Stage stage, const std::string &doc_id, F &&f) {
  try {
    f();
  } catch (const StageError &) {
    throw;
  } catch (const std::exception &e) {
    throw StageError(stage_name(stage), doc_id, e.what());
  }
}

// Empties a stage directory, refusing to touch one we did not create.
void reset_stage_dir(const fs::path &dir) {
  if (fs::exists(dir)) {
    const bool ours = fs::exists(dir / "stage.json") || fs::is_empty(dir);
    if (!ours) {
      throw Error(ErrorKind::kConfig, "refusing to overwrite " + dir.string() +
                                          ": not a stage directory (no stage.json)");
    }
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
}

void write_stage_json(const fs::path &dir, Stage stage, const std::string &config_hash,
                      const std::vector<std::string> &ids) {
  ordered_json j;
  j["stage"] = stage_name(stage);
  j["config_hash"] = config_hash;
  j["documents"] = ids;
  io::write_file(dir / "stage.json", j.dump(2) + "\n");
}

void require_stage_output(const fs::path &dir, Stage stage) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorKind::kConfig, std::string("stage '") + stage_name(stage) +
                                        "' is disabled but its artifacts are missing: " +
                                        dir.string());
  }
}

std::vector<std::string> sentence_texts(const std::vector<Sentence> &sents) {
  std::vector<std::string> out;
  out.reserve(sents.size());
  for (const auto &s : sents) out.push_back(s.text);
  return out;
}

std::string span_text(const std::vector<Sentence> &sents, const IndexSpan &span) {
  std::string out;
  for (std::size_t k = span.begin; k < span.end(); ++k) {
    if (!out.empty()) out += ' ';
    out += sents[k].text;
  }
  return out;
}

struct Resources {
  AbbreviationList abbrev_src;
  AbbreviationList abbrev_tgt;
  StopwordSet stops;
  SynonymLexicon synonyms;
  std::optional<Lexicon> aligner_lexicon;
};

Resources load_resources(const PipelineConfig &c) {
  Resources r;
  if (!c.abbreviations_source.empty()) r.abbrev_src = load_abbreviations(c.abbreviations_source);
  if (!c.abbreviations_target.empty()) r.abbrev_tgt = load_abbreviations(c.abbreviations_target);
  if (!c.stopwords_target.empty()) r.stops = StopwordSet::load(c.stopwords_target, c.target_lang);
  if (!c.synonyms_target.empty()) r.synonyms = SynonymLexicon::load(c.synonyms_target);
  if (!c.aligner_lexicon.empty()) r.aligner_lexicon = Lexicon::load(c.aligner_lexicon);
  return r;
}

void log_line(const RunOptions &opts, const std::string &msg) {
  if (opts.log) opts.log(msg);
}

// ---- stages -------------------------------------------------------------

void stage_crawl(const PipelineConfig &c, const std::string &hash, const RunOptions &opts) {
  const auto dir = c.stage_dir(Stage::kCrawl);
  CrawlOptions co;
  co.seed = c.crawl_seed;
  co.max_articles = c.max_articles;
  co.delay = std::chrono::milliseconds(c.delay_ms);
  co.source_lang = c.source_lang;
  co.target_lang = c.target_lang;
  co.rules = c.clean_rules.empty() ? CleanRules::defaults() : CleanRules::load(c.clean_rules);
  co.log = opts.log;
  const bool fixture = c.crawl_seed.rfind("fixture://", 0) == 0;
  std::unique_ptr<Fetcher> fetcher;
  if (fixture) {
    fetcher = std::make_unique<FixtureFetcher>(c.fixtures_dir);
  } else {
    fetcher = std::make_unique<HttpFetcher>();
  }
  CrawlResult crawl;
  try {
    crawl = crawl_topic(co, *fetcher);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::kConfig) throw;
    throw StageError("crawl", "", e.what());
  }
  auto pairs = assign_ids(crawl, fixture ? Origin::kFixture : Origin::kCrawled);
  reset_stage_dir(dir);
  std::vector<std::string> ids;
  for (const auto &p : pairs) {
    write_raw_pair(dir, p);
    ids.push_back(p.id);
  }
  write_stage_json(dir, Stage::kCrawl, hash, ids);
  log_line(opts, "crawl: " + std::to_string(pairs.size()) + " pairs, " +
                     std::to_string(crawl.skipped.size()) + " skipped");
}

void stage_clean(const PipelineConfig &c, const std::string &hash, const RunOptions &opts) {
  const auto in = c.stage_dir(Stage::kCrawl);
  require_stage_output(in, Stage::kCrawl);
  const auto dir = c.stage_dir(Stage::kClean);
  auto rules = c.clean_rules.empty() ? CleanRules::defaults() : CleanRules::load(c.clean_rules);
  auto raw = read_raw_pairs(in);
  std::vector<std::optional<DocumentPair>> cleaned(raw.size());
  std::mutex log_mu;
  auto locked_log = [&](const std::string &msg) {
    std::lock_guard lock(log_mu);
    log_line(opts, "clean: " + msg);
  };
  parallel_for(raw.size(), c.jobs, [&](std::size_t i) {
    run_for_doc(Stage::kClean, raw[i].id,
                [&] { cleaned[i] = clean_pair(raw[i], rules, locked_log); });
  });
  reset_stage_dir(dir);
  std::vector<std::string> ids;
  for (const auto &p : cleaned) {
    if (!p) continue;
    write_document_pair(dir, *p);
    ids.push_back(p->id);
  }
  write_stage_json(dir, Stage::kClean, hash, ids);
  log_line(opts, "clean: " + std::to_string(ids.size()) + " of " +
                     std::to_string(raw.size()) + " pairs kept");
}

std::vector<std::string> document_ids(const fs::path &dir) {
  std::vector<std::string> ids;
  if (!fs::is_directory(dir)) return ids;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) ids.push_back(entry.path().filename().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void stage_align(const PipelineConfig &c, const Resources &r, const std::string &hash,
                 const RunOptions &opts) {
  const auto in = c.stage_dir(Stage::kClean);
  require_stage_output(in, Stage::kClean);
  const auto dir = c.stage_dir(Stage::kAlign);
  auto docs = read_document_pairs(in);
  reset_stage_dir(dir);
  const auto &sl = c.source_lang.str();
  const auto &tl = c.target_lang.str();
  const Lexicon *lex = r.aligner_lexicon ? &*r.aligner_lexicon : nullptr;
  parallel_for(docs.size(), c.jobs, [&](std::size_t i) {
    const auto &doc = docs[i];
    run_for_doc(Stage::kAlign, doc.id, [&] {
      if (doc.source_doc.lang != c.source_lang || doc.target_doc.lang != c.target_lang) {
        throw Error(ErrorKind::kInput, "document languages " + doc.source_doc.lang.str() +
                                           "/" + doc.target_doc.lang.str() +
                                           " do not match the configured pair");
      }
      auto src = segment_sentences(doc.source_doc.text, r.abbrev_src);
      auto tgt = segment_sentences(doc.target_doc.text, r.abbrev_tgt);
      auto result = align_two_pass(src, tgt, lex, c.aligner);
      std::vector<std::string> src_lines, tgt_lines;
      for (const auto &link : result.alignment.links) {
        if (link.src.empty() || link.tgt.empty()) continue;
        src_lines.push_back(span_text(src, link.src));
        tgt_lines.push_back(span_text(tgt, link.tgt));
      }
      const auto d = dir / doc.id;
      io::write_lines(d / ("sents." + sl), sentence_texts(src));
      io::write_lines(d / ("sents." + tl), sentence_texts(tgt));
      io::write_file(d / "align.tsv", format_alignment_tsv(result.alignment));
      io::write_file(d / "lexicon.tsv", result.lexicon.to_tsv());
      io::write_lines(d / ("src." + sl), src_lines);
      io::write_lines(d / ("src." + tl), tgt_lines);
    });
  });
  std::vector<std::string> ids;
  for (const auto &d : docs) ids.push_back(d.id);
  write_stage_json(dir, Stage::kAlign, hash, ids);
  log_line(opts, "align: " + std::to_string(docs.size()) + " documents");
}

void stage_translate(const PipelineConfig &c, const std::string &hash,
                     const RunOptions &opts) {
  const auto in = c.stage_dir(Stage::kAlign);
  require_stage_output(in, Stage::kAlign);
  const auto dir = c.stage_dir(Stage::kTranslate);
  auto ids = document_ids(in);
  auto engine = make_engine(c.engine);
  const auto cache_dir = c.cache_dir.empty() ? c.out_dir / "cache" : c.cache_dir;
  TranslationCache cache(cache_dir, engine->id(), c.source_lang, c.target_lang);
  reset_stage_dir(dir);
  parallel_for(ids.size(), c.jobs, [&](std::size_t i) {
    run_for_doc(Stage::kTranslate, ids[i], [&] {
      TranslationRequest req;
      req.lines = io::read_lines(in / ids[i] / ("src." + c.source_lang.str()));
      req.source_lang = c.source_lang;
      req.target_lang = c.target_lang;
      auto result = translate_lines(req, *engine, &cache);
      io::write_lines(dir / ids[i] / "src.trans", result.lines);
    });
  });
  write_stage_json(dir, Stage::kTranslate, hash, ids);
  log_line(opts, "translate: " + std::to_string(ids.size()) + " documents with " +
                     engine->id());
}

void stage_filter(const PipelineConfig &c, const Resources &r, const std::string &hash,
                  const RunOptions &opts) {
  const auto align_dir = c.stage_dir(Stage::kAlign);
  const auto trans_dir = c.stage_dir(Stage::kTranslate);
  require_stage_output(align_dir, Stage::kAlign);
  require_stage_output(trans_dir, Stage::kTranslate);
  const auto dir = c.stage_dir(Stage::kFilter);
  auto ids = document_ids(align_dir);
  FilterResources res;
  res.stops = &r.stops;
  res.synonyms = &r.synonyms;
  res.max_variants = c.max_variants;
  res.ratio_on_filtered_tokens = c.ratio_on_filtered_tokens;
  reset_stage_dir(dir);
  parallel_for(ids.size(), c.jobs, [&](std::size_t i) {
    run_for_doc(Stage::kFilter, ids[i], [&] {
      auto src = io::read_lines(align_dir / ids[i] / ("src." + c.source_lang.str()));
      auto tgt = io::read_lines(align_dir / ids[i] / ("src." + c.target_lang.str()));
      auto trans = io::read_lines(trans_dir / ids[i] / "src.trans");
      // The hunaligned files are line-parallel, so line i is the aligner's
      // suggestion for source line i.
      std::vector<std::size_t> suggestions(src.size());
      for (std::size_t k = 0; k < src.size(); ++k) suggestions[k] = k;
      auto result = filter_corpus(src, trans, tgt, c.tiers, c.window, res,
                                  tgt.empty() ? std::span<const std::size_t>() : suggestions);
      io::write_file(dir / ids[i] / "accepted.tsv",
                     format_accepted_tsv(result, src, tgt, c.tiers));
      io::write_file(dir / ids[i] / "report.json", format_filter_report(result.report, c.tiers));
    });
  });
  write_stage_json(dir, Stage::kFilter, hash, ids);
  log_line(opts, "filter: " + std::to_string(ids.size()) + " documents");
}

// Builds the corpus files and mining report from stage artifacts.
MiningReport assemble(const PipelineConfig &c, const std::string &hash) {
  const auto align_dir = c.stage_dir(Stage::kAlign);
  const auto filter_dir = c.stage_dir(Stage::kFilter);
  require_stage_output(filter_dir, Stage::kFilter);
  MiningReport report;
  report.config_hash = hash;
  for (const auto &t : c.tiers) report.tier_names.push_back(comparator_name(t.comparator));
  std::vector<std::string> corpus_src, corpus_tgt;
  for (const auto &id : document_ids(filter_dir)) {
    MiningRow row;
    row.doc_id = id;
    const auto a = align_dir / id;
    row.src_sents = io::read_lines(a / ("sents." + c.source_lang.str())).size();
    row.tgt_sents = io::read_lines(a / ("sents." + c.target_lang.str())).size();
    auto fr = json::parse(io::read_file(filter_dir / id / "report.json"));
    row.aligned = fr.at("candidates_in").get<std::size_t>();
    row.accepted = fr.at("accepted").get<std::size_t>();
    row.rejected = fr.at("rejected").get<std::size_t>();
    row.per_tier.assign(c.tiers.size(), 0);
    const auto &tiers = fr.at("per_tier");
    for (std::size_t t = 0; t < c.tiers.size() && t < tiers.size(); ++t) {
      row.per_tier[t] = tiers.at(t).at("accepted").get<std::size_t>();
    }
    for (const auto &line : io::read_lines(filter_dir / id / "accepted.tsv")) {
      auto f = io::split_tabs(line);
      if (f.size() != 4) {
        throw StageError("filter", id, "malformed accepted.tsv line");
      }
      corpus_src.push_back(f[0]);
      corpus_tgt.push_back(f[1]);
    }
    report.rows.push_back(std::move(row));
  }
  report.compute_totals();
  report.check();
  io::write_lines(c.out_dir / ("corpus." + c.source_lang.str()), corpus_src);
  io::write_lines(c.out_dir / ("corpus." + c.target_lang.str()), corpus_tgt);
  io::write_file(c.out_dir / "mining_report.json", report.to_json());
  io::write_file(c.out_dir / "mining_report.tsv", report.to_tsv());
  return report;
}

}  // namespace

const char *stage_name(Stage s) {
  switch (s) {
    case Stage::kCrawl: return "crawl";
    case Stage::kClean: return "clean";
    case Stage::kAlign: return "align";
    case Stage::kTranslate: return "translate";
    case Stage::kFilter: return "filter";
  }
  return "?";
}

fs::path PipelineConfig::stage_dir(Stage s) const {
  switch (s) {
    case Stage::kCrawl: return raw_dir.empty() ? out_dir / "raw" : raw_dir;
    case Stage::kClean: return docs_dir.empty() ? out_dir / "docs" : docs_dir;
    case Stage::kAlign: return out_dir / "align";
    case Stage::kTranslate: return out_dir / "translate";
    case Stage::kFilter: return out_dir / "filter";
  }
  return out_dir;
}

PipelineConfig PipelineConfig::from_json(const std::string &text, const fs::path &base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kConfig, std::string("config: not valid JSON: ") + e.what());
  }
  check_keys(root, "", {"source_lang", "target_lang", "stages", "paths", "crawl", "textproc",
                        "aligner", "translator", "filter", "random_seed", "jobs"});
  PipelineConfig c;
  const fs::path base = base_dir.empty() ? fs::current_path() : fs::absolute(base_dir);
  try {
    c.source_lang = LangCode(get<std::string>(root, "", "source_lang", "pl"));
    c.target_lang = LangCode(get<std::string>(root, "", "target_lang", "en"));
  } catch (const Error &e) {
    config_error("source_lang/target_lang", e.what());
  }
  c.random_seed = get<std::uint64_t>(root, "", "random_seed", 1);
  c.jobs = get_count(root, "", "jobs", 1);

  if (root.contains("stages")) {
    const auto &s = root.at("stages");
    check_keys(s, "stages", {"crawl", "clean", "align", "translate", "filter"});
    for (auto st : kStages) {
      c.stages[static_cast<std::size_t>(st)] =
          get<bool>(s, "stages", stage_name(st), true);
    }
  }
  if (root.contains("paths")) {
    const auto &p = root.at("paths");
    check_keys(p, "paths", {"out_dir", "fixtures_dir", "cache_dir", "raw_dir", "docs_dir"});
    auto out = get_path(p, "paths", "out_dir", base);
    c.out_dir = out.empty() ? base / "out" : out;
    c.fixtures_dir = get_path(p, "paths", "fixtures_dir", base);
    c.cache_dir = get_path(p, "paths", "cache_dir", base);
    c.raw_dir = get_path(p, "paths", "raw_dir", base);
    c.docs_dir = get_path(p, "paths", "docs_dir", base);
  } else {
    c.out_dir = base / "out";
  }
  if (root.contains("crawl")) {
    const auto &p = root.at("crawl");
    check_keys(p, "crawl", {"seed", "max_articles", "delay_ms", "clean_rules"});
    c.crawl_seed = get<std::string>(p, "crawl", "seed", "");
    c.max_articles = get_count(p, "crawl", "max_articles", c.max_articles);
    c.delay_ms = get_count(p, "crawl", "delay_ms", 0);
    c.clean_rules = get_path(p, "crawl", "clean_rules", base);
  }
  if (root.contains("textproc")) {
    const auto &p = root.at("textproc");
    check_keys(p, "textproc", {"abbreviations_source", "abbreviations_target",
                               "stopwords_target", "synonyms_target", "max_variants"});
    c.abbreviations_source = get_path(p, "textproc", "abbreviations_source", base);
    c.abbreviations_target = get_path(p, "textproc", "abbreviations_target", base);
    c.stopwords_target = get_path(p, "textproc", "stopwords_target", base);
    c.synonyms_target = get_path(p, "textproc", "synonyms_target", base);
    c.max_variants = get_count(p, "textproc", "max_variants", c.max_variants);
  }
  if (root.contains("aligner")) {
    const auto &p = root.at("aligner");
    check_keys(p, "aligner", {"priors", "mean_ratio", "variance", "lexical_weight",
                              "lexicon_floor", "min_count", "lexicon"});
    if (p.contains("priors")) {
      auto v = get<std::vector<double>>(p, "aligner", "priors", {});
      if (v.size() != kNumCategories) {
        config_error("aligner.priors", "expected 6 values in the order 0-1, 1-0, 1-1, 1-2, 2-1, 2-2");
      }
      std::copy(v.begin(), v.end(), c.aligner.priors.begin());
    }
    c.aligner.mean_ratio = get<double>(p, "aligner", "mean_ratio", c.aligner.mean_ratio);
    c.aligner.variance = get<double>(p, "aligner", "variance", c.aligner.variance);
    c.aligner.lexical_weight = get<double>(p, "aligner", "lexical_weight", c.aligner.lexical_weight);
    c.aligner.lexicon_floor = get<double>(p, "aligner", "lexicon_floor", c.aligner.lexicon_floor);
    c.aligner.min_count = get_count(p, "aligner", "min_count", c.aligner.min_count);
    c.aligner_lexicon = get_path(p, "aligner", "lexicon", base);
  }
  if (root.contains("translator")) {
    const auto &p = root.at("translator");
    check_keys(p, "translator", {"engine", "lexicon", "memory", "command", "gloss_fallback"});
    c.engine.kind = get<std::string>(p, "translator", "engine", "gloss");
    c.engine.lexicon = get_path(p, "translator", "lexicon", base);
    c.engine.memory = get_path(p, "translator", "memory", base);
    c.engine.command = get<std::string>(p, "translator", "command", "");
    c.engine.gloss_fallback = get<bool>(p, "translator", "gloss_fallback", false);
  }
  if (root.contains("filter")) {
    const auto &p = root.at("filter");
    check_keys(p, "filter", {"tiers", "tiers_file", "window", "ratio_on_filtered_tokens"});
    if (p.contains("tiers") && p.contains("tiers_file")) {
      config_error("filter", "give either tiers or tiers_file, not both");
    }
    if (p.contains("tiers")) {
      const auto &arr = p.at("tiers");
      if (!arr.is_array()) config_error("filter.tiers", "expected an array");
      c.tiers.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto where = "filter.tiers[" + std::to_string(i) + "]";
        check_keys(arr[i], where, {"comparator", "threshold"});
        FilterTier t;
        try {
          t.comparator = parse_comparator(get<std::string>(arr[i], where, "comparator", ""));
        } catch (const Error &e) {
          config_error(where + ".comparator", e.what());
        }
        t.threshold = get<double>(arr[i], where, "threshold", -1.0);
        c.tiers.push_back(t);
      }
    }
    auto tiers_file = get_path(p, "filter", "tiers_file", base);
    if (!tiers_file.empty()) {
      require_file(tiers_file, "filter.tiers_file");
      c.tiers = parse_tiers(io::read_file(tiers_file));
    }
    if (p.contains("window")) {
      const auto &w = p.at("window");
      if (w.is_string() && w.get<std::string>() == "auto") {
        c.window = WindowPolicy{};
      } else if (w.is_string() && w.get<std::string>() == "unbounded") {
        c.window = WindowPolicy::unbounded();
      } else if (w.is_number_integer() && w.get<long long>() > 0) {
        c.window = WindowPolicy::bounded(w.get<std::size_t>());
      } else {
        config_error("filter.window", "expected \"auto\", \"unbounded\" or a positive integer");
      }
    }
    c.ratio_on_filtered_tokens =
        get<bool>(p, "filter", "ratio_on_filtered_tokens", c.ratio_on_filtered_tokens);
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path &path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorKind::kConfig, "config file not found: " + path.string());
  }
  return from_json(io::read_file(path), fs::absolute(path).parent_path());
}

void PipelineConfig::validate() const {
  if (source_lang == target_lang) {
    config_error("source_lang/target_lang", "languages must differ");
  }
  if (jobs == 0) config_error("jobs", "must be at least 1");
  if (enabled(Stage::kCrawl)) {
    if (crawl_seed.empty()) config_error("crawl.seed", "required when the crawl stage is on");
    if (max_articles == 0) config_error("crawl.max_articles", "must be at least 1");
    if (crawl_seed.rfind("fixture://", 0) == 0 && !fs::is_directory(fixtures_dir)) {
      config_error("paths.fixtures_dir", "fixture seed needs an existing fixtures directory" +
                                             (fixtures_dir.empty() ? std::string()
                                                                   : ": " + fixtures_dir.string()));
    }
  }
  require_file(clean_rules, "crawl.clean_rules");
  require_file(abbreviations_source, "textproc.abbreviations_source");
  require_file(abbreviations_target, "textproc.abbreviations_target");
  require_file(stopwords_target, "textproc.stopwords_target");
  require_file(synonyms_target, "textproc.synonyms_target");
  require_file(aligner_lexicon, "aligner.lexicon");
  if (max_variants == 0) config_error("textproc.max_variants", "must be at least 1");

  for (std::size_t i = 0; i < kNumCategories; ++i) {
    if (!(aligner.priors[i] > 0.0 && aligner.priors[i] <= 1.0)) {
      config_error("aligner.priors", "each prior must be in (0, 1]");
    }
  }
  if (!(aligner.mean_ratio > 0.0)) config_error("aligner.mean_ratio", "must be positive");
  if (!(aligner.variance > 0.0)) config_error("aligner.variance", "must be positive");
  if (!(aligner.lexical_weight >= 0.0)) config_error("aligner.lexical_weight", "must be >= 0");
  if (!(aligner.lexicon_floor > 0.0 && aligner.lexicon_floor <= 1.0)) {
    config_error("aligner.lexicon_floor", "must be in (0, 1]");
  }
  if (aligner.min_count == 0) config_error("aligner.min_count", "must be at least 1");

  if (enabled(Stage::kTranslate)) {
    const auto &e = engine;
    if (e.kind == "gloss") {
      if (e.lexicon.empty()) config_error("translator.lexicon", "required by the gloss engine");
    } else if (e.kind == "memory") {
      if (e.memory.empty()) config_error("translator.memory", "required by the memory engine");
      if (e.gloss_fallback && e.lexicon.empty()) {
        config_error("translator.lexicon", "required when gloss_fallback is on");
      }
    } else if (e.kind == "external") {
      if (e.command.empty()) config_error("translator.command", "required by the external engine");
    } else {
      config_error("translator.engine", "unknown engine '" + e.kind +
                                            "' (expected gloss, memory or external)");
    }
    require_file(e.lexicon, "translator.lexicon");
    require_file(e.memory, "translator.memory");
  }

  if (tiers.empty()) config_error("filter.tiers", "at least one tier required");
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    if (!(tiers[i].threshold >= 0.0 && tiers[i].threshold <= 1.0)) {
      config_error("filter.tiers[" + std::to_string(i) + "].threshold", "must be in [0, 1]");
    }
  }
}

std::string PipelineConfig::to_json() const {
  ordered_json j;
  j["source_lang"] = source_lang.str();
  j["target_lang"] = target_lang.str();
  for (auto s : kStages) j["stages"][stage_name(s)] = enabled(s);
  j["paths"]["out_dir"] = out_dir.string();
  j["paths"]["fixtures_dir"] = fixtures_dir.string();
  j["paths"]["cache_dir"] = cache_dir.string();
  j["paths"]["raw_dir"] = raw_dir.string();
  j["paths"]["docs_dir"] = docs_dir.string();
  j["crawl"]["seed"] = crawl_seed;
  j["crawl"]["max_articles"] = max_articles;
  j["crawl"]["delay_ms"] = delay_ms;
  j["crawl"]["clean_rules"] = clean_rules.string();
  j["textproc"]["abbreviations_source"] = abbreviations_source.string();
  j["textproc"]["abbreviations_target"] = abbreviations_target.string();
  j["textproc"]["stopwords_target"] = stopwords_target.string();
  j["textproc"]["synonyms_target"] = synonyms_target.string();
  j["textproc"]["max_variants"] = max_variants;
  j["aligner"]["priors"] = aligner.priors;
  j["aligner"]["mean_ratio"] = aligner.mean_ratio;
  j["aligner"]["variance"] = aligner.variance;
  j["aligner"]["lexical_weight"] = aligner.lexical_weight;
  j["aligner"]["lexicon_floor"] = aligner.lexicon_floor;
  j["aligner"]["min_count"] = aligner.min_count;
  j["aligner"]["lexicon"] = aligner_lexicon.string();
  j["translator"]["engine"] = engine.kind;
  j["translator"]["lexicon"] = engine.lexicon.string();
  j["translator"]["memory"] = engine.memory.string();
  j["translator"]["command"] = engine.command;
  j["translator"]["gloss_fallback"] = engine.gloss_fallback;
  ordered_json tiers_j = ordered_json::array();
  for (const auto &t : tiers) {
    tiers_j.push_back({{"comparator", comparator_name(t.comparator)}, {"threshold", t.threshold}});
  }
  j["filter"]["tiers"] = tiers_j;
  switch (window.mode) {
    case WindowPolicy::Mode::kAuto: j["filter"]["window"] = "auto"; break;
    case WindowPolicy::Mode::kUnbounded: j["filter"]["window"] = "unbounded"; break;
    case WindowPolicy::Mode::kBounded: j["filter"]["window"] = window.radius; break;
  }
  j["filter"]["ratio_on_filtered_tokens"] = ratio_on_filtered_tokens;
  j["random_seed"] = random_seed;
  j["jobs"] = jobs;
  return j.dump(2) + "\n";
}

std::string PipelineConfig::hash() const {
  // Resource files are hashed by content so that moving a checkout (or
  // writing to another out_dir) keeps the hash.
  auto j = ordered_json::parse(to_json());
  j.erase("stages");
  j.erase("paths");
  j.erase("jobs");
  j["crawl"]["clean_rules"] = file_digest(clean_rules);
  for (const char *k : {"abbreviations_source", "abbreviations_target", "stopwords_target",
                        "synonyms_target"}) {
    j["textproc"][k] = file_digest(j["textproc"][k].get<std::string>());
  }
  j["aligner"]["lexicon"] = file_digest(aligner_lexicon);
  j["translator"]["lexicon"] = file_digest(engine.lexicon);
  j["translator"]["memory"] = file_digest(engine.memory);
  return io::sha256_hex(j.dump());
}

void MiningReport::compute_totals() {
  totals = MiningRow{};
  totals.doc_id = "total";
  totals.per_tier.assign(tier_names.size(), 0);
  for (const auto &r : rows) {
    totals.src_sents += r.src_sents;
    totals.tgt_sents += r.tgt_sents;
    totals.aligned += r.aligned;
    totals.accepted += r.accepted;
    totals.rejected += r.rejected;
    for (std::size_t t = 0; t < totals.per_tier.size() && t < r.per_tier.size(); ++t) {
      totals.per_tier[t] += r.per_tier[t];
    }
  }
}

void MiningReport::check() const {
  MiningRow sum;
  sum.per_tier.assign(tier_names.size(), 0);
  for (const auto &r : rows) {
    if (r.accepted + r.rejected != r.aligned || r.per_tier.size() != tier_names.size()) {
      throw Error(ErrorKind::kStage, "report row " + r.doc_id + " is inconsistent");
    }
    std::size_t tier_sum = 0;
    for (std::size_t t = 0; t < r.per_tier.size(); ++t) {
      sum.per_tier[t] += r.per_tier[t];
      tier_sum += r.per_tier[t];
    }
    if (tier_sum != r.accepted) {
      throw Error(ErrorKind::kStage, "report row " + r.doc_id + ": tier tallies do not sum");
    }
    sum.src_sents += r.src_sents;
    sum.tgt_sents += r.tgt_sents;
    sum.aligned += r.aligned;
    sum.accepted += r.accepted;
    sum.rejected += r.rejected;
  }
  if (sum.src_sents != totals.src_sents || sum.tgt_sents != totals.tgt_sents ||
      sum.aligned != totals.aligned || sum.accepted != totals.accepted ||
      sum.rejected != totals.rejected || sum.per_tier != totals.per_tier) {
    throw Error(ErrorKind::kStage, "report totals differ from the column sums");
  }
}

std::string MiningReport::to_json() const {
  auto row_json = [&](const MiningRow &r) {
    ordered_json j;
    j["doc_id"] = r.doc_id;
    j["src_sents"] = r.src_sents;
    j["tgt_sents"] = r.tgt_sents;
    j["aligned"] = r.aligned;
    j["accepted"] = r.accepted;
    j["rejected"] = r.rejected;
    ordered_json tiers = ordered_json::object();
    for (std::size_t t = 0; t < tier_names.size(); ++t) {
      tiers["tier" + std::to_string(t + 1)] = t < r.per_tier.size() ? r.per_tier[t] : 0;
    }
    j["tiers"] = tiers;
    return j;
  };
  ordered_json j;
  j["config_hash"] = config_hash;
  j["tier_names"] = tier_names;
  j["rows"] = ordered_json::array();
  for (const auto &r : rows) j["rows"].push_back(row_json(r));
  j["totals"] = row_json(totals);
  return j.dump(2) + "\n";
}

std::string MiningReport::to_tsv() const {
  std::string out = "doc_id\tsrc_sents\ttgt_sents\taligned\taccepted\trejected";
  for (std::size_t t = 0; t < tier_names.size(); ++t) out += "\ttier" + std::to_string(t + 1);
  out += '\n';
  auto add = [&](const MiningRow &r) {
    out += r.doc_id + '\t' + std::to_string(r.src_sents) + '\t' + std::to_string(r.tgt_sents) +
           '\t' + std::to_string(r.aligned) + '\t' + std::to_string(r.accepted) + '\t' +
           std::to_string(r.rejected);
    for (std::size_t t = 0; t < tier_names.size(); ++t) {
      out += '\t' + std::to_string(t < r.per_tier.size() ? r.per_tier[t] : 0);
    }
    out += '\n';
  };
  for (const auto &r : rows) add(r);
  add(totals);
  return out;
}

std::unique_ptr<TranslationEngine> make_engine(const EngineConfig &cfg) {
  auto gloss = [&] {
    return std::make_unique<GlossEngine>(cfg.lexicon.empty() ? Lexicon{}
                                                             : Lexicon::load(cfg.lexicon));
  };
  if (cfg.kind == "gloss") return gloss();
  if (cfg.kind == "memory") {
    std::unique_ptr<TranslationEngine> fallback;
    if (cfg.gloss_fallback) fallback = gloss();
    return std::make_unique<MemoryEngine>(MemoryEngine::load_memory(cfg.memory),
                                          std::move(fallback));
  }
  if (cfg.kind == "external") return std::make_unique<ExternalCommandEngine>(cfg.command);
  throw Error(ErrorKind::kConfig, "unknown engine '" + cfg.kind + "'");
}

std::string format_accepted_tsv(const FilterResult &result,
                                std::span<const std::string> src_lines,
                                std::span<const std::string> tgt_lines,
                                std::span<const FilterTier> tiers) {
  std::string out;
  for (const auto &p : result.pairs) {
    out += src_lines[p.src_index] + '\t' + tgt_lines[p.tgt_index] + '\t' + fmt6(p.score) +
           '\t' + comparator_name(tiers[p.tier].comparator) + '\n';
  }
  return out;
}

std::string format_filter_report(const FilterReport &report,
                                 std::span<const FilterTier> tiers) {
  ordered_json j;
  j["candidates_in"] = report.candidates_in;
  j["accepted"] = report.accepted;
  j["rejected"] = report.rejected;
  j["per_tier"] = ordered_json::array();
  for (std::size_t t = 0; t < tiers.size(); ++t) {
    j["per_tier"].push_back({{"comparator", comparator_name(tiers[t].comparator)},
                             {"threshold", tiers[t].threshold},
                             {"accepted", t < report.per_tier.size() ? report.per_tier[t] : 0}});
  }
  return j.dump(2) + "\n";
}

MiningReport run_pipeline(const PipelineConfig &config, const RunOptions &opts) {
  config.validate();
  const auto hash = config.hash();
  fs::create_directories(config.out_dir);
  auto res = load_resources(config);
  if (config.enabled(Stage::kCrawl)) stage_crawl(config, hash, opts);
  if (config.enabled(Stage::kClean)) stage_clean(config, hash, opts);
  if (config.enabled(Stage::kAlign)) stage_align(config, res, hash, opts);
  if (config.enabled(Stage::kTranslate)) stage_translate(config, hash, opts);
  if (config.enabled(Stage::kFilter)) stage_filter(config, res, hash, opts);
  return assemble(config, hash);
}

BootstrapResult iterate_bootstrap(const PipelineConfig &config, std::size_t rounds,
                                  const RunOptions &opts) {
  if (rounds == 0) throw Error(ErrorKind::kInvalidArgument, "rounds must be at least 1");
  config.validate();
  BootstrapResult out;
  const auto cache_dir = config.cache_dir.empty() ? config.out_dir / "cache" : config.cache_dir;
  const auto base_gloss = config.engine.lexicon;

  PipelineConfig round_cfg = config;
  round_cfg.cache_dir = cache_dir;
  std::vector<std::string> acc_src, acc_tgt;
  fs::path last_dir, docs_from;
  for (std::size_t r = 1; r <= rounds; ++r) {
    round_cfg.out_dir = config.out_dir / ("round-" + std::to_string(r));
    if (r > 1) {
      // Learn from every pair accepted so far, each taken as a 1-1 link.
      std::vector<Sentence> src, tgt;
      SentenceAlignment links;
      for (std::size_t k = 0; k < acc_src.size(); ++k) {
        src.push_back(Sentence::from_text(acc_src[k]));
        tgt.push_back(Sentence::from_text(acc_tgt[k]));
        links.links.push_back({{k, 1}, {k, 1}, LinkCategory::k1_1, 0.0});
      }
      auto learned = build_auto_lexicon(src, tgt, links, config.aligner.min_count,
                                        config.aligner.lexicon_floor);
      const auto lex_dir = round_cfg.out_dir / "lexicon";
      Lexicon aligner_lex =
          config.aligner_lexicon.empty() ? Lexicon{} : Lexicon::load(config.aligner_lexicon);
      aligner_lex.merge_max(learned);
      io::write_file(lex_dir / "aligner.tsv", aligner_lex.to_tsv());
      round_cfg.aligner_lexicon = lex_dir / "aligner.tsv";
      // Learned entries only fill in source words the gloss lexicon lacks.
      const bool uses_gloss = config.engine.kind == "gloss" ||
                              (config.engine.kind == "memory" && config.engine.gloss_fallback);
      if (uses_gloss) {
        Lexicon gloss = base_gloss.empty() ? Lexicon{} : Lexicon::load(base_gloss);
        std::set<std::string> known;
        for (const auto &[key, score] : gloss.entries()) known.insert(key.first);
        for (const auto &[key, score] : learned.entries()) {
          if (!known.count(key.first)) gloss.add(key.first, key.second, score);
        }
        io::write_file(lex_dir / "gloss.tsv", gloss.to_tsv());
        round_cfg.engine.lexicon = lex_dir / "gloss.tsv";
      }
      round_cfg.stages[static_cast<std::size_t>(Stage::kCrawl)] = false;
      round_cfg.stages[static_cast<std::size_t>(Stage::kClean)] = false;
      round_cfg.docs_dir = docs_from;
    }
    log_line(opts, "bootstrap: round " + std::to_string(r));
    auto report = run_pipeline(round_cfg, opts);
    last_dir = round_cfg.out_dir;
    if (r == 1) docs_from = round_cfg.stage_dir(Stage::kClean);
    out.rounds.push_back(report);
    acc_src = io::read_lines(last_dir / ("corpus." + config.source_lang.str()));
    acc_tgt = io::read_lines(last_dir / ("corpus." + config.target_lang.str()));
    if (report.totals.accepted == 0) {
      log_line(opts, "bootstrap: warning: round " + std::to_string(r) +
                         " accepted no pairs, stopping");
      out.stopped_early = r < rounds;
      break;
    }
  }

  for (const auto &name : {"corpus." + config.source_lang.str(),
                           "corpus." + config.target_lang.str(), std::string("mining_report.json"),
                           std::string("mining_report.tsv")}) {
    io::write_file(config.out_dir / name, io::read_file(last_dir / name));
  }
  ordered_json j;
  j["rounds"] = ordered_json::array();
  for (std::size_t r = 0; r < out.rounds.size(); ++r) {
    const auto &t = out.rounds[r].totals;
    j["rounds"].push_back({{"round", r + 1},
                           {"aligned", t.aligned},
                           {"accepted", t.accepted},
                           {"rejected", t.rejected}});
  }
  j["stopped_early"] = out.stopped_early;
  io::write_file(config.out_dir / "bootstrap_report.json", j.dump(2) + "\n");
  return out;
}

}  // namespace bitext
