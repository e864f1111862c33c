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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bitext/aligner.hpp"
#include "bitext/filter.hpp"
#include "bitext/io.hpp"
#include "bitext/metrics.hpp"
#include "bitext/pipeline.hpp"
#include "bitext/translator.hpp"
#include "bitext/utf8.hpp"
#include "bitext/word_alignment.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bitext;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path fixture_config() { return testutil::fixture("synthetic/pipeline.json"); }

// 1. Ratio against the brute-force block oracle.
Outcome ratio_oracle() {
  auto t0 = Clock::now();
  std::mt19937 rng(20140601);
  std::uniform_int_distribution<int> len(0, 12), ch(0, 2);
  const int kPairs = 20000;
  int exact = 0;
  for (int k = 0; k < kPairs; ++k) {
    std::u32string a, b;
    for (int n = len(rng); n > 0; --n) a.push_back(U'a' + ch(rng));
    for (int n = len(rng); n > 0; --n) b.push_back(U'a' + ch(rng));
    if (ratio_similarity(a, b) == oracle::ratcliff_ratio(a, b)) ++exact;
  }
  const double secs = seconds_since(t0);
  return {exact == kPairs && secs < 30.0,
          std::to_string(exact) + "/" + std::to_string(kPairs) + " exact, " +
              fmt("%.2fs", secs)};
}

// 2. The worked ratio example.
Outcome ratio_example() {
  const double r = ratio_similarity("abxcd", "abcd");
  return {std::fabs(r - 8.0 / 9.0) <= 1e-12, fmt("ratio = %.15f", r)};
}

// 3. DP optimum against exhaustive enumeration.
Outcome dp_optimality() {
  auto t0 = Clock::now();
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> count(0, 6), len(1, 120);
  const AlignerParams params;
  int ok = 0, docs = 500;
  double worst_model_gap = 0.0;
  for (int d = 0; d < docs; ++d) {
    std::vector<Sentence> src, tgt;
    std::vector<int> ls, lt;
    for (int k = count(rng); k > 0; --k) ls.push_back(len(rng));
    for (int k = count(rng); k > 0; --k) lt.push_back(len(rng));
    for (int l : ls) src.push_back(Sentence::from_text(std::string(l, 's')));
    for (int l : lt) tgt.push_back(Sentence::from_text(std::string(l, 't')));
    const int n = static_cast<int>(ls.size()), m = static_cast<int>(lt.size());

    auto span_len = [](const std::vector<int> &v, int b, int size) {
      int s = 0;
      for (int k = b; k < b + size; ++k) s += v[k];
      return s;
    };
    double best = INFINITY, best_model = INFINITY;
    std::vector<oracle::EnumLink> best_path;
    oracle::enumerate_alignments(n, m, [&](const std::vector<oracle::EnumLink> &path) {
      double total = 0.0, model = 0.0;
      for (const auto &l : path) {
        auto [ds, dt] = oracle::kShapes[l.category];
        const int l1 = span_len(ls, l.src_begin, ds), l2 = span_len(lt, l.tgt_begin, dt);
        total += link_base_cost(static_cast<LinkCategory>(l.category), l1, l2, params);
        model += oracle::gale_church_cost(ds, dt, l1, l2, params.priors[l.category]);
      }
      if (total < best || (total == best && oracle::preferred(path, best_path))) {
        best = total;
        best_path = path;
      }
      best_model = std::min(best_model, model);
    });

    auto got = align_length_based(src, tgt, params);
    bool same = got.total_cost == best && got.links.size() == best_path.size();
    for (std::size_t k = 0; same && k < best_path.size(); ++k) {
      const auto &l = got.links[k];
      same = static_cast<int>(l.category) == best_path[k].category &&
             (l.src.empty() || static_cast<int>(l.src.begin) == best_path[k].src_begin) &&
             (l.tgt.empty() || static_cast<int>(l.tgt.begin) == best_path[k].tgt_begin);
    }
    const double gap = std::fabs(best_model - got.total_cost) / std::max(1.0, std::fabs(best_model));
    worst_model_gap = std::max(worst_model_gap, gap);
    if (same && gap <= 1e-12) ++ok;
  }
  const double secs = seconds_since(t0);
  return {ok == docs && secs < 60.0,
          std::to_string(ok) + "/" + std::to_string(docs) +
              " documents identical to enumeration, independent-model gap " +
              fmt("%.1e", worst_model_gap) + ", " + fmt("%.2fs", secs)};
}

// 4. Planted 1-1 links surviving five insertions per side. Target words
// are per-type translations whose length tracks the source word, so the
// length signal favours the planted 1-1 links.
Outcome alignment_recovery() {
  auto t0 = Clock::now();
  const int kDocs = 20, kPairs = 50, kInsertions = 5;
  int recovered = 0, worst = kPairs;
  for (int seed = 1; seed <= kDocs; ++seed) {
    std::mt19937 rng(seed);
    auto word = [&](int n) {
      std::string w;
      for (int k = 0; k < n; ++k) w.push_back(static_cast<char>('a' + rng() % 26));
      return w;
    };
    std::vector<std::string> vs, vt;
    for (int k = 0; k < 300; ++k) {
      const int n = 2 + static_cast<int>(rng() % 9);
      vs.push_back("s" + word(n));
      vt.push_back("t" + word(std::max(1, n + static_cast<int>(rng() % 3) - 1)));
    }
    std::uniform_real_distribution<double> loglen(std::log(3.0), std::log(41.0));
    auto length = [&] { return static_cast<int>(std::exp(loglen(rng))); };
    auto sentence = [&](const std::vector<std::string> &v, const std::vector<int> &ids) {
      std::string s;
      for (int id : ids) s += (s.empty() ? "" : " ") + v[id];
      return Sentence::from_text(s + ".");
    };
    auto random_ids = [&] {
      std::vector<int> ids(length());
      for (auto &x : ids) x = static_cast<int>(rng() % 300);
      return ids;
    };
    std::vector<int> ins_s, ins_t;
    for (int k = 0; k < kInsertions; ++k) {
      ins_s.push_back(static_cast<int>(rng() % kPairs));
      ins_t.push_back(static_cast<int>(rng() % kPairs));
    }
    std::vector<Sentence> src, tgt;
    std::vector<std::pair<std::size_t, std::size_t>> planted;
    for (int i = 0; i < kPairs; ++i) {
      for (int p : ins_s)
        if (p == i) src.push_back(sentence(vs, random_ids()));
      for (int p : ins_t)
        if (p == i) tgt.push_back(sentence(vt, random_ids()));
      auto ids = random_ids();
      planted.emplace_back(src.size(), tgt.size());
      src.push_back(sentence(vs, ids));
      tgt.push_back(sentence(vt, ids));
    }
    auto result = align_two_pass(src, tgt, nullptr);
    std::set<std::pair<std::size_t, std::size_t>> links;
    for (const auto &l : result.alignment.links) {
      if (l.category == LinkCategory::k1_1) links.emplace(l.src.begin, l.tgt.begin);
    }
    int here = 0;
    for (const auto &p : planted) here += static_cast<int>(links.count(p));
    recovered += here;
    worst = std::min(worst, here);
  }
  const double rate = static_cast<double>(recovered) / (kDocs * kPairs);
  const double per_doc = seconds_since(t0) / kDocs;
  return {rate >= 0.9 && per_doc < 5.0,
          fmt("%.3f", rate) + " of " + std::to_string(kDocs * kPairs) + " planted links over " +
              std::to_string(kDocs) + " documents (worst document " + std::to_string(worst) +
              "/50), " + fmt("%.2fs per document", per_doc)};
}

// 5. Crossing recovery through the memory engine and an unbounded window.
Outcome filter_crossing() {
  auto t0 = Clock::now();
  std::mt19937 rng(30);
  const char *nouns[] = {"castle", "river", "bridge", "forest", "harbour", "market",
                         "tower", "garden", "library", "museum", "abbey", "mill",
                         "chapel", "village", "island"};
  const char *verbs[] = {"was built", "was destroyed", "was painted", "was sold",
                         "was rebuilt", "was described"};
  std::vector<std::string> src, trans_ref;
  std::map<std::string, std::string> memory;
  for (int k = 0; k < 30; ++k) {
    const std::string noun = nouns[k % 15], verb = verbs[(k * 7) % 6];
    const std::string en = "The " + noun + " " + verb + " in " + std::to_string(1200 + 17 * k) +
                           (k >= 15 ? " by the northern council." : ".");
    const std::string pl = "Zdanie " + std::to_string(k) + " o " + noun + "ie.";
    src.push_back(pl);
    trans_ref.push_back(en);
    memory[pl] = en;
  }
  std::vector<std::size_t> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> tgt(30);
  for (std::size_t k = 0; k < 30; ++k) tgt[perm[k]] = trans_ref[k];

  MemoryEngine engine(memory, nullptr);
  auto trans = translate_lines(TranslationRequest{src, LangCode("pl"), LangCode("en")},
                               engine, nullptr);
  auto tiers = default_tiers();
  auto stops = StopwordSet::load(testutil::source_dir() / "data" / "stopwords.en", LangCode("en"));
  FilterResources res;
  res.stops = &stops;
  auto result = filter_corpus(src, trans.lines, tgt, tiers, WindowPolicy::unbounded(), res);
  int right = 0, wrong = 0;
  for (const auto &p : result.pairs) (p.tgt_index == perm[p.src_index] ? right : wrong)++;
  std::size_t crossings = 0;
  for (std::size_t a = 0; a < 30; ++a)
    for (std::size_t b = a + 1; b < 30; ++b) crossings += perm[a] > perm[b];
  const double secs = seconds_since(t0);
  return {right == 30 && wrong == 0 && secs < 10.0,
          std::to_string(right) + "/30 recovered, " + std::to_string(wrong) +
              " false accepts, " + std::to_string(crossings) + " crossing pairs, " +
              fmt("%.2fs", secs)};
}

struct FixtureScore {
  double precision = 0, recall = 0;
  std::size_t accepted = 0, correct = 0, planted = 0;
};

FixtureScore score_fixture(const fs::path &out) {
  std::set<std::pair<std::string, std::string>> truth;
  for (const auto &line : io::read_lines(testutil::fixture("synthetic/ground_truth.tsv"))) {
    auto f = io::split_tabs(line);
    if (f.size() == 2) truth.emplace(f[0], f[1]);
  }
  auto pl = io::read_lines(out / "corpus.pl");
  auto en = io::read_lines(out / "corpus.en");
  FixtureScore s;
  s.planted = truth.size();
  s.accepted = pl.size();
  for (std::size_t k = 0; k < pl.size() && k < en.size(); ++k) s.correct += truth.count({pl[k], en[k]});
  s.precision = s.accepted ? static_cast<double>(s.correct) / s.accepted : 0.0;
  s.recall = s.planted ? static_cast<double>(s.correct) / s.planted : 0.0;
  return s;
}

// 6. End-to-end precision and recall on the bundled fixture.
Outcome end_to_end(const fs::path &work) {
  auto t0 = Clock::now();
  auto cfg = PipelineConfig::load(fixture_config());
  cfg.out_dir = work / "e2e";
  auto report = run_pipeline(cfg);
  bool consistent = true;
  try {
    report.check();
  } catch (const std::exception &) {
    consistent = false;
  }
  auto counts = nlohmann::json::parse(io::read_file(testutil::fixture("synthetic/counts.json")));
  const bool rows_ok = report.rows.size() == counts["articles"].size() &&
                       report.totals.src_sents == counts["totals"]["src_sents"].get<std::size_t>() &&
                       report.totals.tgt_sents == counts["totals"]["tgt_sents"].get<std::size_t>();
  auto s = score_fixture(cfg.out_dir);
  const double secs = seconds_since(t0);
  return {s.precision >= 0.9 && s.recall >= 0.8 && consistent && rows_ok &&
              s.accepted == report.totals.accepted && secs < 60.0,
          "precision " + fmt("%.3f", s.precision) + " (" + std::to_string(s.correct) + "/" +
              std::to_string(s.accepted) + "), recall " + fmt("%.3f", s.recall) + " (" +
              std::to_string(s.correct) + "/" + std::to_string(s.planted) + "), " +
              std::to_string(report.rows.size()) + " rows, report " +
              (consistent && rows_ok ? "consistent" : "INCONSISTENT") + ", " + fmt("%.2fs", secs)};
}

EvalPair seg(const std::string &cand, const std::string &ref) {
  return EvalPair{tokenize(cand), {tokenize(ref)}};
}

// 7. Metric values computed by hand.
Outcome metric_values() {
  std::vector<std::pair<std::string, double>> got = {
      {"bleu-unigram", ngram_precision(std::vector{seg("the the the the", "the cat")}, 1).value()},
      {"nist", nist(std::vector{seg("a b", "a b")})},
      {"meteor-1", meteor(std::vector{seg("hello", "hello")})},
      {"meteor-4", meteor(std::vector{seg("a b c d", "a b c d")})},
      {"ter-sub", ter(std::vector{seg("a x c", "a b c")})},
      {"ter-shift", ter(std::vector{seg("c a b", "a b c")})},
  };
  const double want[] = {0.25, 1.0, 0.5, 0.9921875, 1.0 / 3.0, 1.0 / 3.0};
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < got.size(); ++k) {
    ok = ok && std::fabs(got[k].second - want[k]) <= 1e-9;
    detail += (k ? ", " : "") + got[k].first + "=" + fmt("%.10g", got[k].second);
  }
  return {ok, detail};
}

// 8. Metric identities.
Outcome metric_identities() {
  std::vector<EvalPair> same = {seg("the castle was built in the north", "the castle was built in the north"),
                                seg("it is origami", "it is origami"),
                                seg("a river runs through the old town today", "a river runs through the old town today")};
  std::vector<EvalPair> disjoint = {seg("a b c d e", "f g h i j"), seg("k l m n", "o p q r")};
  const double b1 = bleu(same), t0 = ter(same), b0 = bleu(disjoint), m0 = meteor(disjoint);
  return {b1 == 1.0 && t0 == 0.0 && b0 == 0.0 && m0 == 0.0,
          "identical: bleu=" + fmt("%g", b1) + " ter=" + fmt("%g", t0) +
              "; disjoint: bleu=" + fmt("%g", b0) + " meteor=" + fmt("%g", m0)};
}

// 9. Symmetrization bounds and idempotence.
Outcome gdfa_invariants() {
  auto t0 = Clock::now();
  std::mt19937 rng(9);
  int ok = 0;
  const int kCases = 10000;
  for (int c = 0; c < kCases; ++c) {
    const std::size_t n = 1 + rng() % 8, m = 1 + rng() % 8;
    WordAlignmentSet f, b;
    f.src_len = b.src_len = n;
    f.tgt_len = b.tgt_len = m;
    const unsigned density = 2 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (rng() % density == 0) f.points.insert({i, j});
        if (rng() % density == 0) b.points.insert({i, j});
      }
    }
    auto r = symmetrize_gdfa(f, b);
    bool good = true;
    for (const auto &p : f.points)
      if (b.points.count(p) && !r.points.count(p)) good = false;
    for (const auto &p : r.points)
      if (!f.points.count(p) && !b.points.count(p)) good = false;
    good = good && symmetrize_gdfa(f, f) == f;
    ok += good;
  }
  const double secs = seconds_since(t0);
  return {ok == kCases && secs < 30.0,
          std::to_string(ok) + "/" + std::to_string(kCases) + " cases, " + fmt("%.2fs", secs)};
}

// 10. Two CLI runs with the same config produce identical bytes.
Outcome determinism(const fs::path &work) {
  const fs::path runs[2] = {work / "det-a", work / "det-b"};
  for (const auto &dir : runs) {
    const std::string cmd = std::string("'") + BITEXT_CLI_PATH + "' --config '" +
                            fixture_config().string() + "' --out-dir '" + dir.string() +
                            "' pipeline > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
  }
  int same = 0, files = 0;
  std::string differing;
  for (const char *f : {"corpus.pl", "corpus.en", "mining_report.json", "mining_report.tsv"}) {
    ++files;
    if (io::read_file(runs[0] / f) == io::read_file(runs[1] / f)) {
      ++same;
    } else {
      differing += std::string(" ") + f;
    }
  }
  return {same == files, std::to_string(same) + "/" + std::to_string(files) +
                             " outputs byte-identical" + differing};
}

// 11. Raising a tier threshold never increases the accepted count.
Outcome threshold_monotonicity(const fs::path &work) {
  auto base = PipelineConfig::load(fixture_config());
  base.out_dir = work / "sweep";
  run_pipeline(base);
  auto filter_only = base;
  filter_only.stages = {false, false, false, false, true};
  bool ok = true;
  std::string detail;
  for (std::size_t t = 0; t < base.tiers.size(); ++t) {
    std::vector<std::size_t> counts;
    for (int step = 0; step < 5; ++step) {
      auto cfg = filter_only;
      cfg.tiers[t].threshold = std::round((base.tiers[t].threshold - 0.2 + 0.1 * step) * 10) / 10;
      counts.push_back(run_pipeline(cfg).totals.accepted);
    }
    for (std::size_t k = 1; k < counts.size(); ++k) ok = ok && counts[k] <= counts[k - 1];
    detail += (t ? "; " : "") + std::string(comparator_name(base.tiers[t].comparator)) + " " +
              fmt("%.1f", base.tiers[t].threshold - 0.2) + ".." +
              fmt("%.1f", base.tiers[t].threshold + 0.2) + ":";
    for (auto c : counts) detail += " " + std::to_string(c);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  testutil::TempDir work;
  struct Criterion {
    const char *name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"ratio equals brute-force oracle", ratio_oracle},
      {"abxcd vs abcd is 8/9", ratio_example},
      {"aligner DP equals exhaustive minimum", dp_optimality},
      {"planted 1-1 link recovery >= 90%", alignment_recovery},
      {"filter recovers a permuted target", filter_crossing},
      {"end-to-end fixture precision/recall", [&] { return end_to_end(work.path()); }},
      {"metric hand values", metric_values},
      {"metric identities", metric_identities},
      {"GDFA invariants", gdfa_invariants},
      {"pipeline determinism", [&] { return determinism(work.path()); }},
      {"threshold monotonicity", [&] { return threshold_monotonicity(work.path()); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu acceptance criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
