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

#include <doctest.h>

#include <json.hpp>

#include "bitext/error.hpp"
#include "bitext/io.hpp"
#include "bitext/pipeline.hpp"
#include "test_util.hpp"

using namespace bitext;
using testutil::fixture;
namespace fs = std::filesystem;

namespace {

PipelineConfig synthetic(const fs::path &out) {
  auto c = PipelineConfig::load(fixture("synthetic/pipeline.json"));
  c.out_dir = out;
  return c;
}

std::string slurp(const fs::path &p) { return io::read_file(p); }

}  // namespace

TEST_CASE("config parsing reports the offending key") {
  const fs::path base = fixture("synthetic");
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json(R"({"bogus": 1})", base),
                       doctest::Contains("bogus"), Error);
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json(R"({"aligner": {"variance": "x"}})", base),
                       doctest::Contains("aligner.variance"), Error);
  CHECK_THROWS_WITH_AS(PipelineConfig::from_json(R"({"filter": {"window": -3}})", base),
                       doctest::Contains("filter.window"), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json("{not json", base), Error);
  CHECK_THROWS_AS(PipelineConfig::load(fixture("synthetic/missing.json")), Error);
}

TEST_CASE("shipped schema covers every config key") {
  auto schema = nlohmann::json::parse(slurp(testutil::source_dir() / "config" / "pipeline.schema.json"));
  const auto &props = schema.at("properties");
  auto written = nlohmann::json::parse(synthetic("out").to_json());
  for (const auto &[key, value] : written.items()) {
    INFO(key);
    REQUIRE(props.contains(key));
    if (!value.is_object()) continue;
    for (const auto &[sub, _] : value.items()) {
      INFO(sub);
      CHECK(props.at(key).at("properties").contains(sub));
    }
  }
  CHECK(props.at("filter").at("properties").contains("tiers_file"));

  CHECK_NOTHROW(PipelineConfig::load(testutil::source_dir() / "config" / "wikipedia.example.json"));
}

TEST_CASE("config validation") {
  auto c = PipelineConfig::load(fixture("synthetic/pipeline.json"));
  CHECK_NOTHROW(c.validate());
  auto same_lang = c;
  same_lang.target_lang = same_lang.source_lang;
  CHECK_THROWS_AS(same_lang.validate(), Error);
  auto bad_seed = c;
  bad_seed.crawl_seed.clear();
  CHECK_THROWS_WITH_AS(bad_seed.validate(), doctest::Contains("crawl.seed"), Error);
  auto missing = c;
  missing.engine.lexicon = fixture("synthetic/nope.tsv");
  CHECK_THROWS_AS(missing.validate(), Error);
}

TEST_CASE("config hash ignores output location and parallelism") {
  auto a = PipelineConfig::load(fixture("synthetic/pipeline.json"));
  auto b = a;
  b.out_dir = "/tmp/elsewhere";
  b.jobs = 8;
  CHECK(a.hash() == b.hash());
  b.tiers[0].threshold = 0.8;
  CHECK(a.hash() != b.hash());
  auto round = PipelineConfig::from_json(a.to_json(), "/");
  CHECK(round.hash() == a.hash());
}

TEST_CASE("pipeline writes every stage and a consistent report") {
  testutil::TempDir tmp;
  auto c = synthetic(tmp / "out");
  auto report = run_pipeline(c);
  CHECK_NOTHROW(report.check());
  CHECK(report.rows.size() == 20);
  CHECK(report.totals.src_sents == 376);
  CHECK(report.totals.tgt_sents == 306);
  for (const char *f : {"corpus.pl", "corpus.en", "mining_report.json", "mining_report.tsv"}) {
    CHECK(fs::exists(tmp / ("out/" + std::string(f))));
  }
  for (const char *d : {"raw", "docs", "align", "translate", "filter"}) {
    CHECK(fs::exists(tmp / ("out/" + std::string(d) + "/stage.json")));
  }
  auto pl = io::read_lines(tmp / "out/corpus.pl");
  auto en = io::read_lines(tmp / "out/corpus.en");
  CHECK(pl.size() == en.size());
  CHECK(pl.size() == report.totals.accepted);
  auto tsv = io::read_lines(tmp / "out/mining_report.tsv");
  CHECK(tsv.front() == "doc_id\tsrc_sents\ttgt_sents\taligned\taccepted\trejected\ttier1\ttier2\ttier3");
  CHECK(tsv.back().rfind("total\t", 0) == 0);
}

TEST_CASE("parallel runs produce the same bytes") {
  testutil::TempDir tmp;
  auto c1 = synthetic(tmp / "a");
  auto c4 = synthetic(tmp / "b");
  c4.jobs = 4;
  run_pipeline(c1);
  run_pipeline(c4);
  for (const char *f : {"corpus.pl", "corpus.en", "mining_report.json", "mining_report.tsv"}) {
    CHECK(slurp(tmp / ("a/" + std::string(f))) == slurp(tmp / ("b/" + std::string(f))));
  }
}

TEST_CASE("disabled stages reuse artifacts and refuse missing ones") {
  testutil::TempDir tmp;
  auto c = synthetic(tmp / "out");
  auto full = run_pipeline(c);

  auto rerun = c;
  rerun.stages = {false, false, false, true, true};
  auto again = run_pipeline(rerun);
  CHECK(again.to_json() == full.to_json());

  auto fresh = synthetic(tmp / "fresh");
  fresh.stages = {false, false, true, true, true};
  CHECK_THROWS_AS(run_pipeline(fresh), Error);
}

TEST_CASE("pipeline refuses to clear foreign directories") {
  testutil::TempDir tmp;
  io::write_file(tmp / "out/align/precious.txt", "keep me");
  auto c = synthetic(tmp / "out");
  CHECK_THROWS_AS(run_pipeline(c), Error);
  CHECK(fs::exists(tmp / "out/align/precious.txt"));
}

TEST_CASE("an empty corpus gives empty outputs") {
  testutil::TempDir tmp;
  auto c = synthetic(tmp / "out");
  c.fixtures_dir = fixture("empty");
  c.crawl_seed = "fixture://pl/Pusta";
  auto report = run_pipeline(c);
  CHECK(report.rows.empty());
  CHECK(report.totals.accepted == 0);
  CHECK(slurp(tmp / "out/corpus.pl").empty());
  CHECK(slurp(tmp / "out/corpus.en").empty());
}

TEST_CASE("stage failures name the stage and document") {
  testutil::TempDir tmp;
  auto c = synthetic(tmp / "out");
  c.engine.kind = "external";
  c.engine.command = "exit 4";
  try {
    run_pipeline(c);
    FAIL("expected a stage error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kStage);
    CHECK(std::string(e.what()).find("translate") != std::string::npos);
    CHECK(std::string(e.what()).find("0001-") != std::string::npos);
  }
}

TEST_CASE("bootstrap rounds feed learned lexicons forward") {
  testutil::TempDir tmp;
  auto c = synthetic(tmp / "out");
  auto result = iterate_bootstrap(c, 2);
  REQUIRE(result.rounds.size() == 2);
  CHECK_FALSE(result.stopped_early);
  CHECK(fs::exists(tmp / "out/round-2/lexicon/aligner.tsv"));
  CHECK(fs::exists(tmp / "out/bootstrap_report.json"));
  CHECK(result.rounds[1].totals.accepted >= result.rounds[0].totals.accepted * 9 / 10);
  CHECK(slurp(tmp / "out/corpus.pl") == slurp(tmp / "out/round-2/corpus.pl"));
  CHECK_THROWS_AS(iterate_bootstrap(c, 0), Error);
}
