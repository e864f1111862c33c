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

#include <cmath>
#include <random>

#include "bitext/error.hpp"
#include "bitext/io.hpp"
#include "bitext/metrics.hpp"
#include "test_util.hpp"

using namespace bitext;

namespace {

EvalPair pair(const std::string &cand, std::initializer_list<std::string> refs) {
  EvalPair p;
  p.candidate = tokenize(cand);
  for (const auto &r : refs) p.references.push_back(tokenize(r));
  return p;
}

}  // namespace

TEST_CASE("clipped unigram precision") {
  std::vector<EvalPair> c = {pair("the the the the", {"the cat"})};
  CHECK(ngram_precision(c, 1).value() == 0.25);
  CHECK(ngram_precision(c, 1, false).value() == 1.0);
}

TEST_CASE("bleu identities") {
  std::vector<EvalPair> same = {pair("a b c d e", {"a b c d e"}), pair("x y z w", {"x y z w"})};
  CHECK(bleu(same) == 1.0);
  std::vector<EvalPair> no4 = {pair("a b c d", {"a b c e"})};
  CHECK(bleu(no4) == 0.0);
  std::vector<EvalPair> disjoint = {pair("a b c d", {"e f g h"})};
  CHECK(bleu(disjoint) == 0.0);
}

TEST_CASE("bleu brevity penalty uses the closest reference length") {
  // 4-token candidate, references of 4 and 8 tokens: no penalty.
  std::vector<EvalPair> c = {pair("a b c d", {"a b c d", "a b c d e f g h"})};
  CHECK(bleu(c) == 1.0);
  // Only a 6-token reference: precision 1, BP = exp(1 - 6/4).
  std::vector<EvalPair> short_cand = {pair("a b c d", {"a b c d e f"})};
  CHECK(bleu(short_cand) == doctest::Approx(std::exp(1.0 - 6.0 / 4.0)));
}

TEST_CASE("nist examples") {
  std::vector<EvalPair> ab = {pair("a b", {"a b"})};
  CHECK(nist(ab) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<EvalPair> none = {pair("x y", {"a b"})};
  CHECK(nist(none) == 0.0);
  // "b" once among four reference unigrams: info = log2(4 / 1).
  std::vector<EvalPair> rare = {pair("a", {"a a a b"})};
  NistWeights w(rare);
  CHECK(w.info(Tokens{"b"}) == doctest::Approx(2.0));
}

TEST_CASE("meteor examples") {
  std::vector<EvalPair> one = {pair("hello", {"hello"})};
  CHECK(meteor(one) == doctest::Approx(0.5).epsilon(1e-12));
  std::vector<EvalPair> four = {pair("a b c d", {"a b c d"})};
  CHECK(meteor(four) == doctest::Approx(1.0 - 0.5 / 64.0).epsilon(1e-12));
  std::vector<EvalPair> zero = {pair("a b", {"c d"})};
  CHECK(meteor(zero) == 0.0);

  auto st = meteor_align(Tokens{"a", "b", "x", "c", "d"}, Tokens{"c", "d", "a", "b"});
  CHECK(st.matches == 4);
  CHECK(st.chunks == 2);
}

TEST_CASE("meteor identity matches the closed form per segment") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Tokens t;
    const std::size_t m = 1 + rng() % 12;
    for (std::size_t k = 0; k < m; ++k) t.push_back("w" + std::to_string(k));
    std::vector<EvalPair> c = {EvalPair{t, {t}}};
    const double md = static_cast<double>(m);
    CHECK(meteor(c) == doctest::Approx(1.0 - 0.5 / (md * md * md)).epsilon(1e-12));
  }
}

TEST_CASE("ter examples") {
  std::vector<EvalPair> same = {pair("a b c", {"a b c"})};
  CHECK(ter(same) == 0.0);
  std::vector<EvalPair> sub = {pair("a x c", {"a b c"})};
  CHECK(ter(sub) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  std::vector<EvalPair> shift = {pair("c a b", {"a b c"})};
  CHECK(ter(shift) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  auto st = ter_segment(tokenize("c a b"), tokenize("a b c"));
  CHECK(st.shifts == 1);
  CHECK(st.edits == 1);
}

TEST_CASE("ter picks the closest reference and never exceeds plain edit distance") {
  std::vector<EvalPair> two = {pair("a b c d", {"x y z", "a b c e"})};
  CHECK(ter(two) == doctest::Approx(0.25));

  std::mt19937 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    Tokens a, b;
    for (int k = rng() % 8; k > 0; --k) a.push_back(std::string(1, 'a' + rng() % 4));
    for (int k = 1 + rng() % 8; k > 0; --k) b.push_back(std::string(1, 'a' + rng() % 4));
    auto st = ter_segment(a, b);
    CHECK(st.edits <= word_edit_distance(a, b));
    CHECK(st.ref_len == b.size());
  }
}

TEST_CASE("metric ranges") {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EvalPair> c;
    for (int s = 0; s < 3; ++s) {
      EvalPair p;
      for (int k = 1 + rng() % 6; k > 0; --k) p.candidate.push_back(std::string(1, 'a' + rng() % 5));
      Tokens r;
      for (int k = 1 + rng() % 6; k > 0; --k) r.push_back(std::string(1, 'a' + rng() % 5));
      p.references.push_back(r);
      c.push_back(p);
    }
    auto rep = evaluate(c);
    CHECK(rep.bleu >= 0.0);
    CHECK(rep.bleu <= 1.0);
    CHECK(rep.meteor >= 0.0);
    CHECK(rep.meteor <= 1.0);
    CHECK(rep.ter >= 0.0);
    CHECK(rep.nist >= 0.0);
  }
}

TEST_CASE("metric input errors") {
  std::vector<EvalPair> empty;
  CHECK_THROWS_AS(bleu(empty), Error);
  std::vector<EvalPair> no_ref = {EvalPair{{"a"}, {}}};
  CHECK_THROWS_AS(ter(no_ref), Error);
}

TEST_CASE("evaluation corpus loading") {
  testutil::TempDir tmp;
  io::write_file(tmp / "cand.txt", "It is origami.\nHello there, how are you today\n");
  io::write_file(tmp / "ref1.txt", "It is origami.\nHello there, how are you today\n");
  io::write_file(tmp / "ref2.txt", "only one line\n");
  auto c = load_eval_corpus(tmp / "cand.txt", {tmp / "ref1.txt"});
  REQUIRE(c.size() == 2);
  CHECK(c[0].candidate == Tokens{"it", "is", "origami"});
  CHECK(evaluate(c).bleu == 1.0);
  CHECK_THROWS_AS(load_eval_corpus(tmp / "cand.txt", {tmp / "ref1.txt", tmp / "ref2.txt"}), Error);
  CHECK_THROWS_AS(load_eval_corpus(tmp / "missing.txt", {tmp / "ref1.txt"}), Error);

  auto json = evaluate(c).to_json(true);
  CHECK(json.find("\"bleu\": 100") != std::string::npos);
}
