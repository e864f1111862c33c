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

#include <algorithm>
#include <numeric>
#include <random>

#include "bitext/error.hpp"
#include "bitext/filter.hpp"
#include "bitext/utf8.hpp"
#include "oracles.hpp"

using namespace bitext;

namespace {

const char *kLong = "The common theme what makes it origami is folding is how we create the form";

double ratio(const std::string &a, const std::string &b) { return ratio_similarity(a, b); }

std::vector<FilterTier> identity_tiers() {
  return {{Comparator::kNormalizedOverlap, 0.9}, {Comparator::kRatio, 0.9}};
}

}  // namespace

TEST_CASE("overlap similarities") {
  Tokens a{"it", "is", "origami"};
  Tokens b = tokenize(kLong);
  REQUIRE(b.size() == 15);
  // The quoted sentence has 15 tokens ("is" twice), so 2*3 / (3+15).
  CHECK(overlap_similarity(a, b) == doctest::Approx(6.0 / 18.0));
  CHECK(overlap_similarity(a, Tokens{"this", "is", "origami"}) == doctest::Approx(4.0 / 6.0));
  CHECK(overlap_similarity(a, a) == 1.0);
  CHECK(raw_overlap_similarity(a, b) == 1.0);
  CHECK(overlap_similarity(Tokens{}, Tokens{}) == 1.0);
  CHECK(overlap_similarity(Tokens{"a"}, Tokens{}) == 0.0);
}

TEST_CASE("ratio similarity examples") {
  CHECK(ratio("abxcd", "abcd") == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK(ratio("boys", "boy") == doctest::Approx(6.0 / 7.0));
  CHECK(ratio("", "abc") == 0.0);
  CHECK(ratio("", "") == 1.0);
  CHECK(ratio("żółw", "żółw") == 1.0);
  auto blocks = matching_blocks(U"abxcd", U"abcd");
  CHECK(blocks == std::vector<MatchingBlock>{{0, 0, 2}, {3, 2, 2}});
}

TEST_CASE("ratio matches the brute-force oracle") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> len(0, 12), ch(0, 2);
  for (int trial = 0; trial < 3000; ++trial) {
    std::u32string a, b;
    for (int k = len(rng); k > 0; --k) a.push_back(U'a' + ch(rng));
    for (int k = len(rng); k > 0; --k) b.push_back(U'a' + ch(rng));
    REQUIRE(ratio_similarity(a, b) == oracle::ratcliff_ratio(a, b));
    const double r = ratio_similarity(a, b);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    CHECK((r == 1.0) == (a == b));
  }
}

TEST_CASE("synonym similarity") {
  SynonymLexicon lex;
  lex.add("will", "would");
  Tokens a{"i", "will", "call", "you", "tomorrow"};
  Tokens b{"i", "would", "call", "you", "tomorrow"};
  CHECK(synonym_similarity(a, b, lex, 64) == 1.0);
  CHECK(synonym_similarity(a, b, SynonymLexicon(), 64) ==
        ratio_similarity(join_tokens(a), join_tokens(b)));
  SynonymLexicon cd;
  cd.add("cat", "dog");
  CHECK(synonym_similarity(Tokens{"cat"}, Tokens{"dog"}, cd, 64) == 1.0);

  std::mt19937 rng(2);
  const char *words[] = {"will", "would", "call", "big", "large", "you"};
  lex.add("big", "large");
  for (int trial = 0; trial < 200; ++trial) {
    Tokens x, y;
    for (int k = 0; k < 4; ++k) x.push_back(words[rng() % 6]);
    for (int k = 0; k < 4; ++k) y.push_back(words[rng() % 6]);
    CHECK(synonym_similarity(x, y, lex, 64) >= ratio_similarity(join_tokens(x), join_tokens(y)));
  }
}

TEST_CASE("tier files") {
  auto tiers = parse_tiers("# comment\nnormalized_overlap 0.7\n\nratio 0.6\nsynonym_ratio 0.6\n");
  REQUIRE(tiers.size() == 3);
  CHECK(tiers[1].comparator == Comparator::kRatio);
  CHECK(format_tiers(tiers) == format_tiers(default_tiers()));
  CHECK_THROWS_WITH_AS(parse_tiers("ratio 0.5\nbogus 0.5\n"), doctest::Contains("line 2"), Error);
  CHECK_THROWS_AS(parse_tiers("ratio 1.5\n"), Error);
  CHECK_THROWS_AS(parse_tiers("ratio\n"), Error);
  CHECK_THROWS_AS(parse_tiers(""), Error);
}

TEST_CASE("match_best_candidate follows the ladder") {
  std::vector<FilterTier> tiers = {{Comparator::kNormalizedOverlap, 0.9}};
  std::vector<std::string> lines = {"Something else entirely.", "This is origami."};
  std::vector<Candidate> cands = {{0, lines[0]}, {1, lines[1]}};
  auto d = match_best_candidate(0, "This is origami.", cands, tiers, {});
  REQUIRE(d.tgt_index.has_value());
  CHECK(*d.tgt_index == 1);
  CHECK(d.score == 1.0);
  CHECK(d.tier_name(tiers) == "normalized_overlap");

  // The origami scenario: the long sentence contains every word but the
  // normalized score prefers the short one.
  std::vector<std::string> origami = {kLong, "This is origami."};
  std::vector<Candidate> oc = {{0, origami[0]}, {1, origami[1]}};
  std::vector<FilterTier> loose = {{Comparator::kNormalizedOverlap, 0.3}};
  auto o = match_best_candidate(0, "It is origami.", oc, loose, {});
  REQUIRE(o.tgt_index.has_value());
  CHECK(*o.tgt_index == 1);

  auto none = match_best_candidate(0, "Zupełnie inne zdanie.", cands, tiers, {});
  CHECK_FALSE(none.tgt_index.has_value());
  CHECK(none.tier_name(tiers) == "none");
}

TEST_CASE("unbounded filter recovers a permutation") {
  std::vector<std::string> trans;
  for (int k = 0; k < 12; ++k) {
    trans.push_back("line number " + std::to_string(k) + " about topic " + std::string(1, 'a' + k));
  }
  std::vector<std::size_t> perm(trans.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(9);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> tgt(trans.size());
  for (std::size_t k = 0; k < perm.size(); ++k) tgt[perm[k]] = trans[k];
  auto tiers = identity_tiers();
  auto r = filter_corpus(trans, trans, tgt, tiers, WindowPolicy::unbounded(), {});
  REQUIRE(r.pairs.size() == trans.size());
  for (const auto &p : r.pairs) CHECK(p.tgt_index == perm[p.src_index]);
  CHECK(r.report.accepted == trans.size());
  CHECK(r.report.rejected == 0);
}

TEST_CASE("disjoint documents accept nothing") {
  std::vector<std::string> a = {"alpha beta gamma", "delta epsilon"};
  std::vector<std::string> b = {"zzz yyy xxx", "www vvv"};
  auto tiers = default_tiers();
  auto r = filter_corpus(a, a, b, tiers, WindowPolicy::unbounded(), {});
  CHECK(r.pairs.empty());
  CHECK(r.report.rejected == 2);
}

TEST_CASE("planted pairs with noise lines") {
  std::vector<std::string> src, tgt;
  std::vector<std::pair<std::size_t, std::size_t>> truth;
  const char *topics[] = {"castle", "river", "bridge", "forest", "harbour",
                          "market", "tower", "garden", "library", "museum"};
  for (int k = 0; k < 10; ++k) {
    std::string s = std::string("the old ") + topics[k] + " was rebuilt in year " + std::to_string(1500 + k * 37);
    truth.emplace_back(src.size(), 0);
    src.push_back(s);
    if (k % 2 == 0) src.push_back("noise qqq " + std::to_string(k) + " zzz www kkk");
  }
  std::vector<std::size_t> order = {3, 0, 1, 2, 5, 4, 6, 9, 8, 7};
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k % 2 == 1) tgt.push_back("filler jjj " + std::to_string(k) + " vvv ppp ttt");
    truth[order[k]].second = tgt.size();
    tgt.push_back(src[truth[order[k]].first]);
  }
  auto tiers = default_tiers();
  auto r = filter_corpus(src, src, tgt, tiers, WindowPolicy::unbounded(), {});
  std::vector<std::pair<std::size_t, std::size_t>> got;
  for (const auto &p : r.pairs) got.emplace_back(p.src_index, p.tgt_index);
  std::sort(truth.begin(), truth.end());
  CHECK(got == truth);
}

TEST_CASE("each target line is claimed once") {
  std::vector<std::string> src = {"same words here", "same words here too", "same words"};
  std::vector<std::string> tgt = {"same words here"};
  std::vector<FilterTier> tiers = {{Comparator::kRatio, 0.5}};
  auto r = filter_corpus(src, src, tgt, tiers, WindowPolicy::unbounded(), {});
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.pairs[0].src_index == 0);
}

TEST_CASE("bounded window limits candidates") {
  std::vector<std::string> src = {"a b c d", "e f g h", "i j k l", "m n o p"};
  std::vector<std::string> tgt = {"m n o p", "x", "y", "a b c d"};
  std::vector<FilterTier> tiers = {{Comparator::kNormalizedOverlap, 0.9}};
  auto wide = filter_corpus(src, src, tgt, tiers, WindowPolicy::unbounded(), {});
  CHECK(wide.pairs.size() == 2);
  std::vector<std::size_t> diag = {0, 1, 2, 3};
  auto narrow = filter_corpus(src, src, tgt, tiers, WindowPolicy::bounded(1), {}, diag);
  CHECK(narrow.pairs.empty());
}

TEST_CASE("filter input errors") {
  std::vector<std::string> a = {"x"}, b = {"x", "y"};
  auto tiers = default_tiers();
  CHECK_THROWS_AS(filter_corpus(a, b, a, tiers, WindowPolicy::unbounded(), {}), Error);
  std::vector<FilterTier> none;
  CHECK_THROWS_AS(filter_corpus(a, a, a, none, WindowPolicy::unbounded(), {}), Error);
}

TEST_CASE("stopword-only lines do not match everything") {
  StopwordSet stops(LangCode("en"), {"the", "a", "is"});
  FilterResources res;
  res.stops = &stops;
  std::vector<std::string> src = {"the a is"};
  std::vector<std::string> tgt = {"the", "is a"};
  std::vector<FilterTier> tiers = {{Comparator::kNormalizedOverlap, 0.9}};
  auto r = filter_corpus(src, src, tgt, tiers, WindowPolicy::unbounded(), res);
  CHECK(r.pairs.empty());
}

TEST_CASE("filter output is deterministic and a valid matching") {
  std::mt19937 rng(4);
  const char *vocab[] = {"a", "b", "c", "d", "e", "f", "g"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> src, tgt;
    for (int k = 0; k < 15; ++k) {
      std::string s, t;
      for (int w = 0; w < 4; ++w) s += std::string(vocab[rng() % 7]) + " ";
      for (int w = 0; w < 4; ++w) t += std::string(vocab[rng() % 7]) + " ";
      src.push_back(s);
      tgt.push_back(t);
    }
    auto tiers = default_tiers();
    auto r1 = filter_corpus(src, src, tgt, tiers, WindowPolicy::unbounded(), {});
    auto r2 = filter_corpus(src, src, tgt, tiers, WindowPolicy::unbounded(), {});
    REQUIRE(r1.pairs.size() == r2.pairs.size());
    std::set<std::size_t> used;
    for (std::size_t k = 0; k < r1.pairs.size(); ++k) {
      CHECK(r1.pairs[k].tgt_index == r2.pairs[k].tgt_index);
      CHECK(used.insert(r1.pairs[k].tgt_index).second);
      CHECK(r1.pairs[k].score >= 0.0);
      CHECK(r1.pairs[k].score <= 1.0);
    }
    std::size_t tally = 0;
    for (auto n : r1.report.per_tier) tally += n;
    CHECK(tally == r1.report.accepted);
    CHECK(r1.report.accepted + r1.report.rejected == r1.report.candidates_in);
  }
}
