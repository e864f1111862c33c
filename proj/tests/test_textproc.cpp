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

#include <random>

#include "bitext/error.hpp"
#include "bitext/textproc.hpp"
#include "bitext/utf8.hpp"
#include "test_util.hpp"

using namespace bitext;

namespace {

std::vector<std::string> texts(const std::vector<Sentence> &s) {
  std::vector<std::string> out;
  for (const auto &x : s) out.push_back(x.text);
  return out;
}

}  // namespace

TEST_CASE("segment_sentences splits on terminal punctuation") {
  CHECK(segment_sentences("").empty());
  auto s = segment_sentences("It is origami. This is origami.");
  CHECK(texts(s) == std::vector<std::string>{"It is origami.", "This is origami."});
}

TEST_CASE("abbreviations do not end a sentence") {
  AbbreviationList abbrevs{"dr."};
  auto s = segment_sentences("Dr. Smith left. He ran.", abbrevs);
  CHECK(texts(s) == std::vector<std::string>{"Dr. Smith left.", "He ran."});
  // Without the list the abbreviation splits.
  CHECK(segment_sentences("Dr. Smith left. He ran.").size() == 3);
}

TEST_CASE("blank lines separate paragraphs and sentences") {
  auto s = segment_sentences("First paragraph without stop\n\nSecond one.");
  CHECK(texts(s) == std::vector<std::string>{"First paragraph without stop", "Second one."});
}

TEST_CASE("sentence char length counts code points without whitespace") {
  auto s = Sentence::from_text("Żółw je.");
  CHECK(s.char_len == 7);
  CHECK(s.tokens == Tokens{"żółw", "je"});
}

TEST_CASE("tokenize lowercases and strips edge punctuation") {
  CHECK(tokenize("It is origami.") == Tokens{"it", "is", "origami"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("Kupiłem sobie nowy samochód.") ==
        Tokens{"kupiłem", "sobie", "nowy", "samochód"});
  CHECK(tokenize("\"Hello,\" (world) -- don't") == Tokens{"hello", "world", "don't"});
}

TEST_CASE("tokenize is idempotent on its joined output") {
  std::mt19937 rng(5);
  const std::string alphabet[] = {"a", "B", "ż", "Ł", ".", ",", " ", "  ", "'", "-", "x"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    for (int k = 0; k < 20; ++k) s += alphabet[rng() % std::size(alphabet)];
    auto once = tokenize(s);
    CHECK(tokenize(join_tokens(once)) == once);
  }
}

TEST_CASE("remove_stopwords") {
  StopwordSet stops(LangCode("en"), {"it", "is"});
  CHECK(remove_stopwords(Tokens{"it", "is", "origami"}, stops) == Tokens{"origami"});
  CHECK(remove_stopwords(Tokens{"origami"}, StopwordSet()) == Tokens{"origami"});
  StopwordSet the(LangCode("en"), {"the"});
  CHECK(remove_stopwords(Tokens{"the", "the"}, the).empty());
}

TEST_CASE("stopword and abbreviation files load") {
  auto stops = StopwordSet::load(testutil::source_dir() / "data" / "stopwords.en", LangCode("en"));
  CHECK(stops.contains("the"));
  CHECK_FALSE(stops.contains("origami"));
  auto abbrevs = load_abbreviations(testutil::source_dir() / "data" / "abbreviations.pl");
  CHECK(abbrevs.count("np.") == 1);
}

TEST_CASE("expand_synonyms enumerates variants original first") {
  SynonymLexicon lex;
  lex.add("will", "would");
  auto v = expand_synonyms(Tokens{"i", "will", "call"}, lex, 10);
  CHECK(v == std::vector<Tokens>{{"i", "will", "call"}, {"i", "would", "call"}});

  CHECK(expand_synonyms(Tokens{"a", "b"}, SynonymLexicon(), 10) ==
        std::vector<Tokens>{{"a", "b"}});

  SynonymLexicon three;
  for (const char *w : {"a", "b", "c"}) {
    three.add(w, std::string(w) + "1");
    three.add(w, std::string(w) + "2");
  }
  auto five = expand_synonyms(Tokens{"a", "b", "c"}, three, 5);
  REQUIRE(five.size() == 5);
  CHECK(five[0] == Tokens{"a", "b", "c"});
  CHECK(five[1] == Tokens{"a", "b", "c1"});
  CHECK(expand_synonyms(Tokens{"a", "b", "c"}, three, 100).size() == 27);
  CHECK_THROWS_AS(expand_synonyms(Tokens{"a"}, three, 0), Error);
}

TEST_CASE("synonym lexicon never maps a word to itself") {
  SynonymLexicon lex;
  lex.add("big", "big");
  CHECK(lex.synonyms("big") == nullptr);
}

TEST_CASE("utf8 helpers") {
  CHECK(utf8::lower("ŻÓŁW Ą") == "żółw ą");
  CHECK(utf8::normalize_space("  a \t b\n") == "a b");
  CHECK(utf8::encode(utf8::decode("zażółć")) == "zażółć");
  CHECK(utf8::visible_length("a b ć") == 3);
}
