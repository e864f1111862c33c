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

#include "bitext/error.hpp"
#include "bitext/io.hpp"
#include "bitext/translator.hpp"
#include "test_util.hpp"

using namespace bitext;

namespace {

TranslationRequest request(std::vector<std::string> lines) {
  return TranslationRequest{std::move(lines), LangCode("pl"), LangCode("en")};
}

Lexicon kot_cat() {
  Lexicon lex;
  lex.add("kot", "cat", 1.0);
  return lex;
}

}  // namespace

TEST_CASE("gloss translation substitutes known tokens") {
  CHECK(gloss_translate("kot", kot_cat()) == "cat");
  CHECK(gloss_translate("kot pies", kot_cat()) == "cat pies");
  Lexicon tie;
  tie.add("kot", "feline", 0.4);
  tie.add("kot", "cat", 0.4);
  CHECK(gloss_translate("kot", tie) == "cat");
  Lexicon best;
  best.add("kot", "feline", 0.9);
  best.add("kot", "cat", 0.4);
  CHECK(gloss_translate("Kot.", best) == "feline");

  GlossEngine engine(kot_cat());
  auto out = translate_lines(request({"kot kot", ""}), engine, nullptr);
  CHECK(out.lines == std::vector<std::string>{"cat cat", ""});
}

TEST_CASE("empty lines never reach the engine") {
  GlossEngine engine(kot_cat());
  auto out = translate_lines(request({"", "  "}), engine, nullptr);
  CHECK(out.lines.size() == 2);
  CHECK(engine.invocations() == 0);
}

TEST_CASE("memory engine looks up normalized lines and falls back") {
  std::map<std::string, std::string> tm{{"To jest origami.", "This is origami."}};
  MemoryEngine plain(tm, nullptr);
  auto a = translate_lines(request({"To  jest origami.", "Nieznane."}), plain, nullptr);
  CHECK(a.lines == std::vector<std::string>{"This is origami.", "Nieznane."});

  MemoryEngine with_gloss(tm, std::make_unique<GlossEngine>(kot_cat()));
  auto b = translate_lines(request({"kot"}), with_gloss, nullptr);
  CHECK(b.lines == std::vector<std::string>{"cat"});
}

TEST_CASE("memory file loads and reports malformed lines") {
  testutil::TempDir tmp;
  io::write_file(tmp / "tm.tsv", "To jest origami.\tThis is origami.\n");
  CHECK(MemoryEngine::load_memory(tmp / "tm.tsv").size() == 1);
  io::write_file(tmp / "bad.tsv", "ok\tok\nno tab here\n");
  CHECK_THROWS_WITH_AS(MemoryEngine::load_memory(tmp / "bad.tsv"),
                       doctest::Contains("bad.tsv:2:"), Error);
}

TEST_CASE("external engine streams lines through a command") {
  ExternalCommandEngine upper("tr a-z A-Z");
  auto out = translate_lines(request({"kot", "", "pies"}), upper, nullptr);
  CHECK(out.lines == std::vector<std::string>{"KOT", "", "PIES"});
}

TEST_CASE("external engine failures name the line") {
  ExternalCommandEngine short_output("head -n 1");
  try {
    translate_lines(request({"a", "", "b", "c"}), short_output, nullptr);
    FAIL("expected an engine error");
  } catch (const EngineLineError &e) {
    CHECK(e.line() == 2);  // the second non-empty request line
    CHECK(e.kind() == ErrorKind::kEngine);
  }
  ExternalCommandEngine failing("exit 3");
  CHECK_THROWS_AS(translate_lines(request({"a"}), failing, nullptr), EngineLineError);
  CHECK_THROWS_AS(ExternalCommandEngine(""), Error);
}

TEST_CASE("cache answers repeated lines without the engine") {
  testutil::TempDir tmp;
  GlossEngine engine(kot_cat());
  auto first = translate_lines(request({"kot", "kot pies"}), engine, tmp.path());
  CHECK(engine.invocations() == 1);
  GlossEngine again(kot_cat());
  auto second = translate_lines(request({"kot pies", "kot"}), again, tmp.path());
  CHECK(again.invocations() == 0);
  CHECK(second.lines == std::vector<std::string>{"cat pies", "cat"});

  // A different lexicon is a different engine id and cache file.
  Lexicon other;
  other.add("kot", "tomcat", 1.0);
  GlossEngine changed(other);
  CHECK(changed.id() != engine.id());
  auto third = translate_lines(request({"kot"}), changed, tmp.path());
  CHECK(third.lines == std::vector<std::string>{"tomcat"});
}

TEST_CASE("output length always matches input") {
  GlossEngine engine(kot_cat());
  std::vector<std::string> lines;
  for (int k = 0; k < 50; ++k) lines.push_back(k % 3 ? "kot " + std::to_string(k) : "");
  CHECK(translate_lines(request(lines), engine, nullptr).lines.size() == lines.size());
  CHECK_THROWS_AS(translate_lines(TranslationRequest{{"a"}, LangCode("pl"), LangCode("pl")},
                                  engine, nullptr),
                  Error);
}
