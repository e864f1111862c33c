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

#include "bitext/textproc.hpp"

#include <algorithm>

#include "bitext/error.hpp"
#include "bitext/io.hpp"
#include "bitext/utf8.hpp"

namespace bitext {
namespace {

bool is_terminal(char32_t cp) { return cp == U'.' || cp == U'!' || cp == U'?'; }

bool is_closer(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U')': case U']':
    case 0x00BB: case 0x2019: case 0x201D:
      return true;
    default:
      return false;
  }
}

bool is_opener(char32_t cp) {
  switch (cp) {
    case U'"': case U'\'': case U'(': case U'[':
    case 0x00AB: case 0x2018: case 0x201C: case 0x201E:
      return true;
    default:
      return false;
  }
}

// Paragraph boundaries are lines holding only whitespace.
std::vector<std::u32string> split_paragraphs(const std::u32string &cps) {
  std::vector<std::u32string> paras;
  std::u32string cur;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (cps[i] == U'\n') {
      std::size_t j = i + 1;
      while (j < cps.size() && cps[j] != U'\n' && utf8::is_space(cps[j])) ++j;
      if (j < cps.size() && cps[j] == U'\n') {
        paras.push_back(std::move(cur));
        cur.clear();
        i = j + 1;
        continue;
      }
    }
    cur.push_back(cps[i]);
    ++i;
  }
  paras.push_back(std::move(cur));
  return paras;
}

bool is_abbreviation(const std::u32string &para, std::size_t dot,
                     const AbbreviationList &abbrevs) {
  if (abbrevs.empty()) return false;
  std::size_t start = dot;
  while (start > 0 && !utf8::is_space(para[start - 1])) --start;
  std::string word;
  for (std::size_t k = start; k <= dot; ++k) {
    utf8::append(word, utf8::to_lower(para[k]));
  }
  // Leading openers such as "(Dr." do not hide the abbreviation.
  while (!word.empty() && is_opener(static_cast<unsigned char>(word.front()))) {
    word.erase(word.begin());
  }
  return abbrevs.count(word) != 0;
}

void segment_paragraph(const std::u32string &para,
                       const AbbreviationList &abbrevs,
                       std::vector<Sentence> &out) {
  std::size_t begin = 0;
  auto emit = [&](std::size_t end) {
    auto text = utf8::trim(
        utf8::encode(std::u32string_view(para).substr(begin, end - begin)));
    if (!text.empty()) out.push_back(Sentence::from_text(std::move(text)));
    begin = end;
  };
  std::size_t i = 0;
  const std::size_t n = para.size();
  while (i < n) {
    if (!is_terminal(para[i])) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    std::size_t k = i;
    while (k < n && is_terminal(para[k])) ++k;
    const bool single_dot = (k - first == 1 && para[first] == U'.');
    while (k < n && is_closer(para[k])) ++k;
    std::size_t m = k;
    while (m < n && utf8::is_space(para[m])) ++m;
    bool boundary = false;
    if (m == n) {
      boundary = true;
    } else if (m > k) {
      std::size_t c = m;
      while (c < n && is_opener(para[c])) ++c;
      boundary = c < n && utf8::is_upper(para[c]);
    }
    if (boundary && single_dot && is_abbreviation(para, first, abbrevs)) {
      boundary = false;
    }
    if (boundary) emit(k);
    i = k;
  }
  emit(n);
}

}  // namespace

Sentence Sentence::from_text(std::string text) {
  Sentence s;
  s.tokens = tokenize(text);
  s.char_len = utf8::visible_length(text);
  s.text = std::move(text);
  return s;
}

StopwordSet::StopwordSet(LangCode lang, std::set<std::string> words)
    : lang_(std::move(lang)) {
  for (const auto &w : words) words_.insert(utf8::lower(w));
}

StopwordSet StopwordSet::load(const std::filesystem::path &path,
                              LangCode lang) {
  auto entries = io::read_list(path);
  return StopwordSet(std::move(lang),
                     std::set<std::string>(entries.begin(), entries.end()));
}

void SynonymLexicon::add(const std::string &word, const std::string &synonym) {
  auto w = utf8::lower(utf8::trim(word));
  auto s = utf8::lower(utf8::trim(synonym));
  if (w.empty() || s.empty() || w == s) return;
  entries_[w].insert(s);
}

const std::set<std::string> *SynonymLexicon::synonyms(
    const std::string &word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path &path) {
  SynonymLexicon lex;
  std::size_t lineno = 0;
  for (const auto &line : io::read_lines(path)) {
    ++lineno;
    if (utf8::trim(line).empty() || line.front() == '#') continue;
    auto fields = io::split_tabs(line);
    if (fields.size() != 2) {
      throw Error(ErrorKind::kInput, path.string() + ":" +
                                         std::to_string(lineno) +
                                         ": expected word<TAB>syn1,syn2,...");
    }
    std::size_t start = 0;
    const auto &syns = fields[1];
    while (start <= syns.size()) {
      auto comma = syns.find(',', start);
      if (comma == std::string::npos) comma = syns.size();
      lex.add(fields[0], syns.substr(start, comma - start));
      start = comma + 1;
    }
  }
  return lex;
}

AbbreviationList load_abbreviations(const std::filesystem::path &path) {
  AbbreviationList out;
  for (const auto &entry : io::read_list(path)) out.insert(utf8::lower(entry));
  return out;
}

std::vector<Sentence> segment_sentences(std::string_view text,
                                        const AbbreviationList &abbrevs) {
  std::vector<Sentence> out;
  for (const auto &para : split_paragraphs(utf8::decode(text))) {
    segment_paragraph(para, abbrevs, out);
  }
  return out;
}

Tokens tokenize(std::string_view sentence_text) {
  Tokens out;
  for (const auto &piece : utf8::split_ws(sentence_text)) {
    auto cps = utf8::decode(piece);
    std::size_t b = 0, e = cps.size();
    while (b < e && utf8::is_punct(cps[b])) ++b;
    while (e > b && utf8::is_punct(cps[e - 1])) --e;
    if (b == e) continue;
    std::string tok;
    for (std::size_t k = b; k < e; ++k) utf8::append(tok, utf8::to_lower(cps[k]));
    out.push_back(std::move(tok));
  }
  return out;
}

Tokens remove_stopwords(std::span<const std::string> tokens,
                        const StopwordSet &stops) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) {
    if (!stops.contains(t)) out.push_back(t);
  }
  return out;
}

std::vector<Tokens> expand_synonyms(std::span<const std::string> tokens,
                                    const SynonymLexicon &lex,
                                    std::size_t max_variants) {
  if (max_variants == 0) {
    throw Error(ErrorKind::kInvalidArgument, "max_variants must be >= 1");
  }
  std::vector<std::vector<const std::string *>> choices(tokens.size());
  for (std::size_t p = 0; p < tokens.size(); ++p) {
    choices[p].push_back(&tokens[p]);
    if (const auto *syns = lex.synonyms(tokens[p])) {
      for (const auto &s : *syns) choices[p].push_back(&s);
    }
  }
  std::vector<Tokens> out;
  std::vector<std::size_t> odometer(tokens.size(), 0);
  while (out.size() < max_variants) {
    Tokens variant;
    variant.reserve(tokens.size());
    for (std::size_t p = 0; p < tokens.size(); ++p) {
      variant.push_back(*choices[p][odometer[p]]);
    }
    out.push_back(std::move(variant));
    // Rightmost position turns fastest.
    std::size_t p = tokens.size();
    while (p > 0) {
      --p;
      if (++odometer[p] < choices[p].size()) break;
      odometer[p] = 0;
      if (p == 0) return out;
    }
    if (tokens.empty()) break;
  }
  return out;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (const auto &t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace bitext
