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

#ifndef BITEXT_TEXTPROC_HPP_
#define BITEXT_TEXTPROC_HPP_

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/lang.hpp"

namespace bitext {

using Tokens = std::vector<std::string>;

struct Sentence {
  std::string text;
  Tokens tokens;
  // Code points excluding whitespace.
  std::size_t char_len = 0;

  static Sentence from_text(std::string text);
};

class StopwordSet {
 public:
  StopwordSet() = default;
  StopwordSet(LangCode lang, std::set<std::string> words);

  static StopwordSet load(const std::filesystem::path &path, LangCode lang);

  bool contains(const std::string &token) const {
    return words_.count(token) != 0;
  }
  const LangCode &lang() const { return lang_; }
  const std::set<std::string> &words() const { return words_; }
  bool empty() const { return words_.empty(); }

 private:
  LangCode lang_;
  std::set<std::string> words_;
};

// Directed token -> synonyms relation. Symmetry is not implied; a token is
// never stored as its own synonym.
class SynonymLexicon {
 public:
  void add(const std::string &word, const std::string &synonym);
  const std::set<std::string> *synonyms(const std::string &word) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // TSV: word<TAB>syn1,syn2,...
  static SynonymLexicon load(const std::filesystem::path &path);

 private:
  std::map<std::string, std::set<std::string>> entries_;
};

// Lowercased abbreviation list ("dr.", "np.") consulted by the segmenter.
using AbbreviationList = std::set<std::string>;
AbbreviationList load_abbreviations(const std::filesystem::path &path);

std::vector<Sentence> segment_sentences(std::string_view text,
                                        const AbbreviationList &abbrevs = {});

Tokens tokenize(std::string_view sentence_text);

Tokens remove_stopwords(std::span<const std::string> tokens,
                        const StopwordSet &stops);

inline constexpr std::size_t kDefaultMaxVariants = 64;

// Variants in lexicographic order of per-position choices (choice 0 is the
// token itself, then its synonyms in sorted order). The original comes first.
std::vector<Tokens> expand_synonyms(std::span<const std::string> tokens,
                                    const SynonymLexicon &lex,
                                    std::size_t max_variants);

std::string join_tokens(std::span<const std::string> tokens);

}  // namespace bitext

#endif  // BITEXT_TEXTPROC_HPP_
