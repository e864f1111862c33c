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

#ifndef BITEXT_ALIGNER_HPP_
#define BITEXT_ALIGNER_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitext/textproc.hpp"

namespace bitext {

// Link shapes, in the canonical index order used for tie-breaking.
enum class LinkCategory { k0_1 = 0, k1_0, k1_1, k1_2, k2_1, k2_2 };
inline constexpr std::size_t kNumCategories = 6;

const char *category_name(LinkCategory c);
std::size_t category_src_size(LinkCategory c);
std::size_t category_tgt_size(LinkCategory c);
LinkCategory mirror(LinkCategory c);

struct IndexSpan {
  std::size_t begin = 0;
  std::size_t size = 0;

  std::size_t end() const { return begin + size; }
  bool empty() const { return size == 0; }
  friend bool operator==(const IndexSpan &, const IndexSpan &) = default;
};

struct AlignmentLink {
  IndexSpan src;
  IndexSpan tgt;
  LinkCategory category = LinkCategory::k1_1;
  double score = 0.0;  // link cost; lower is better

  friend bool operator==(const AlignmentLink &, const AlignmentLink &) = default;
};

struct SentenceAlignment {
  std::vector<AlignmentLink> links;
  double total_cost = 0.0;
};

// Throws Error(kInput) unless the links are monotone, contiguous and cover
// every index of both sides exactly once.
void validate_alignment(const SentenceAlignment &alignment, std::size_t n_src,
                        std::size_t n_tgt);

// (source token, target token) -> association score in (0, 1].
class Lexicon {
 public:
  void add(const std::string &src, const std::string &tgt, double score);
  double score(const std::string &src, const std::string &tgt) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::pair<std::string, std::string>, double> &entries() const {
    return entries_;
  }

  // Union keeping the higher score for shared pairs.
  void merge_max(const Lexicon &other);

  // TSV src<TAB>tgt<TAB>score, sorted by (src, tgt).
  std::string to_tsv() const;
  static Lexicon from_tsv(const std::string &text, const std::string &origin = "lexicon");
  static Lexicon load(const std::filesystem::path &path);

 private:
  std::map<std::pair<std::string, std::string>, double> entries_;
};

struct AlignerParams {
  // Indexed by LinkCategory.
  std::array<double, kNumCategories> priors{0.0099, 0.0099, 0.89, 0.0445, 0.0445, 0.011};
  double mean_ratio = 1.0;  // expected target chars per source char
  double variance = 6.8;
  double lexical_weight = 5.0;
  double lexicon_floor = 0.1;
  std::size_t min_count = 2;
};

// -log P(|delta|) with delta the Gale-Church length statistic.
double length_cost(std::size_t src_len, std::size_t tgt_len,
                   const AlignerParams &params);

double link_base_cost(LinkCategory c, std::size_t src_len, std::size_t tgt_len,
                      const AlignerParams &params);

// Lookup structure for scoring lexical coverage of a link.
class LexiconIndex {
 public:
  explicit LexiconIndex(const Lexicon &lex);
  // Mean over the tokens of both spans of the best lexicon score linking the
  // token to some token on the other side; 0 when either side is empty.
  double coverage(std::span<const Sentence> src, std::span<const Sentence> tgt) const;

 private:
  std::unordered_map<std::string, std::vector<std::pair<std::string, double>>> by_src_;
  std::unordered_map<std::string, std::vector<std::pair<std::string, double>>> by_tgt_;
};

SentenceAlignment align_length_based(std::span<const Sentence> src,
                                     std::span<const Sentence> tgt,
                                     const AlignerParams &params = {});

// Same dynamic program with each link's cost reduced by
// lexical_weight * coverage under lex (ignored when null).
SentenceAlignment align_with_lexicon(std::span<const Sentence> src,
                                     std::span<const Sentence> tgt,
                                     const AlignerParams &params,
                                     const Lexicon *lex);

Lexicon build_auto_lexicon(std::span<const Sentence> src,
                           std::span<const Sentence> tgt,
                           const SentenceAlignment &alignment,
                           std::size_t min_count, double score_floor);

struct TwoPassResult {
  SentenceAlignment alignment;
  Lexicon lexicon;
};

TwoPassResult align_two_pass(std::span<const Sentence> src,
                             std::span<const Sentence> tgt,
                             const Lexicon *external_lexicon,
                             const AlignerParams &params = {});

// src_indices<TAB>tgt_indices<TAB>score, one link per line, "-" for an empty
// side, score with six decimals.
std::string format_alignment_tsv(const SentenceAlignment &alignment);
SentenceAlignment parse_alignment_tsv(const std::string &text);

}  // namespace bitext

#endif  // BITEXT_ALIGNER_HPP_
