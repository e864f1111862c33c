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

#ifndef BITEXT_FILTER_HPP_
#define BITEXT_FILTER_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "bitext/textproc.hpp"

namespace bitext {

enum class Comparator { kOverlap, kNormalizedOverlap, kRatio, kSynonymRatio };

const char *comparator_name(Comparator c);
Comparator parse_comparator(std::string_view name);

struct FilterTier {
  Comparator comparator = Comparator::kNormalizedOverlap;
  double threshold = 0.7;
};

// normalized_overlap >= 0.7, ratio >= 0.6, synonym_ratio >= 0.6.
std::vector<FilterTier> default_tiers();

// One "comparator threshold" per line, execution order; '#' comments.
std::vector<FilterTier> parse_tiers(const std::string &text);
std::string format_tiers(const std::vector<FilterTier> &tiers);

// 2 * |multiset intersection| / (|a| + |b|).
double overlap_similarity(std::span<const std::string> a,
                          std::span<const std::string> b);

// Share of the shorter side's tokens found in the other side. Kept for
// comparison: it prefers long sentences that happen to contain every word.
double raw_overlap_similarity(std::span<const std::string> a,
                              std::span<const std::string> b);

struct MatchingBlock {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;

  friend bool operator==(const MatchingBlock &, const MatchingBlock &) = default;
};

// Ratcliff-Obershelp blocks over code points: longest common block (ties to
// the earliest start in a, then in b), then both flanks recursively. Sorted
// by position.
std::vector<MatchingBlock> matching_blocks(std::u32string_view a,
                                           std::u32string_view b);

// 2M / T over code points; 1 when both are empty.
double ratio_similarity(std::string_view a, std::string_view b);
double ratio_similarity(std::u32string_view a, std::u32string_view b);

double synonym_similarity(std::span<const std::string> a,
                          std::span<const std::string> b,
                          const SynonymLexicon &lex, std::size_t max_variants);

struct FilterResources {
  const StopwordSet *stops = nullptr;
  const SynonymLexicon *synonyms = nullptr;
  std::size_t max_variants = kDefaultMaxVariants;
  // Ratio comparators see the stopword-filtered tokens joined by spaces
  // rather than the raw line.
  bool ratio_on_filtered_tokens = true;
};

struct Candidate {
  std::size_t index = 0;
  std::string_view text;
};

struct MatchDecision {
  std::size_t src_index = 0;
  std::optional<std::size_t> tgt_index;
  double score = 0.0;
  std::optional<std::size_t> tier;  // index into the ladder when matched

  std::string tier_name(std::span<const FilterTier> tiers) const;
};

MatchDecision match_best_candidate(std::size_t src_index,
                                   std::string_view trans_line,
                                   std::span<const Candidate> candidates,
                                   std::span<const FilterTier> tiers,
                                   const FilterResources &res);

struct WindowPolicy {
  enum class Mode { kAuto, kUnbounded, kBounded };
  Mode mode = Mode::kAuto;
  std::size_t radius = 50;

  static constexpr std::size_t kAutoUnboundedMax = 500;

  static WindowPolicy unbounded() { return {Mode::kUnbounded, 0}; }
  static WindowPolicy bounded(std::size_t r) { return {Mode::kBounded, r}; }
};

struct AcceptedPair {
  std::size_t src_index = 0;
  std::size_t tgt_index = 0;
  double score = 0.0;
  std::size_t tier = 0;
};

struct FilterReport {
  std::size_t candidates_in = 0;  // source lines considered
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::vector<std::size_t> per_tier;  // accepted pairs per ladder position
};

struct FilterResult {
  std::vector<AcceptedPair> pairs;  // ascending source index
  FilterReport report;
};

// Scores every source line against its candidate window, escalating through
// the ladder until a tier accepts; the accepted cells of all lines are then
// claimed greedily by descending score (ties: lower source, then lower
// target index) so each target line is used at most once. `suggestions`
// gives the aligner's target position per source line; when empty the
// position is scaled from the source index.
FilterResult filter_corpus(std::span<const std::string> src_lines,
                           std::span<const std::string> trans_lines,
                           std::span<const std::string> tgt_lines,
                           std::span<const FilterTier> tiers,
                           WindowPolicy window, const FilterResources &res,
                           std::span<const std::size_t> suggestions = {});

}  // namespace bitext

#endif  // BITEXT_FILTER_HPP_
