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

#include "bitext/filter.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "bitext/error.hpp"
#include "bitext/utf8.hpp"

namespace bitext {
namespace {

// Longest common block of a[alo,ahi) and b[blo,bhi).
MatchingBlock longest_match(std::u32string_view a, std::u32string_view b,
                            std::size_t alo, std::size_t ahi, std::size_t blo,
                            std::size_t bhi, std::vector<std::size_t> &prev,
                            std::vector<std::size_t> &cur) {
  MatchingBlock best{alo, blo, 0};
  const std::size_t width = bhi - blo;
  prev.assign(width + 1, 0);
  cur.assign(width + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      const std::size_t col = j - blo + 1;
      if (a[i] == b[j]) {
        const std::size_t k = prev[col - 1] + 1;
        cur[col] = k;
        if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
      } else {
        cur[col] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

std::size_t matched_chars(std::u32string_view a, std::u32string_view b) {
  std::size_t total = 0;
  for (const auto &blk : matching_blocks(a, b)) total += blk.size;
  return total;
}

// Upper bound on 2M/T from the character multisets.
double quick_ratio_bound(const std::u32string &sorted_a,
                         const std::u32string &sorted_b) {
  const std::size_t t = sorted_a.size() + sorted_b.size();
  if (t == 0) return 1.0;
  std::size_t common = 0;
  auto i = sorted_a.begin();
  auto j = sorted_b.begin();
  while (i != sorted_a.end() && j != sorted_b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(t);
}

double ratio_from(std::size_t matched, std::size_t total) {
  return total == 0 ? 1.0
                    : 2.0 * static_cast<double>(matched) / static_cast<double>(total);
}

struct PreparedLine {
  Tokens tokens;            // comparator tokens (stopwords removed)
  std::u32string joined;    // ratio input
  std::u32string sorted;    // joined, sorted, for the ratio bound
  mutable std::vector<std::u32string> variants;  // synonym-expanded, lazy
  mutable std::vector<std::u32string> variants_sorted;
  mutable bool expanded = false;
};

PreparedLine prepare(std::string_view line, const FilterResources &res) {
  PreparedLine p;
  auto all = tokenize(line);
  if (res.stops && !res.stops->empty()) {
    p.tokens = remove_stopwords(all, *res.stops);
    // A line made only of stopwords keeps its tokens rather than collapsing
    // to the empty sentence, which would match every other empty one.
    if (p.tokens.empty()) p.tokens = all;
  } else {
    p.tokens = all;
  }
  p.joined = utf8::decode(res.ratio_on_filtered_tokens ? join_tokens(p.tokens)
                                                       : utf8::normalize_space(line));
  p.sorted = p.joined;
  std::sort(p.sorted.begin(), p.sorted.end());
  return p;
}

void expand(const PreparedLine &p, const FilterResources &res) {
  if (p.expanded) return;
  p.expanded = true;
  static const SynonymLexicon kEmpty;
  const auto &lex = res.synonyms ? *res.synonyms : kEmpty;
  for (const auto &variant : expand_synonyms(p.tokens, lex, res.max_variants)) {
    p.variants.push_back(utf8::decode(join_tokens(variant)));
    auto sorted = p.variants.back();
    std::sort(sorted.begin(), sorted.end());
    p.variants_sorted.push_back(std::move(sorted));
  }
}

// Score of a under tier comparator against b. Returns a value below `floor`
// (without computing it exactly) when a cheap bound rules the cell out.
double score_cell(const PreparedLine &a, const PreparedLine &b, Comparator c,
                  double floor, const FilterResources &res) {
  switch (c) {
    case Comparator::kOverlap:
      return raw_overlap_similarity(a.tokens, b.tokens);
    case Comparator::kNormalizedOverlap:
      return overlap_similarity(a.tokens, b.tokens);
    case Comparator::kRatio:
      if (quick_ratio_bound(a.sorted, b.sorted) < floor) return -1.0;
      return ratio_similarity(a.joined, b.joined);
    case Comparator::kSynonymRatio: {
      expand(a, res);
      expand(b, res);
      double best = -1.0;
      for (std::size_t x = 0; x < a.variants.size(); ++x) {
        for (std::size_t y = 0; y < b.variants.size(); ++y) {
          const double bound = quick_ratio_bound(a.variants_sorted[x], b.variants_sorted[y]);
          if (bound < floor || bound <= best) continue;
          best = std::max(best, ratio_similarity(a.variants[x], b.variants[y]));
          if (best >= 1.0) return best;
        }
      }
      return best;
    }
  }
  return 0.0;
}

struct Cell {
  std::size_t src;
  std::size_t tgt;
  double score;
  std::size_t tier;
};

// Runs the ladder for one source line over its candidates. Appends accepted
// cells (all candidates clearing the accepting tier) and returns the
// decision for the best one.
MatchDecision decide(std::size_t src_index, const PreparedLine &trans,
                     std::span<const std::size_t> candidates,
                     std::span<const PreparedLine> targets,
                     std::span<const FilterTier> tiers,
                     const FilterResources &res, std::vector<Cell> *cells) {
  MatchDecision decision;
  decision.src_index = src_index;
  if (candidates.empty()) return decision;
  double best_seen = 0.0;
  for (std::size_t t = 0; t < tiers.size(); ++t) {
    const auto &tier = tiers[t];
    double best = -1.0;
    std::size_t best_idx = 0;
    std::vector<Cell> passing;
    for (std::size_t j : candidates) {
      const double s = score_cell(trans, targets[j], tier.comparator,
                                  tier.threshold, res);
      if (s > best || (s == best && j < best_idx)) {
        best = s;
        best_idx = j;
      }
      if (s >= tier.threshold) passing.push_back({src_index, j, s, t});
    }
    best_seen = std::max(best_seen, best);
    if (best >= tier.threshold) {
      decision.tgt_index = best_idx;
      decision.score = best;
      decision.tier = t;
      if (cells) cells->insert(cells->end(), passing.begin(), passing.end());
      return decision;
    }
  }
  decision.score = std::clamp(best_seen, 0.0, 1.0);
  return decision;
}

void check_tiers(std::span<const FilterTier> tiers) {
  if (tiers.empty()) throw Error(ErrorKind::kConfig, "filter needs at least one tier");
  for (const auto &t : tiers) {
    if (!(t.threshold >= 0.0 && t.threshold <= 1.0)) {
      throw Error(ErrorKind::kConfig, std::string("tier ") + comparator_name(t.comparator) +
                                          " threshold outside [0, 1]");
    }
  }
}

}  // namespace

const char *comparator_name(Comparator c) {
  switch (c) {
    case Comparator::kOverlap: return "overlap";
    case Comparator::kNormalizedOverlap: return "normalized_overlap";
    case Comparator::kRatio: return "ratio";
    case Comparator::kSynonymRatio: return "synonym_ratio";
  }
  return "?";
}

Comparator parse_comparator(std::string_view name) {
  for (auto c : {Comparator::kOverlap, Comparator::kNormalizedOverlap,
                 Comparator::kRatio, Comparator::kSynonymRatio}) {
    if (name == comparator_name(c)) return c;
  }
  throw Error(ErrorKind::kConfig,
              "unknown comparator '" + std::string(name) +
                  "' (expected overlap, normalized_overlap, ratio or synonym_ratio)");
}

std::vector<FilterTier> default_tiers() {
  return {{Comparator::kNormalizedOverlap, 0.7},
          {Comparator::kRatio, 0.6},
          {Comparator::kSynonymRatio, 0.6}};
}

std::vector<FilterTier> parse_tiers(const std::string &text) {
  std::vector<FilterTier> tiers;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    auto line = utf8::trim(std::string_view(text).substr(start, nl - start));
    start = nl + 1;
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    auto fields = utf8::split_ws(line);
    if (fields.size() != 2) {
      throw Error(ErrorKind::kConfig, "tier line " + std::to_string(lineno) +
                                          ": expected '<comparator> <threshold>'");
    }
    FilterTier tier;
    try {
      tier.comparator = parse_comparator(fields[0]);
    } catch (const Error &e) {
      throw Error(ErrorKind::kConfig, "tier line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      std::size_t used = 0;
      tier.threshold = std::stod(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      throw Error(ErrorKind::kConfig, "tier line " + std::to_string(lineno) +
                                          ": bad threshold '" + fields[1] + "'");
    }
    tiers.push_back(tier);
  }
  check_tiers(tiers);
  return tiers;
}

std::string format_tiers(const std::vector<FilterTier> &tiers) {
  std::string out;
  char buf[64];
  for (const auto &t : tiers) {
    std::snprintf(buf, sizeof buf, "%s %g\n", comparator_name(t.comparator), t.threshold);
    out += buf;
  }
  return out;
}

double overlap_similarity(std::span<const std::string> a,
                          std::span<const std::string> b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  std::map<std::string_view, std::size_t> counts;
  for (const auto &t : a) ++counts[t];
  std::size_t common = 0;
  for (const auto &t : b) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size());
}

double raw_overlap_similarity(std::span<const std::string> a,
                              std::span<const std::string> b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  std::map<std::string_view, std::size_t> counts;
  for (const auto &t : a) ++counts[t];
  std::size_t common = 0;
  for (const auto &t : b) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  return static_cast<double>(common) / static_cast<double>(std::min(a.size(), b.size()));
}

std::vector<MatchingBlock> matching_blocks(std::u32string_view a,
                                           std::u32string_view b) {
  std::vector<MatchingBlock> blocks;
  std::vector<std::size_t> prev, cur;
  struct Range { std::size_t alo, ahi, blo, bhi; };
  std::vector<Range> stack{{0, a.size(), 0, b.size()}};
  while (!stack.empty()) {
    auto r = stack.back();
    stack.pop_back();
    if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
    auto m = longest_match(a, b, r.alo, r.ahi, r.blo, r.bhi, prev, cur);
    if (m.size == 0) continue;
    blocks.push_back(m);
    stack.push_back({r.alo, m.a, r.blo, m.b});
    stack.push_back({m.a + m.size, r.ahi, m.b + m.size, r.bhi});
  }
  std::sort(blocks.begin(), blocks.end(), [](const auto &x, const auto &y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  return blocks;
}

double ratio_similarity(std::u32string_view a, std::u32string_view b) {
  return ratio_from(matched_chars(a, b), a.size() + b.size());
}

double ratio_similarity(std::string_view a, std::string_view b) {
  return ratio_similarity(utf8::decode(a), utf8::decode(b));
}

double synonym_similarity(std::span<const std::string> a,
                          std::span<const std::string> b,
                          const SynonymLexicon &lex, std::size_t max_variants) {
  double best = 0.0;
  auto va = expand_synonyms(a, lex, max_variants);
  auto vb = expand_synonyms(b, lex, max_variants);
  std::vector<std::u32string> jb;
  jb.reserve(vb.size());
  for (const auto &v : vb) jb.push_back(utf8::decode(join_tokens(v)));
  for (const auto &x : va) {
    auto ja = utf8::decode(join_tokens(x));
    for (const auto &y : jb) {
      best = std::max(best, ratio_similarity(ja, y));
      if (best >= 1.0) return best;
    }
  }
  return best;
}

std::string MatchDecision::tier_name(std::span<const FilterTier> tiers) const {
  if (!tier) return "none";
  return comparator_name(tiers[*tier].comparator);
}

MatchDecision match_best_candidate(std::size_t src_index,
                                   std::string_view trans_line,
                                   std::span<const Candidate> candidates,
                                   std::span<const FilterTier> tiers,
                                   const FilterResources &res) {
  check_tiers(tiers);
  auto trans = prepare(trans_line, res);
  std::vector<PreparedLine> targets;
  std::vector<std::size_t> local;
  targets.reserve(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    targets.push_back(prepare(candidates[k].text, res));
    local.push_back(k);
  }
  // Resolve ties by the caller's target index, not the window position.
  std::sort(local.begin(), local.end(), [&](std::size_t x, std::size_t y) {
    return candidates[x].index < candidates[y].index;
  });
  auto d = decide(src_index, trans, local, targets, tiers, res, nullptr);
  if (d.tgt_index) d.tgt_index = candidates[*d.tgt_index].index;
  return d;
}

FilterResult filter_corpus(std::span<const std::string> src_lines,
                           std::span<const std::string> trans_lines,
                           std::span<const std::string> tgt_lines,
                           std::span<const FilterTier> tiers,
                           WindowPolicy window, const FilterResources &res,
                           std::span<const std::size_t> suggestions) {
  if (src_lines.size() != trans_lines.size()) {
    throw Error(ErrorKind::kInput,
                "source has " + std::to_string(src_lines.size()) +
                    " lines but its translation has " +
                    std::to_string(trans_lines.size()));
  }
  if (!suggestions.empty() && suggestions.size() != src_lines.size()) {
    throw Error(ErrorKind::kInput, "one suggested position per source line required");
  }
  check_tiers(tiers);

  const std::size_t n = src_lines.size(), m = tgt_lines.size();
  bool bounded = window.mode == WindowPolicy::Mode::kBounded;
  if (window.mode == WindowPolicy::Mode::kAuto) {
    bounded = std::max(n, m) > WindowPolicy::kAutoUnboundedMax;
  }

  std::vector<PreparedLine> targets;
  targets.reserve(m);
  for (const auto &line : tgt_lines) targets.push_back(prepare(line, res));

  std::vector<Cell> cells;
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < n; ++i) {
    if (utf8::trim(trans_lines[i]).empty() || utf8::trim(src_lines[i]).empty()) continue;
    cand.clear();
    if (bounded && m > 0) {
      std::size_t center = suggestions.empty() ? (n <= 1 ? 0 : i * (m - 1) / (n - 1))
                                               : std::min(suggestions[i], m - 1);
      std::size_t lo = center > window.radius ? center - window.radius : 0;
      std::size_t hi = std::min(m - 1, center + window.radius);
      for (std::size_t j = lo; j <= hi; ++j) cand.push_back(j);
    } else {
      for (std::size_t j = 0; j < m; ++j) cand.push_back(j);
    }
    std::erase_if(cand, [&](std::size_t j) { return utf8::trim(tgt_lines[j]).empty(); });
    auto trans = prepare(trans_lines[i], res);
    decide(i, trans, cand, targets, tiers, res, &cells);
  }

  std::sort(cells.begin(), cells.end(), [](const Cell &x, const Cell &y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.src != y.src) return x.src < y.src;
    return x.tgt < y.tgt;
  });
  std::vector<bool> src_taken(n, false), tgt_taken(m, false);
  FilterResult result;
  for (const auto &c : cells) {
    if (src_taken[c.src] || tgt_taken[c.tgt]) continue;
    src_taken[c.src] = tgt_taken[c.tgt] = true;
    result.pairs.push_back({c.src, c.tgt, c.score, c.tier});
  }
  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const auto &x, const auto &y) { return x.src_index < y.src_index; });

  auto &report = result.report;
  report.candidates_in = n;
  report.accepted = result.pairs.size();
  report.rejected = n - report.accepted;
  report.per_tier.assign(tiers.size(), 0);
  for (const auto &p : result.pairs) ++report.per_tier[p.tier];
  return result;
}

}  // namespace bitext
