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

#include "bitext/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <set>

#include "bitext/error.hpp"
#include "bitext/io.hpp"

namespace bitext {
namespace {

constexpr std::array<LinkCategory, kNumCategories> kAllCategories = {
    LinkCategory::k0_1, LinkCategory::k1_0, LinkCategory::k1_1,
    LinkCategory::k1_2, LinkCategory::k2_1, LinkCategory::k2_2};

// DP preference on equal cost: 1-1 first, then category index order.
constexpr std::array<LinkCategory, kNumCategories> kTieOrder = {
    LinkCategory::k1_1, LinkCategory::k0_1, LinkCategory::k1_0,
    LinkCategory::k1_2, LinkCategory::k2_1, LinkCategory::k2_2};

// log(erfc(x)) for x >= 0, switching to the asymptotic series before erfc
// underflows.
double log_erfc(double x) {
  double e = std::erfc(x);
  if (e > 1e-280) return std::log(e);
  double inv = 1.0 / (2.0 * x * x);
  return -x * x - std::log(x) - 0.5 * std::log(std::numbers::pi) +
         std::log1p(-inv + 3.0 * inv * inv);
}

std::size_t span_chars(std::span<const Sentence> s) {
  std::size_t n = 0;
  for (const auto &x : s) n += x.char_len;
  return n;
}

std::string format_indices(const IndexSpan &span) {
  if (span.empty()) return "-";
  std::string out;
  for (std::size_t i = span.begin; i < span.end(); ++i) {
    if (i != span.begin) out.push_back(',');
    out += std::to_string(i);
  }
  return out;
}

IndexSpan parse_indices(const std::string &field, std::size_t lineno) {
  if (field == "-") return {};
  std::vector<std::size_t> idx;
  std::size_t start = 0;
  while (start <= field.size()) {
    auto comma = field.find(',', start);
    if (comma == std::string::npos) comma = field.size();
    auto part = field.substr(start, comma - start);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorKind::kInput, "alignment line " + std::to_string(lineno) +
                                         ": bad index list '" + field + "'");
    }
    idx.push_back(std::stoul(part));
    start = comma + 1;
  }
  for (std::size_t k = 1; k < idx.size(); ++k) {
    if (idx[k] != idx[k - 1] + 1) {
      throw Error(ErrorKind::kInput, "alignment line " + std::to_string(lineno) +
                                         ": indices must be contiguous");
    }
  }
  return {idx.front(), idx.size()};
}

LinkCategory category_for(std::size_t ns, std::size_t nt) {
  for (auto c : kAllCategories) {
    if (category_src_size(c) == ns && category_tgt_size(c) == nt) return c;
  }
  throw Error(ErrorKind::kInput, "unsupported link shape " + std::to_string(ns) +
                                     "-" + std::to_string(nt));
}

}  // namespace

const char *category_name(LinkCategory c) {
  static constexpr const char *kNames[] = {"0-1", "1-0", "1-1", "1-2", "2-1", "2-2"};
  return kNames[static_cast<std::size_t>(c)];
}

std::size_t category_src_size(LinkCategory c) {
  static constexpr std::size_t kSizes[] = {0, 1, 1, 1, 2, 2};
  return kSizes[static_cast<std::size_t>(c)];
}

std::size_t category_tgt_size(LinkCategory c) {
  static constexpr std::size_t kSizes[] = {1, 0, 1, 2, 1, 2};
  return kSizes[static_cast<std::size_t>(c)];
}

LinkCategory mirror(LinkCategory c) {
  switch (c) {
    case LinkCategory::k0_1: return LinkCategory::k1_0;
    case LinkCategory::k1_0: return LinkCategory::k0_1;
    case LinkCategory::k1_2: return LinkCategory::k2_1;
    case LinkCategory::k2_1: return LinkCategory::k1_2;
    default: return c;
  }
}

void validate_alignment(const SentenceAlignment &alignment, std::size_t n_src,
                        std::size_t n_tgt) {
  std::size_t next_src = 0, next_tgt = 0;
  for (const auto &link : alignment.links) {
    if (link.src.empty() && link.tgt.empty()) {
      throw Error(ErrorKind::kInput, "alignment link with both sides empty");
    }
    if (link.src.size != category_src_size(link.category) ||
        link.tgt.size != category_tgt_size(link.category)) {
      throw Error(ErrorKind::kInput, "alignment link size does not match its category");
    }
    if ((!link.src.empty() && link.src.begin != next_src) ||
        (!link.tgt.empty() && link.tgt.begin != next_tgt)) {
      throw Error(ErrorKind::kInput, "alignment links are not monotone and contiguous");
    }
    next_src += link.src.size;
    next_tgt += link.tgt.size;
  }
  if (next_src != n_src || next_tgt != n_tgt) {
    throw Error(ErrorKind::kInput, "alignment does not cover all sentences");
  }
}

void Lexicon::add(const std::string &src, const std::string &tgt, double score) {
  if (!(score > 0.0 && score <= 1.0)) {
    throw Error(ErrorKind::kInput, "lexicon score for (" + src + ", " + tgt +
                                       ") outside (0, 1]");
  }
  entries_[{src, tgt}] = score;
}

double Lexicon::score(const std::string &src, const std::string &tgt) const {
  auto it = entries_.find({src, tgt});
  return it == entries_.end() ? 0.0 : it->second;
}

void Lexicon::merge_max(const Lexicon &other) {
  for (const auto &[key, score] : other.entries_) {
    auto &slot = entries_[key];
    slot = std::max(slot, score);
  }
}

std::string Lexicon::to_tsv() const {
  std::string out;
  char buf[32];
  for (const auto &[key, score] : entries_) {
    std::snprintf(buf, sizeof buf, "%.6f", score);
    out += key.first + "\t" + key.second + "\t" + buf + "\n";
  }
  return out;
}

Lexicon Lexicon::from_tsv(const std::string &text, const std::string &origin) {
  Lexicon lex;
  std::size_t lineno = 0;
  for (const auto &line : io::split_lines(text)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    auto f = io::split_tabs(line);
    if (f.size() != 3 && f.size() != 2) {
      throw Error(ErrorKind::kInput, origin + ":" + std::to_string(lineno) +
                                         ": expected src<TAB>tgt<TAB>score");
    }
    double score = 1.0;
    if (f.size() == 3) {
      try {
        std::size_t used = 0;
        score = std::stod(f[2], &used);
        if (used != f[2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception &) {
        throw Error(ErrorKind::kInput, origin + ":" + std::to_string(lineno) +
                                           ": bad score '" + f[2] + "'");
      }
    }
    try {
      lex.add(f[0], f[1], score);
    } catch (const Error &e) {
      throw Error(ErrorKind::kInput, origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path &path) {
  return from_tsv(io::read_file(path), path.string());
}

double length_cost(std::size_t src_len, std::size_t tgt_len,
                   const AlignerParams &params) {
  const double l1 = static_cast<double>(src_len);
  const double l2 = static_cast<double>(tgt_len);
  const double mean = (l1 + l2 / params.mean_ratio) / 2.0;
  if (mean <= 0.0) return 0.0;
  const double delta = (l2 - l1 * params.mean_ratio) / std::sqrt(params.variance * mean);
  // Two-tailed: P(|Z| >= |delta|) = erfc(|delta| / sqrt(2)).
  return -log_erfc(std::fabs(delta) / std::numbers::sqrt2);
}

double link_base_cost(LinkCategory c, std::size_t src_len, std::size_t tgt_len,
                      const AlignerParams &params) {
  const double prior = -std::log(params.priors[static_cast<std::size_t>(c)]);
  // A sentence without a counterpart has no length ratio to score; the
  // prior alone prices the deletion.
  if (category_src_size(c) == 0 || category_tgt_size(c) == 0) return prior;
  return prior + length_cost(src_len, tgt_len, params);
}

LexiconIndex::LexiconIndex(const Lexicon &lex) {
  for (const auto &[key, score] : lex.entries()) {
    by_src_[key.first].emplace_back(key.second, score);
    by_tgt_[key.second].emplace_back(key.first, score);
  }
}

double LexiconIndex::coverage(std::span<const Sentence> src,
                              std::span<const Sentence> tgt) const {
  if (src.empty() || tgt.empty()) return 0.0;
  std::set<std::string_view> src_tokens, tgt_tokens;
  std::size_t n_src = 0, n_tgt = 0;
  for (const auto &s : src) {
    for (const auto &t : s.tokens) src_tokens.insert(t);
    n_src += s.tokens.size();
  }
  for (const auto &s : tgt) {
    for (const auto &t : s.tokens) tgt_tokens.insert(t);
    n_tgt += s.tokens.size();
  }
  if (n_src + n_tgt == 0) return 0.0;
  auto best = [](const auto &index, const std::string &tok,
                 const std::set<std::string_view> &other) {
    auto it = index.find(tok);
    double b = 0.0;
    if (it == index.end()) return b;
    for (const auto &[w, score] : it->second) {
      if (score > b && other.count(w)) b = score;
    }
    return b;
  };
  double covered = 0.0;
  for (const auto &s : src) {
    for (const auto &t : s.tokens) covered += best(by_src_, t, tgt_tokens);
  }
  for (const auto &s : tgt) {
    for (const auto &t : s.tokens) covered += best(by_tgt_, t, src_tokens);
  }
  return covered / static_cast<double>(n_src + n_tgt);
}

SentenceAlignment align_length_based(std::span<const Sentence> src,
                                     std::span<const Sentence> tgt,
                                     const AlignerParams &params) {
  return align_with_lexicon(src, tgt, params, nullptr);
}

SentenceAlignment align_with_lexicon(std::span<const Sentence> src,
                                     std::span<const Sentence> tgt,
                                     const AlignerParams &params,
                                     const Lexicon *lex) {
  const std::size_t n = src.size(), m = tgt.size();
  std::optional<LexiconIndex> index;
  if (lex && !lex->empty() && params.lexical_weight != 0.0) index.emplace(*lex);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t width = m + 1;
  std::vector<double> cost((n + 1) * width, kInf);
  std::vector<signed char> back((n + 1) * width, -1);
  std::vector<double> step_cost((n + 1) * width, 0.0);
  cost[0] = 0.0;

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      double best = kInf;
      signed char best_cat = -1;
      double best_step = 0.0;
      for (auto c : kTieOrder) {
        const std::size_t di = category_src_size(c), dj = category_tgt_size(c);
        if (di > i || dj > j) continue;
        const double prev = cost[(i - di) * width + (j - dj)];
        if (prev == kInf) continue;
        auto s = src.subspan(i - di, di);
        auto t = tgt.subspan(j - dj, dj);
        double step = link_base_cost(c, span_chars(s), span_chars(t), params);
        if (index) step -= params.lexical_weight * index->coverage(s, t);
        const double total = prev + step;
        if (total < best) {
          best = total;
          best_cat = static_cast<signed char>(c);
          best_step = step;
        }
      }
      cost[i * width + j] = best;
      back[i * width + j] = best_cat;
      step_cost[i * width + j] = best_step;
    }
  }

  SentenceAlignment out;
  out.total_cost = cost[n * width + m];
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    auto c = static_cast<LinkCategory>(back[i * width + j]);
    const std::size_t di = category_src_size(c), dj = category_tgt_size(c);
    AlignmentLink link;
    link.category = c;
    link.src = {i - di, di};
    link.tgt = {j - dj, dj};
    link.score = step_cost[i * width + j];
    out.links.push_back(link);
    i -= di;
    j -= dj;
  }
  std::reverse(out.links.begin(), out.links.end());
  // Empty sides start at the running position for readability.
  std::size_t si = 0, tj = 0;
  for (auto &link : out.links) {
    if (link.src.empty()) link.src.begin = si;
    if (link.tgt.empty()) link.tgt.begin = tj;
    si += link.src.size;
    tj += link.tgt.size;
  }
  return out;
}

Lexicon build_auto_lexicon(std::span<const Sentence> src,
                           std::span<const Sentence> tgt,
                           const SentenceAlignment &alignment,
                           std::size_t min_count, double score_floor) {
  if (min_count == 0) {
    throw Error(ErrorKind::kInvalidArgument, "min_count must be positive");
  }
  std::map<std::string, std::size_t> src_count, tgt_count;
  std::map<std::pair<std::string, std::string>, std::size_t> joint;
  for (const auto &link : alignment.links) {
    if (link.category != LinkCategory::k1_1) continue;
    std::set<std::string> s(src[link.src.begin].tokens.begin(),
                            src[link.src.begin].tokens.end());
    std::set<std::string> t(tgt[link.tgt.begin].tokens.begin(),
                            tgt[link.tgt.begin].tokens.end());
    for (const auto &a : s) ++src_count[a];
    for (const auto &b : t) ++tgt_count[b];
    for (const auto &a : s) {
      for (const auto &b : t) ++joint[{a, b}];
    }
  }
  Lexicon lex;
  for (const auto &[key, count] : joint) {
    if (count < min_count) continue;
    const double denom = static_cast<double>(
        std::max(src_count[key.first], tgt_count[key.second]));
    const double score = static_cast<double>(count) / denom;
    if (score >= score_floor) lex.add(key.first, key.second, score);
  }
  return lex;
}

TwoPassResult align_two_pass(std::span<const Sentence> src,
                             std::span<const Sentence> tgt,
                             const Lexicon *external_lexicon,
                             const AlignerParams &params) {
  auto first = align_with_lexicon(src, tgt, params, external_lexicon);
  TwoPassResult result;
  result.lexicon = build_auto_lexicon(src, tgt, first, params.min_count,
                                      params.lexicon_floor);
  if (external_lexicon) result.lexicon.merge_max(*external_lexicon);
  result.alignment = result.lexicon.empty()
                         ? std::move(first)
                         : align_with_lexicon(src, tgt, params, &result.lexicon);
  return result;
}

std::string format_alignment_tsv(const SentenceAlignment &alignment) {
  std::string out;
  char buf[32];
  for (const auto &link : alignment.links) {
    std::snprintf(buf, sizeof buf, "%.6f", link.score);
    out += format_indices(link.src) + "\t" + format_indices(link.tgt) + "\t" + buf + "\n";
  }
  return out;
}

SentenceAlignment parse_alignment_tsv(const std::string &text) {
  SentenceAlignment out;
  std::size_t lineno = 0, si = 0, tj = 0;
  for (const auto &line : io::split_lines(text)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = io::split_tabs(line);
    if (f.size() != 3) {
      throw Error(ErrorKind::kInput, "alignment line " + std::to_string(lineno) +
                                         ": expected 3 tab-separated fields");
    }
    AlignmentLink link;
    link.src = parse_indices(f[0], lineno);
    link.tgt = parse_indices(f[1], lineno);
    if (link.src.empty()) link.src.begin = si;
    if (link.tgt.empty()) link.tgt.begin = tj;
    link.category = category_for(link.src.size, link.tgt.size);
    try {
      link.score = std::stod(f[2]);
    } catch (const std::exception &) {
      throw Error(ErrorKind::kInput, "alignment line " + std::to_string(lineno) +
                                         ": bad score '" + f[2] + "'");
    }
    si = link.src.end();
    tj = link.tgt.end();
    out.total_cost += link.score;
    out.links.push_back(link);
  }
  return out;
}

}  // namespace bitext
