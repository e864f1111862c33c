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

#include "bitext/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bitext/error.hpp"
#include "bitext/io.hpp"
#include "json.hpp"

namespace bitext {
namespace {

using NgramCounts = std::map<Tokens, std::size_t>;

NgramCounts count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Tokens(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

// Largest count of each n-gram in any one reference.
NgramCounts max_ref_counts(const std::vector<Tokens> &refs, std::size_t n) {
  NgramCounts out;
  for (const auto &ref : refs) {
    for (const auto &[gram, c] : count_ngrams(ref, n)) {
      auto &slot = out[gram];
      slot = std::max(slot, c);
    }
  }
  return out;
}

void check_corpus(std::span<const EvalPair> corpus) {
  if (corpus.empty()) throw Error(ErrorKind::kInput, "evaluation corpus is empty");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].references.empty()) {
      throw Error(ErrorKind::kInput,
                  "segment " + std::to_string(i) + " has no reference");
    }
  }
}

std::size_t closest_ref_len(const EvalPair &p) {
  const auto c = static_cast<long long>(p.candidate.size());
  std::size_t best = p.references.front().size();
  for (const auto &ref : p.references) {
    const auto r = static_cast<long long>(ref.size());
    const auto b = static_cast<long long>(best);
    if (std::llabs(r - c) < std::llabs(b - c) ||
        (std::llabs(r - c) == std::llabs(b - c) && r < b)) {
      best = ref.size();
    }
  }
  return best;
}

bool contains_phrase(std::span<const std::string> hay,
                     std::span<const std::string> needle) {
  if (needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

constexpr std::size_t kMaxShiftLength = 10;

}  // namespace

std::string MetricReport::to_json(bool percent) const {
  const double scale = percent ? 100.0 : 1.0;
  nlohmann::json j;
  j["bleu"] = bleu * scale;
  j["nist"] = nist;
  j["meteor"] = meteor * scale;
  j["ter"] = ter * scale;
  j["segment_count"] = segment_count;
  return j.dump(2) + "\n";
}

NgramPrecision ngram_precision(std::span<const EvalPair> corpus, std::size_t n,
                               bool clip) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "n-gram order must be positive");
  NgramPrecision p;
  for (const auto &pair : corpus) {
    auto cand = count_ngrams(pair.candidate, n);
    auto refs = max_ref_counts(pair.references, n);
    for (const auto &[gram, c] : cand) {
      p.total += c;
      auto it = refs.find(gram);
      if (it == refs.end()) continue;
      p.matched += clip ? std::min(c, it->second) : c;
    }
  }
  return p;
}

double bleu(std::span<const EvalPair> corpus, std::size_t max_n) {
  check_corpus(corpus);
  if (max_n == 0) throw Error(ErrorKind::kInvalidArgument, "max_n must be positive");
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto p = ngram_precision(corpus, n);
    if (p.matched == 0) return 0.0;
    log_sum += std::log(p.value());
  }
  std::size_t c = 0, r = 0;
  for (const auto &pair : corpus) {
    c += pair.candidate.size();
    r += closest_ref_len(pair);
  }
  const double bp =
      c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return std::clamp(bp * std::exp(log_sum / static_cast<double>(max_n)), 0.0, 1.0);
}

NistWeights::NistWeights(std::span<const EvalPair> corpus) {
  for (const auto &pair : corpus) {
    for (const auto &ref : pair.references) {
      unigrams_ += ref.size();
      for (std::size_t i = 0; i < ref.size(); ++i) {
        for (std::size_t j = i + 1; j <= ref.size(); ++j) {
          ++counts_[Tokens(ref.begin() + i, ref.begin() + j)];
        }
      }
    }
  }
}

double NistWeights::info(std::span<const std::string> ngram) const {
  if (ngram.empty()) return 0.0;
  auto it = counts_.find(Tokens(ngram.begin(), ngram.end()));
  if (it == counts_.end()) return 0.0;
  std::size_t context = unigrams_;
  if (ngram.size() > 1) {
    auto ctx = counts_.find(Tokens(ngram.begin(), ngram.end() - 1));
    context = ctx == counts_.end() ? 0 : ctx->second;
  }
  if (context == 0) return 0.0;
  return std::log2(static_cast<double>(context) / static_cast<double>(it->second));
}

double nist(std::span<const EvalPair> corpus, std::size_t max_n) {
  check_corpus(corpus);
  if (max_n == 0) throw Error(ErrorKind::kInvalidArgument, "max_n must be positive");
  NistWeights weights(corpus);
  double score = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    double info_sum = 0.0;
    std::size_t total = 0;
    for (const auto &pair : corpus) {
      auto cand = count_ngrams(pair.candidate, n);
      auto refs = max_ref_counts(pair.references, n);
      for (const auto &[gram, c] : cand) {
        total += c;
        auto it = refs.find(gram);
        if (it == refs.end()) continue;
        info_sum += static_cast<double>(std::min(c, it->second)) * weights.info(gram);
      }
    }
    if (total > 0) score += info_sum / static_cast<double>(total);
  }
  double c = 0.0, r = 0.0;
  for (const auto &pair : corpus) {
    c += static_cast<double>(pair.candidate.size());
    double sum = 0.0;
    for (const auto &ref : pair.references) sum += static_cast<double>(ref.size());
    r += sum / static_cast<double>(pair.references.size());
  }
  double penalty = 1.0;
  if (r > 0.0 && c < r) {
    if (c == 0.0) return 0.0;
    const double beta = std::log(0.5) / std::pow(std::log(1.5), 2.0);
    penalty = std::exp(beta * std::pow(std::log(c / r), 2.0));
  }
  return score * penalty;
}

double MeteorStats::score() const {
  if (matches == 0) return 0.0;
  const double m = static_cast<double>(matches);
  const double p = m / static_cast<double>(cand_len);
  const double r = m / static_cast<double>(ref_len);
  const double f = 10.0 * p * r / (r + 9.0 * p);
  const double penalty = 0.5 * std::pow(static_cast<double>(chunks) / m, 3.0);
  return f * (1.0 - penalty);
}

MeteorStats meteor_align(std::span<const std::string> cand,
                         std::span<const std::string> ref) {
  MeteorStats st;
  st.cand_len = cand.size();
  st.ref_len = ref.size();
  std::vector<bool> used_c(cand.size(), false), used_r(ref.size(), false);
  std::vector<std::size_t> link(cand.size(), std::numeric_limits<std::size_t>::max());
  for (;;) {
    std::size_t bi = 0, bj = 0, blen = 0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (used_c[i]) continue;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        std::size_t k = 0;
        while (i + k < cand.size() && j + k < ref.size() && !used_c[i + k] &&
               !used_r[j + k] && cand[i + k] == ref[j + k]) {
          ++k;
        }
        if (k > blen) {
          bi = i;
          bj = j;
          blen = k;
        }
      }
    }
    if (blen == 0) break;
    for (std::size_t k = 0; k < blen; ++k) {
      used_c[bi + k] = used_r[bj + k] = true;
      link[bi + k] = bj + k;
    }
    st.matches += blen;
  }
  const auto none = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (link[i] == none) continue;
    const bool continues = i > 0 && link[i - 1] != none && link[i - 1] + 1 == link[i];
    if (!continues) ++st.chunks;
  }
  return st;
}

double meteor(std::span<const EvalPair> corpus) {
  check_corpus(corpus);
  double sum = 0.0;
  for (const auto &pair : corpus) {
    double best = 0.0;
    for (const auto &ref : pair.references) {
      best = std::max(best, meteor_align(pair.candidate, ref).score());
    }
    sum += best;
  }
  return std::clamp(sum / static_cast<double>(corpus.size()), 0.0, 1.0);
}

std::size_t word_edit_distance(std::span<const std::string> a,
                               std::span<const std::string> b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

TerStats ter_segment(std::span<const std::string> cand,
                     std::span<const std::string> ref) {
  TerStats st;
  st.ref_len = ref.size();
  Tokens cur(cand.begin(), cand.end());
  std::size_t ed = word_edit_distance(cur, ref);
  Tokens moved;
  moved.reserve(cur.size());
  while (ed > 1) {
    std::size_t best_ed = ed;
    Tokens best;
    const std::size_t n = cur.size();
    for (std::size_t start = 0; start < n; ++start) {
      for (std::size_t len = 1; len <= kMaxShiftLength && start + len <= n; ++len) {
        std::span<const std::string> phrase(cur.data() + start, len);
        if (!contains_phrase(ref, phrase)) break;
        // dest indexes the sequence with the phrase taken out.
        for (std::size_t dest = 0; dest + len <= n; ++dest) {
          if (dest == start) continue;
          moved.clear();
          for (std::size_t k = 0; k < n; ++k) {
            if (k < start || k >= start + len) moved.push_back(cur[k]);
          }
          moved.insert(moved.begin() + static_cast<std::ptrdiff_t>(dest),
                       phrase.begin(), phrase.end());
          const std::size_t e = word_edit_distance(moved, ref);
          if (e < best_ed) {
            best_ed = e;
            best = moved;
          }
        }
      }
    }
    if (best_ed + 1 >= ed) break;
    cur = std::move(best);
    ed = best_ed;
    ++st.shifts;
  }
  st.edits = ed + st.shifts;
  return st;
}

double ter(std::span<const EvalPair> corpus) {
  check_corpus(corpus);
  std::size_t edits = 0, ref_words = 0;
  for (const auto &pair : corpus) {
    TerStats best;
    bool first = true;
    for (const auto &ref : pair.references) {
      auto st = ter_segment(pair.candidate, ref);
      if (first || st.edits < best.edits) best = st;
      first = false;
    }
    edits += best.edits;
    ref_words += best.ref_len;
  }
  // With no reference words at all, every edit counts as a full error.
  if (ref_words == 0) return static_cast<double>(edits);
  return static_cast<double>(edits) / static_cast<double>(ref_words);
}

MetricReport evaluate(std::span<const EvalPair> corpus) {
  MetricReport r;
  r.bleu = bleu(corpus);
  r.nist = nist(corpus);
  r.meteor = meteor(corpus);
  r.ter = ter(corpus);
  r.segment_count = corpus.size();
  return r;
}

std::vector<EvalPair> load_eval_corpus(const std::filesystem::path &cand,
                                       const std::vector<std::filesystem::path> &refs) {
  if (refs.empty()) throw Error(ErrorKind::kInput, "at least one reference file required");
  auto cand_lines = io::read_lines(cand);
  std::vector<EvalPair> corpus(cand_lines.size());
  for (std::size_t i = 0; i < cand_lines.size(); ++i) {
    corpus[i].candidate = tokenize(cand_lines[i]);
  }
  for (const auto &path : refs) {
    auto lines = io::read_lines(path);
    if (lines.size() != cand_lines.size()) {
      throw Error(ErrorKind::kInput, path.string() + " has " + std::to_string(lines.size()) +
                                         " lines, candidate has " +
                                         std::to_string(cand_lines.size()));
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
      corpus[i].references.push_back(tokenize(lines[i]));
    }
  }
  return corpus;
}

}  // namespace bitext
