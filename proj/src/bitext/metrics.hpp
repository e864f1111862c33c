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

#ifndef BITEXT_METRICS_HPP_
#define BITEXT_METRICS_HPP_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bitext/textproc.hpp"

namespace bitext {

struct EvalPair {
  Tokens candidate;
  std::vector<Tokens> references;
};

struct MetricReport {
  double bleu = 0.0;
  double nist = 0.0;
  double meteor = 0.0;
  double ter = 0.0;
  std::size_t segment_count = 0;

  // bleu, meteor and ter scaled by 100 when percent is set.
  std::string to_json(bool percent = false) const;
};

struct NgramPrecision {
  std::size_t matched = 0;
  std::size_t total = 0;  // candidate n-grams
  double value() const {
    return total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total);
  }
};

// Corpus-level n-gram precision, clipped by the largest count in any single
// reference; `clip` = false gives the plain precision.
NgramPrecision ngram_precision(std::span<const EvalPair> corpus, std::size_t n,
                               bool clip = true);

double bleu(std::span<const EvalPair> corpus, std::size_t max_n = 4);

// log2(count(w1..wn-1) / count(w1..wn)) over all references of the corpus.
class NistWeights {
 public:
  explicit NistWeights(std::span<const EvalPair> corpus);
  double info(std::span<const std::string> ngram) const;

 private:
  std::map<Tokens, std::size_t> counts_;
  std::size_t unigrams_ = 0;
};

double nist(std::span<const EvalPair> corpus, std::size_t max_n = 5);

struct MeteorStats {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  std::size_t cand_len = 0;
  std::size_t ref_len = 0;
  double score() const;
};

// Exact-match alignment of one candidate against one reference: maximum
// matches, chunks kept low by taking the longest common runs first.
MeteorStats meteor_align(std::span<const std::string> cand,
                         std::span<const std::string> ref);

// Mean over segments of the best per-reference score.
double meteor(std::span<const EvalPair> corpus);

struct TerStats {
  std::size_t edits = 0;   // shifts + insertions + deletions + substitutions
  std::size_t shifts = 0;
  std::size_t ref_len = 0;
};

std::size_t word_edit_distance(std::span<const std::string> a,
                               std::span<const std::string> b);

// Greedy shift search: keep applying the shift that lowers the edit
// distance most, while the saving exceeds the cost of the shift.
TerStats ter_segment(std::span<const std::string> cand,
                     std::span<const std::string> ref);

double ter(std::span<const EvalPair> corpus);

MetricReport evaluate(std::span<const EvalPair> corpus);

// One segment per line; every reference file must match the candidate's
// line count. Lines go through tokenize().
std::vector<EvalPair> load_eval_corpus(const std::filesystem::path &cand,
                                       const std::vector<std::filesystem::path> &refs);

}  // namespace bitext

#endif  // BITEXT_METRICS_HPP_
