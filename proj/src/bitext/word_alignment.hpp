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

#ifndef BITEXT_WORD_ALIGNMENT_HPP_
#define BITEXT_WORD_ALIGNMENT_HPP_

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bitext {

using AlignmentPoint = std::pair<std::size_t, std::size_t>;  // (src, tgt)

struct WordAlignmentSet {
  std::set<AlignmentPoint> points;
  std::size_t src_len = 0;
  std::size_t tgt_len = 0;

  // Throws Error(kInput) for a point outside the sentence lengths.
  void validate() const;
  friend bool operator==(const WordAlignmentSet &, const WordAlignmentSet &) = default;
};

// grow-diag-final-and. Growing scans the current points in row-major order
// and restarts after every addition; the final step scans the union in
// row-major order.
WordAlignmentSet symmetrize_gdfa(const WordAlignmentSet &forward,
                                 const WordAlignmentSet &backward);

enum class Orientation { kMonotone, kSwap, kDiscontinuous };

const char *orientation_name(Orientation o);
char orientation_letter(Orientation o);  // M, S or D

// Inclusive token range.
struct TokenRange {
  std::size_t start = 0;
  std::size_t end = 0;
};

struct PhrasePair {
  TokenRange src;
  TokenRange tgt;
};

Orientation classify_orientation(const PhrasePair &prev, const PhrasePair &curr);

// Pharaoh "i-j i-j ..." with 0-based indices. Lengths are set to one past
// the largest index seen.
WordAlignmentSet parse_pharaoh(std::string_view line);
std::string format_pharaoh(const WordAlignmentSet &a);

// Line-by-line symmetrization of two Pharaoh files' contents. Both
// directions of a line share src/tgt lengths taken from their larger
// extents.
std::vector<std::string> symmetrize_pharaoh_lines(const std::vector<std::string> &forward,
                                                  const std::vector<std::string> &backward);

}  // namespace bitext

#endif  // BITEXT_WORD_ALIGNMENT_HPP_
