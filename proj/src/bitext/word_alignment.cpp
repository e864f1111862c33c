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

#include "bitext/word_alignment.hpp"

#include <algorithm>
#include <charconv>

#include "bitext/error.hpp"
#include "bitext/utf8.hpp"

namespace bitext {
namespace {

constexpr int kNeighbors[8][2] = {{-1, 0}, {0, -1}, {1, 0}, {0, 1},
                                  {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};

std::size_t parse_index(std::string_view s, std::string_view token) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorKind::kInput, "bad alignment point '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace

void WordAlignmentSet::validate() const {
  for (const auto &[s, t] : points) {
    if (s >= src_len || t >= tgt_len) {
      throw Error(ErrorKind::kInput, "alignment point " + std::to_string(s) + "-" +
                                         std::to_string(t) + " outside " +
                                         std::to_string(src_len) + "x" +
                                         std::to_string(tgt_len));
    }
  }
}

WordAlignmentSet symmetrize_gdfa(const WordAlignmentSet &forward,
                                 const WordAlignmentSet &backward) {
  if (forward.src_len != backward.src_len || forward.tgt_len != backward.tgt_len) {
    throw Error(ErrorKind::kInput, "forward and backward alignments disagree on lengths");
  }
  forward.validate();
  backward.validate();
  const std::size_t ns = forward.src_len, nt = forward.tgt_len;

  std::set<AlignmentPoint> uni = forward.points;
  uni.insert(backward.points.begin(), backward.points.end());

  WordAlignmentSet out;
  out.src_len = ns;
  out.tgt_len = nt;
  std::vector<bool> src_aligned(ns, false), tgt_aligned(nt, false);
  auto add = [&](std::size_t s, std::size_t t) {
    out.points.insert({s, t});
    src_aligned[s] = true;
    tgt_aligned[t] = true;
  };
  for (const auto &p : forward.points) {
    if (backward.points.count(p)) add(p.first, p.second);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = out.points.begin(); it != out.points.end() && !changed; ++it) {
      const auto [s, t] = *it;
      for (const auto &d : kNeighbors) {
        const long long ns2 = static_cast<long long>(s) + d[0];
        const long long nt2 = static_cast<long long>(t) + d[1];
        if (ns2 < 0 || nt2 < 0 || ns2 >= static_cast<long long>(ns) ||
            nt2 >= static_cast<long long>(nt)) {
          continue;
        }
        const AlignmentPoint q{static_cast<std::size_t>(ns2), static_cast<std::size_t>(nt2)};
        if (out.points.count(q) || !uni.count(q)) continue;
        if (src_aligned[q.first] && tgt_aligned[q.second]) continue;
        add(q.first, q.second);
        changed = true;  // iterators stay valid; rescan from the start
        break;
      }
    }
  }

  for (const auto &[s, t] : uni) {
    if (!src_aligned[s] && !tgt_aligned[t]) add(s, t);
  }
  return out;
}

const char *orientation_name(Orientation o) {
  switch (o) {
    case Orientation::kMonotone: return "monotone";
    case Orientation::kSwap: return "swap";
    case Orientation::kDiscontinuous: return "discontinuous";
  }
  return "?";
}

char orientation_letter(Orientation o) {
  switch (o) {
    case Orientation::kMonotone: return 'M';
    case Orientation::kSwap: return 'S';
    case Orientation::kDiscontinuous: return 'D';
  }
  return '?';
}

Orientation classify_orientation(const PhrasePair &prev, const PhrasePair &curr) {
  const bool src_contiguous = curr.src.start == prev.src.end + 1;
  if (src_contiguous && curr.tgt.start == prev.tgt.end + 1) return Orientation::kMonotone;
  if (curr.src.start > prev.src.end && curr.tgt.end + 1 == prev.tgt.start) {
    return Orientation::kSwap;
  }
  return Orientation::kDiscontinuous;
}

WordAlignmentSet parse_pharaoh(std::string_view line) {
  WordAlignmentSet a;
  for (const auto &tok : utf8::split_ws(line)) {
    auto dash = tok.find('-');
    if (dash == std::string::npos) {
      throw Error(ErrorKind::kInput, "bad alignment point '" + tok + "'");
    }
    std::string_view sv(tok);
    const std::size_t s = parse_index(sv.substr(0, dash), tok);
    const std::size_t t = parse_index(sv.substr(dash + 1), tok);
    a.points.insert({s, t});
    a.src_len = std::max(a.src_len, s + 1);
    a.tgt_len = std::max(a.tgt_len, t + 1);
  }
  return a;
}

std::string format_pharaoh(const WordAlignmentSet &a) {
  std::string out;
  for (const auto &[s, t] : a.points) {
    if (!out.empty()) out += ' ';
    out += std::to_string(s) + "-" + std::to_string(t);
  }
  return out;
}

std::vector<std::string> symmetrize_pharaoh_lines(const std::vector<std::string> &forward,
                                                  const std::vector<std::string> &backward) {
  if (forward.size() != backward.size()) {
    throw Error(ErrorKind::kInput, "forward has " + std::to_string(forward.size()) +
                                       " lines, backward has " +
                                       std::to_string(backward.size()));
  }
  std::vector<std::string> out;
  out.reserve(forward.size());
  for (std::size_t i = 0; i < forward.size(); ++i) {
    try {
      auto f = parse_pharaoh(forward[i]);
      auto b = parse_pharaoh(backward[i]);
      f.src_len = b.src_len = std::max(f.src_len, b.src_len);
      f.tgt_len = b.tgt_len = std::max(f.tgt_len, b.tgt_len);
      out.push_back(format_pharaoh(symmetrize_gdfa(f, b)));
    } catch (const Error &e) {
      throw Error(e.kind(), "line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace bitext
