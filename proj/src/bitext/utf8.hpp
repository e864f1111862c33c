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

#ifndef BITEXT_UTF8_HPP_
#define BITEXT_UTF8_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace bitext::utf8 {

// Decodes UTF-8 into code points. Malformed bytes decode to U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
void append(std::string &out, char32_t cp);

// Case mapping covers ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic.
char32_t to_lower(char32_t cp);
bool is_upper(char32_t cp);
std::string lower(std::string_view text);

bool is_space(char32_t cp);
bool is_punct(char32_t cp);

// Number of code points that are not whitespace.
std::size_t visible_length(std::string_view text);

std::string trim(std::string_view text);

// Collapses whitespace runs to a single ASCII space and trims the ends.
std::string normalize_space(std::string_view text);

std::vector<std::string> split_ws(std::string_view text);

}  // namespace bitext::utf8

#endif  // BITEXT_UTF8_HPP_
