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

#ifndef BITEXT_IO_HPP_
#define BITEXT_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bitext::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path &path);

// Writes through a temporary sibling and renames over the target.
void write_file(const fs::path &path, std::string_view content);

// One entry per LF-terminated line; a trailing CR is dropped. A final line
// without LF is still returned.
std::vector<std::string> read_lines(const fs::path &path);
std::vector<std::string> split_lines(std::string_view content);

// Joins with LF and terminates the last line.
std::string join_lines(const std::vector<std::string> &lines);
void write_lines(const fs::path &path, const std::vector<std::string> &lines);

// Reads a one-entry-per-line list, skipping blank lines and '#' comments.
std::vector<std::string> read_list(const fs::path &path);

std::string sha256_hex(std::string_view data);

// Tab-separated fields; an empty line yields one empty field.
std::vector<std::string> split_tabs(std::string_view line);

}  // namespace bitext::io

#endif  // BITEXT_IO_HPP_
