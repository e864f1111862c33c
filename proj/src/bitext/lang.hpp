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

#ifndef BITEXT_LANG_HPP_
#define BITEXT_LANG_HPP_

#include <compare>
#include <string>
#include <string_view>

#include "bitext/error.hpp"

namespace bitext {

// ISO-639-1 language code: exactly two lowercase ASCII letters.
class LangCode {
 public:
  LangCode() = default;
  explicit LangCode(std::string_view code) : code_(code) {
    if (!valid(code)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "invalid language code '" + std::string(code) +
                      "' (expected two lowercase letters)");
    }
  }

  static bool valid(std::string_view code) {
    return code.size() == 2 && code[0] >= 'a' && code[0] <= 'z' &&
           code[1] >= 'a' && code[1] <= 'z';
  }

  const std::string &str() const { return code_; }
  bool empty() const { return code_.empty(); }

  friend auto operator<=>(const LangCode &, const LangCode &) = default;

 private:
  std::string code_;
};

}  // namespace bitext

#endif  // BITEXT_LANG_HPP_
