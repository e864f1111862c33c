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

#ifndef BITEXT_HTML_HPP_
#define BITEXT_HTML_HPP_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bitext::html {

struct Node {
  enum class Kind { kElement, kText };

  Kind kind = Kind::kElement;
  std::string tag;  // lowercase; empty for the document root
  std::map<std::string, std::string> attrs;
  std::string text;  // entity-decoded, for text nodes
  std::vector<std::unique_ptr<Node>> children;
  Node *parent = nullptr;

  bool is_element() const { return kind == Kind::kElement; }
  const std::string *attr(const std::string &name) const;
  bool has_class(std::string_view cls) const;
};

// Error-tolerant parse: unknown end tags are ignored, unclosed elements are
// closed at end of input, and the usual implicit closes (p, li, td, tr,
// option) are applied. Script and style bodies are dropped.
std::unique_ptr<Node> parse(std::string_view markup);

std::string decode_entities(std::string_view text);
std::string escape(std::string_view text);

// Concatenated descendant text, whitespace left as found.
std::string inner_text(const Node &node);

// CSS subset: tag, *, .class, #id, [attr], [attr=value] compounds joined by
// descendant (space) or child (>) combinators, comma-separated alternatives.
class Selector {
 public:
  Selector() = default;
  explicit Selector(std::string_view source);

  bool matches(const Node &node) const;
  bool empty() const { return alternatives_.empty(); }

 private:
  struct Compound {
    std::string tag;
    std::string id;
    std::vector<std::string> classes;
    std::vector<std::pair<std::string, std::string>> attrs;  // value "" = any
    std::vector<bool> attr_has_value;
  };
  struct Step {
    Compound compound;
    bool child = false;  // combinator joining this step to the previous one
  };
  using Complex = std::vector<Step>;

  static bool match_compound(const Compound &c, const Node &node);
  static bool match_from(const Complex &cx, std::size_t idx, const Node &node);

  std::vector<Complex> alternatives_;
};

// Document-order list of elements matching the selector under root.
std::vector<const Node *> select_all(const Node &root, const Selector &sel);
const Node *select_first(const Node &root, const Selector &sel);

}  // namespace bitext::html

#endif  // BITEXT_HTML_HPP_
