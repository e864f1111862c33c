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

#include "bitext/html.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "bitext/error.hpp"
#include "bitext/utf8.hpp"

namespace bitext::html {
namespace {

const std::set<std::string_view> kVoidTags = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr"};

// Tags whose start implicitly closes an open <p>.
const std::set<std::string_view> kClosesParagraph = {
    "address", "article", "aside", "blockquote", "div", "dl", "fieldset",
    "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "header", "hr", "main", "nav", "ol", "p", "pre", "section", "table",
    "ul"};

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
         c == ':';
}

std::size_t find_ci(std::string_view hay, std::string_view needle,
                    std::size_t from) {
  if (needle.empty()) return from;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < needle.size() && ok; ++k) {
      ok = std::tolower(static_cast<unsigned char>(hay[i + k])) ==
           std::tolower(static_cast<unsigned char>(needle[k]));
    }
    if (ok) return i;
  }
  return std::string_view::npos;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {
    root_ = std::make_unique<Node>();
    stack_.push_back(root_.get());
  }

  std::unique_ptr<Node> run() {
    std::size_t text_start = 0;
    while (pos_ < src_.size()) {
      if (src_[pos_] != '<') {
        ++pos_;
        continue;
      }
      std::size_t lt = pos_;
      if (!markup_at(lt)) {
        ++pos_;
        continue;
      }
      add_text(src_.substr(text_start, lt - text_start));
      consume_markup();
      text_start = pos_;
    }
    add_text(src_.substr(text_start));
    return std::move(root_);
  }

 private:
  bool markup_at(std::size_t p) const {
    if (p + 1 >= src_.size()) return false;
    char c = src_[p + 1];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '/' ||
           c == '!' || c == '?';
  }

  Node *top() { return stack_.back(); }

  void add_text(std::string_view raw) {
    if (raw.empty()) return;
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::kText;
    node->text = decode_entities(raw);
    node->parent = top();
    top()->children.push_back(std::move(node));
  }

  void consume_markup() {
    if (src_.compare(pos_, 4, "<!--") == 0) {
      auto end = src_.find("-->", pos_ + 4);
      pos_ = end == std::string_view::npos ? src_.size() : end + 3;
      return;
    }
    if (src_[pos_ + 1] == '!' || src_[pos_ + 1] == '?') {
      auto end = src_.find('>', pos_);
      pos_ = end == std::string_view::npos ? src_.size() : end + 1;
      return;
    }
    if (src_[pos_ + 1] == '/') {
      std::size_t p = pos_ + 2;
      std::size_t b = p;
      while (p < src_.size() && is_name_char(src_[p])) ++p;
      auto name = to_lower_ascii(src_.substr(b, p - b));
      auto end = src_.find('>', p);
      pos_ = end == std::string_view::npos ? src_.size() : end + 1;
      close_tag(name);
      return;
    }
    parse_start_tag();
  }

  void close_tag(const std::string &name) {
    for (std::size_t i = stack_.size(); i > 1; --i) {
      if (stack_[i - 1]->tag == name) {
        stack_.resize(i - 1);
        return;
      }
    }
  }

  bool in_scope(std::string_view tag, std::initializer_list<std::string_view> barriers) const {
    for (std::size_t i = stack_.size(); i > 1; --i) {
      const auto &t = stack_[i - 1]->tag;
      if (t == tag) return true;
      for (auto b : barriers) {
        if (t == b) return false;
      }
    }
    return false;
  }

  void implicit_close(const std::string &tag) {
    if (kClosesParagraph.count(tag) && in_scope("p", {"div", "td", "th", "li", "table", "blockquote", "section"})) {
      close_tag("p");
    }
    if (tag == "li" && in_scope("li", {"ul", "ol"})) close_tag("li");
    if ((tag == "dt" || tag == "dd")) {
      if (in_scope("dt", {"dl"})) close_tag("dt");
      if (in_scope("dd", {"dl"})) close_tag("dd");
    }
    if ((tag == "td" || tag == "th" || tag == "tr")) {
      if (in_scope("td", {"tr", "table"})) close_tag("td");
      if (in_scope("th", {"tr", "table"})) close_tag("th");
    }
    if (tag == "tr" && in_scope("tr", {"table"})) close_tag("tr");
    if (tag == "option" && in_scope("option", {"select"})) close_tag("option");
  }

  void parse_start_tag() {
    std::size_t p = pos_ + 1;
    std::size_t b = p;
    while (p < src_.size() && is_name_char(src_[p])) ++p;
    auto node = std::make_unique<Node>();
    node->tag = to_lower_ascii(src_.substr(b, p - b));
    bool self_closing = false;
    while (p < src_.size()) {
      while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
      if (p >= src_.size()) break;
      if (src_[p] == '>') {
        ++p;
        break;
      }
      if (src_[p] == '/') {
        self_closing = true;
        ++p;
        continue;
      }
      std::size_t nb = p;
      while (p < src_.size() && !std::isspace(static_cast<unsigned char>(src_[p])) &&
             src_[p] != '=' && src_[p] != '>' && src_[p] != '/') {
        ++p;
      }
      auto name = to_lower_ascii(src_.substr(nb, p - nb));
      if (name.empty()) {
        ++p;
        continue;
      }
      self_closing = false;
      std::string value;
      while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
      if (p < src_.size() && src_[p] == '=') {
        ++p;
        while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
        if (p < src_.size() && (src_[p] == '"' || src_[p] == '\'')) {
          char q = src_[p++];
          auto end = src_.find(q, p);
          if (end == std::string_view::npos) end = src_.size();
          value = decode_entities(src_.substr(p, end - p));
          p = std::min(end + 1, src_.size());
        } else {
          std::size_t vb = p;
          while (p < src_.size() && !std::isspace(static_cast<unsigned char>(src_[p])) &&
                 src_[p] != '>') {
            ++p;
          }
          value = decode_entities(src_.substr(vb, p - vb));
        }
      }
      node->attrs.emplace(std::move(name), std::move(value));
    }
    pos_ = p;

    const std::string tag = node->tag;
    implicit_close(tag);
    node->parent = top();
    Node *raw = node.get();
    top()->children.push_back(std::move(node));

    if (tag == "script" || tag == "style") {
      auto end = find_ci(src_, "</" + tag, pos_);
      if (end == std::string_view::npos) {
        pos_ = src_.size();
      } else {
        auto gt = src_.find('>', end);
        pos_ = gt == std::string_view::npos ? src_.size() : gt + 1;
      }
      return;
    }
    if (self_closing || kVoidTags.count(tag)) return;
    stack_.push_back(raw);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::unique_ptr<Node> root_;
  std::vector<Node *> stack_;
};

const std::map<std::string_view, char32_t> kNamedEntities = {
    {"amp", U'&'},     {"lt", U'<'},      {"gt", U'>'},      {"quot", U'"'},
    {"apos", U'\''},   {"nbsp", 0xA0},    {"ndash", 0x2013}, {"mdash", 0x2014},
    {"hellip", 0x2026}, {"laquo", 0xAB},  {"raquo", 0xBB},   {"bdquo", 0x201E},
    {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"lsquo", 0x2018}, {"rsquo", 0x2019},
    {"copy", 0xA9},    {"reg", 0xAE},     {"deg", 0xB0},     {"middot", 0xB7},
    {"shy", 0xAD},     {"times", 0xD7},   {"euro", 0x20AC},
};

}  // namespace

const std::string *Node::attr(const std::string &name) const {
  auto it = attrs.find(name);
  return it == attrs.end() ? nullptr : &it->second;
}

bool Node::has_class(std::string_view cls) const {
  const auto *value = attr("class");
  if (!value) return false;
  for (const auto &c : utf8::split_ws(*value)) {
    if (c == cls) return true;
  }
  return false;
}

std::unique_ptr<Node> parse(std::string_view markup) {
  return Parser(markup).run();
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    auto semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(text[i++]);
      continue;
    }
    auto body = text.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    bool ok = false;
    if (!body.empty() && body[0] == '#') {
      unsigned long value = 0;
      const char *first = body.data() + 1;
      const char *last = body.data() + body.size();
      int base = 10;
      if (first < last && (*first == 'x' || *first == 'X')) {
        ++first;
        base = 16;
      }
      auto res = std::from_chars(first, last, value, base);
      ok = res.ec == std::errc() && res.ptr == last && first != last &&
           value > 0 && value <= 0x10FFFF;
      cp = static_cast<char32_t>(value);
    } else if (auto it = kNamedEntities.find(body); it != kNamedEntities.end()) {
      cp = it->second;
      ok = true;
    }
    if (!ok) {
      out.push_back(text[i++]);
      continue;
    }
    if (cp != 0xAD) utf8::append(out, cp);
    i = semi + 1;
  }
  return out;
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string inner_text(const Node &node) {
  if (node.kind == Node::Kind::kText) return node.text;
  std::string out;
  for (const auto &child : node.children) out += inner_text(*child);
  return out;
}

Selector::Selector(std::string_view source) {
  auto fail = [&](const std::string &why) {
    throw Error(ErrorKind::kConfig,
                "bad selector '" + std::string(source) + "': " + why);
  };
  std::size_t p = 0;
  Complex current;
  bool pending_child = false;
  auto flush = [&] {
    if (current.empty()) fail("empty alternative");
    alternatives_.push_back(std::move(current));
    current.clear();
  };
  while (p < source.size()) {
    char c = source[p];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++p;
      continue;
    }
    if (c == ',') {
      flush();
      pending_child = false;
      ++p;
      continue;
    }
    if (c == '>') {
      if (current.empty()) fail("dangling '>'");
      pending_child = true;
      ++p;
      continue;
    }
    Step step;
    step.child = pending_child;
    pending_child = false;
    auto read_name = [&] {
      std::size_t b = p;
      while (p < source.size() && is_name_char(source[p])) ++p;
      if (p == b) fail("expected a name at offset " + std::to_string(b));
      return std::string(source.substr(b, p - b));
    };
    if (c == '*') {
      ++p;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      step.compound.tag = to_lower_ascii(read_name());
    }
    while (p < source.size()) {
      char d = source[p];
      if (d == '.') {
        ++p;
        step.compound.classes.push_back(read_name());
      } else if (d == '#') {
        ++p;
        step.compound.id = read_name();
      } else if (d == '[') {
        ++p;
        auto name = to_lower_ascii(read_name());
        std::string value;
        bool has_value = false;
        if (p < source.size() && source[p] == '=') {
          ++p;
          has_value = true;
          if (p < source.size() && (source[p] == '"' || source[p] == '\'')) {
            char q = source[p++];
            auto end = source.find(q, p);
            if (end == std::string_view::npos) fail("unterminated quote");
            value = std::string(source.substr(p, end - p));
            p = end + 1;
          } else {
            std::size_t b = p;
            while (p < source.size() && source[p] != ']') ++p;
            value = std::string(source.substr(b, p - b));
          }
        }
        if (p >= source.size() || source[p] != ']') fail("missing ']'");
        ++p;
        step.compound.attrs.emplace_back(std::move(name), std::move(value));
        step.compound.attr_has_value.push_back(has_value);
      } else {
        break;
      }
    }
    if (p < source.size() && !std::isspace(static_cast<unsigned char>(source[p])) &&
        source[p] != ',' && source[p] != '>') {
      fail(std::string("unexpected character '") + source[p] + "'");
    }
    current.push_back(std::move(step));
  }
  if (pending_child) fail("dangling '>'");
  if (!current.empty()) flush();
}

bool Selector::match_compound(const Compound &c, const Node &node) {
  if (!node.is_element() || node.tag.empty()) return false;
  if (!c.tag.empty() && c.tag != node.tag) return false;
  if (!c.id.empty()) {
    const auto *id = node.attr("id");
    if (!id || *id != c.id) return false;
  }
  for (const auto &cls : c.classes) {
    if (!node.has_class(cls)) return false;
  }
  for (std::size_t i = 0; i < c.attrs.size(); ++i) {
    const auto *value = node.attr(c.attrs[i].first);
    if (!value) return false;
    if (c.attr_has_value[i] && *value != c.attrs[i].second) return false;
  }
  return true;
}

bool Selector::match_from(const Complex &cx, std::size_t idx,
                          const Node &node) {
  if (!match_compound(cx[idx].compound, node)) return false;
  if (idx == 0) return true;
  const bool child = cx[idx].child;
  for (const Node *anc = node.parent; anc; anc = anc->parent) {
    if (match_from(cx, idx - 1, *anc)) return true;
    if (child) return false;
  }
  return false;
}

bool Selector::matches(const Node &node) const {
  for (const auto &cx : alternatives_) {
    if (match_from(cx, cx.size() - 1, node)) return true;
  }
  return false;
}

namespace {

void collect(const Node &node, const Selector &sel,
             std::vector<const Node *> &out, bool first_only) {
  for (const auto &child : node.children) {
    if (first_only && !out.empty()) return;
    if (!child->is_element()) continue;
    if (sel.matches(*child)) out.push_back(child.get());
    collect(*child, sel, out, first_only);
  }
}

}  // namespace

std::vector<const Node *> select_all(const Node &root, const Selector &sel) {
  std::vector<const Node *> out;
  collect(root, sel, out, false);
  return out;
}

const Node *select_first(const Node &root, const Selector &sel) {
  std::vector<const Node *> out;
  collect(root, sel, out, true);
  return out.empty() ? nullptr : out.front();
}

}  // namespace bitext::html
