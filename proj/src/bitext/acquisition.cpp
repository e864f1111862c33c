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

#include "bitext/acquisition.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <cstdio>
#include <deque>
#include <json.hpp>
#include <regex>
#include <set>
#include <thread>

#include "bitext/error.hpp"
#include "bitext/io.hpp"
#include "bitext/utf8.hpp"

namespace bitext {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::string_view kFixtureScheme = "fixture://";

html::Selector join_selectors(const std::vector<std::string> &parts) {
  std::string joined;
  for (const auto &p : parts) {
    if (!joined.empty()) joined += ", ";
    joined += p;
  }
  return joined.empty() ? html::Selector() : html::Selector(joined);
}

bool removed(const html::Node &node, const CleanRules &rules) {
  return !rules.remove.empty() && rules.remove.matches(node);
}

bool is_heading(const html::Node &node) {
  return node.tag.size() == 2 && node.tag[0] == 'h' && node.tag[1] >= '1' &&
         node.tag[1] <= '6';
}

void visible_text(const html::Node &node, const CleanRules &rules,
                  std::string &out) {
  if (node.kind == html::Node::Kind::kText) {
    out += node.text;
    return;
  }
  if (removed(node, rules)) return;
  if (node.tag == "br") out.push_back(' ');
  for (const auto &child : node.children) visible_text(*child, rules, out);
}

std::string strip_urls(const std::string &text) {
  static const std::regex kUrl(R"((?:https?|ftp)://\S+|\bwww\.\S+)",
                               std::regex::icase);
  return std::regex_replace(text, kUrl, " ");
}

struct Extraction {
  std::vector<std::string> paragraphs;
  bool stopped = false;
};

void walk(const html::Node &node, const CleanRules &rules, Extraction &ex) {
  for (const auto &child : node.children) {
    if (ex.stopped) return;
    if (!child->is_element()) continue;
    if (removed(*child, rules)) continue;
    if (is_heading(*child)) {
      std::string heading;
      visible_text(*child, rules, heading);
      auto key = utf8::lower(utf8::normalize_space(heading));
      if (std::find(rules.stop_headings.begin(), rules.stop_headings.end(),
                    key) != rules.stop_headings.end()) {
        ex.stopped = true;
        return;
      }
      continue;
    }
    if (rules.paragraphs.matches(*child)) {
      std::string text;
      visible_text(*child, rules, text);
      auto para = utf8::normalize_space(strip_urls(text));
      if (!para.empty()) ex.paragraphs.push_back(std::move(para));
      continue;
    }
    walk(*child, rules, ex);
  }
}

const html::Node &content_root(const html::Node &doc, const CleanRules &rules) {
  for (const auto &sel : rules.content) {
    if (const auto *node = html::select_first(doc, sel)) return *node;
  }
  return doc;
}

std::string page_title(const html::Node &doc, const CleanRules &rules,
                       const std::string &fallback) {
  for (const auto &sel : rules.title) {
    if (const auto *node = html::select_first(doc, sel)) {
      std::string text;
      visible_text(*node, rules, text);
      auto title = utf8::normalize_space(text);
      if (!title.empty()) return title;
    }
  }
  return fallback;
}

struct UrlParts {
  std::string scheme;     // "https"
  std::string authority;  // "pl.wikipedia.org"
  std::string path;       // "/wiki/Origami" (query and fragment stripped)
  bool has_query = false;
};

UrlParts split_url(const std::string &url) {
  UrlParts parts;
  auto sep = url.find("://");
  if (sep == std::string::npos) {
    parts.path = url;
    return parts;
  }
  parts.scheme = url.substr(0, sep);
  auto rest = url.substr(sep + 3);
  auto slash = rest.find('/');
  parts.authority = rest.substr(0, slash);
  parts.path = slash == std::string::npos ? "/" : rest.substr(slash);
  auto frag = parts.path.find('#');
  if (frag != std::string::npos) parts.path.erase(frag);
  auto q = parts.path.find('?');
  if (q != std::string::npos) {
    parts.has_query = true;
    parts.path.erase(q);
  }
  return parts;
}

std::string percent_decode(const std::string &s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      out.push_back(static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(s[i] == '_' ? ' ' : s[i]);
    }
  }
  return out;
}

std::string title_key(const std::string &url) {
  auto parts = split_url(url);
  auto last = parts.path.substr(parts.path.rfind('/') + 1);
  auto key = utf8::lower(utf8::normalize_space(percent_decode(last)));
  return parts.scheme + "://" + parts.authority + "|" + key;
}

bool is_article_link(const std::string &page_url, const std::string &target) {
  auto a = split_url(page_url);
  auto b = split_url(target);
  if (a.scheme != b.scheme || a.authority != b.authority || b.has_query) {
    return false;
  }
  if (b.scheme == "fixture") return b.path.size() > 1;
  constexpr std::string_view kWiki = "/wiki/";
  if (b.path.rfind(kWiki, 0) != 0) return false;
  auto title = b.path.substr(kWiki.size());
  return !title.empty() && title.find(':') == std::string::npos;
}

void throttle(std::chrono::steady_clock::time_point &last,
              std::chrono::milliseconds delay, bool &first_request) {
  if (!first_request && delay.count() > 0) {
    auto next = last + delay;
    auto now = std::chrono::steady_clock::now();
    if (now < next) std::this_thread::sleep_for(next - now);
  }
  first_request = false;
  last = std::chrono::steady_clock::now();
}

json meta_json(const std::string &id, const RawArticle &src,
               const RawArticle &tgt, Origin origin) {
  json meta;
  meta["id"] = id;
  meta["langs"] = {src.lang.str(), tgt.lang.str()};
  meta["titles"] = {{src.lang.str(), src.title}, {tgt.lang.str(), tgt.title}};
  meta["origin"] = origin_name(origin);
  meta["urls"] = {{src.lang.str(), src.url}, {tgt.lang.str(), tgt.url}};
  return meta;
}

Origin parse_origin(const std::string &name) {
  if (name == "crawled") return Origin::kCrawled;
  if (name == "fixture") return Origin::kFixture;
  throw Error(ErrorKind::kInput, "unknown origin '" + name + "'");
}

std::vector<fs::path> pair_dirs(const fs::path &dir) {
  std::vector<fs::path> dirs;
  if (!fs::exists(dir)) return dirs;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

json read_meta(const fs::path &pair_dir) {
  auto id = pair_dir.filename().string();
  auto path = pair_dir / (id + ".meta.json");
  try {
    return json::parse(io::read_file(path));
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kInput, path.string() + ": " + e.what());
  }
}

}  // namespace

const char *origin_name(Origin origin) {
  return origin == Origin::kCrawled ? "crawled" : "fixture";
}

CleanRules CleanRules::defaults() {
  return from_json(R"({
    "content": ["#mw-content-text", "#content", "main", "article", "body"],
    "title": ["#firstHeading", "h1", "title"],
    "remove": ["table", "figure", "figcaption", "img", "nav", "header", "footer",
               "script", "style", "noscript", "#toc", ".toc", ".thumb",
               ".gallery", ".navbox", ".infobox", ".reflist", ".references",
               "sup.reference", ".mw-editsection", ".hatnote", ".catlinks",
               ".metadata", "#mw-navigation", "#footer", ".interlanguage-link"],
    "paragraphs": ["p"],
    "article_links": ["a[href]"],
    "interlanguage": ["a[hreflang]"],
    "stop_headings": ["references", "notes", "see also", "external links",
                      "bibliography", "further reading", "przypisy",
                      "bibliografia", "linki zewnętrzne", "zobacz też", "uwagi"]
  })");
}

CleanRules CleanRules::from_json(const std::string &json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kConfig, std::string("clean rules: ") + e.what());
  }
  auto strings = [&](const char *key) {
    std::vector<std::string> out;
    if (!doc.contains(key)) return out;
    if (!doc[key].is_array()) {
      throw Error(ErrorKind::kConfig,
                  std::string("clean rules: '") + key + "' must be an array of strings");
    }
    for (const auto &v : doc[key]) {
      if (!v.is_string()) {
        throw Error(ErrorKind::kConfig,
                    std::string("clean rules: '") + key + "' must be an array of strings");
      }
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  CleanRules rules;
  for (const auto &s : strings("content")) rules.content.emplace_back(s);
  for (const auto &s : strings("title")) rules.title.emplace_back(s);
  rules.remove = join_selectors(strings("remove"));
  auto paras = strings("paragraphs");
  rules.paragraphs = join_selectors(paras.empty() ? std::vector<std::string>{"p"} : paras);
  auto links = strings("article_links");
  rules.article_links = join_selectors(links.empty() ? std::vector<std::string>{"a[href]"} : links);
  auto inter = strings("interlanguage");
  rules.interlanguage = join_selectors(inter.empty() ? std::vector<std::string>{"a[hreflang]"} : inter);
  for (const auto &h : strings("stop_headings")) {
    rules.stop_headings.push_back(utf8::lower(utf8::normalize_space(h)));
  }
  return rules;
}

CleanRules CleanRules::load(const std::filesystem::path &path) {
  try {
    return from_json(io::read_file(path));
  } catch (const Error &e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
}

CleanDocument extract_clean_text(const RawArticle &article,
                                 const CleanRules &rules) {
  auto doc = html::parse(article.html);
  Extraction ex;
  walk(content_root(*doc, rules), rules, ex);
  CleanDocument out;
  out.lang = article.lang;
  out.title = page_title(*doc, rules, article.title);
  for (const auto &p : ex.paragraphs) {
    if (!out.text.empty()) out.text += "\n\n";
    out.text += p;
  }
  if (out.text.empty()) {
    throw EmptyDocumentError("no text left after cleaning " +
                             (article.url.empty() ? article.title : article.url));
  }
  return out;
}

std::string wrap_as_html(const std::string &clean_text) {
  std::string out = "<html><body>";
  std::size_t start = 0;
  while (start <= clean_text.size()) {
    auto end = clean_text.find("\n\n", start);
    if (end == std::string::npos) end = clean_text.size();
    out += "<p>" + html::escape(clean_text.substr(start, end - start)) + "</p>";
    start = end + 2;
  }
  return out + "</body></html>";
}

std::string FixtureFetcher::fetch(const std::string &url) {
  if (url.rfind(kFixtureScheme, 0) != 0) {
    throw Error(ErrorKind::kNetwork, "not a fixture URL: " + url);
  }
  auto rel = split_url(url);
  fs::path path = root_ / (rel.authority + rel.path);
  for (const auto &part : path.lexically_relative(root_)) {
    if (part == "..") throw Error(ErrorKind::kNetwork, "fixture URL escapes root: " + url);
  }
  path += ".html";
  if (!fs::exists(path)) {
    throw Error(ErrorKind::kNetwork, "fixture not found: " + url);
  }
  return io::read_file(path);
}

HttpFetcher::HttpFetcher(int retries, std::chrono::milliseconds backoff)
    : retries_(retries), backoff_(backoff) {}

std::string HttpFetcher::fetch(const std::string &url) {
  auto parts = split_url(url);
  if (parts.scheme != "http" && parts.scheme != "https") {
    throw Error(ErrorKind::kNetwork, "unsupported URL scheme: " + url);
  }
  auto slash = url.find('/', url.find("://") + 3);
  std::string path = slash == std::string::npos ? "/" : url.substr(slash);
  auto frag = path.find('#');
  if (frag != std::string::npos) path.erase(frag);

  httplib::Client client(parts.scheme + "://" + parts.authority);
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(30);
  httplib::Headers headers = {{"User-Agent", "bitext-mine/1.0 (corpus research crawler)"}};

  std::string last_error;
  auto wait = backoff_;
  for (int attempt = 0; attempt <= retries_; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(wait);
      wait *= 2;
    }
    auto res = client.Get(path, headers);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    last_error = "HTTP " + std::to_string(res->status);
    if (res->status == 404 || res->status == 410) break;
  }
  throw Error(ErrorKind::kNetwork, url + ": " + last_error);
}

std::string resolve_url(const std::string &base, const std::string &href) {
  if (href.empty()) return base;
  auto scheme_end = href.find("://");
  if (scheme_end != std::string::npos && href.find('/') > scheme_end) return href;
  auto b = split_url(base);
  if (href.rfind("//", 0) == 0) return b.scheme + ":" + href;
  const std::string origin = b.scheme + "://" + b.authority;
  if (href.front() == '/') return origin + href;
  if (href.front() == '#' || href.front() == '?') return origin + b.path + href;
  auto dir = b.path.substr(0, b.path.rfind('/') + 1);
  return origin + dir + href;
}

CrawlResult crawl_topic(const CrawlOptions &options, Fetcher &fetcher) {
  if (options.max_articles == 0) {
    throw Error(ErrorKind::kInvalidArgument, "max_articles must be positive");
  }
  auto log = [&](const std::string &msg) {
    if (options.log) options.log(msg);
  };
  CrawlResult result;
  std::deque<std::string> frontier{options.seed};
  std::set<std::string> seen{title_key(options.seed)};
  auto last_request = std::chrono::steady_clock::now();
  bool first_request = true;
  auto fetch = [&](const std::string &url) {
    throttle(last_request, options.delay, first_request);
    return fetcher.fetch(url);
  };

  bool at_seed = true;
  while (!frontier.empty() && result.pairs.size() < options.max_articles) {
    const std::string url = frontier.front();
    frontier.pop_front();
    const bool is_seed = at_seed;
    at_seed = false;

    std::string page;
    try {
      page = fetch(url);
    } catch (const Error &e) {
      if (is_seed) throw;
      result.skipped.push_back(url + ": " + e.what());
      log("skip " + url + ": " + e.what());
      continue;
    }
    auto doc = html::parse(page);

    // Queue in-body article links before deciding on this page's pair so
    // pages without a counterpart still extend the traversal.
    const auto &root = content_root(*doc, options.rules);
    for (const auto *a : html::select_all(root, options.rules.article_links)) {
      bool in_removed = false;
      for (const html::Node *n = a; n && n != &root; n = n->parent) {
        if (n->is_element() && removed(*n, options.rules)) {
          in_removed = true;
          break;
        }
      }
      const auto *href = a->attr("href");
      if (in_removed || !href) continue;
      auto target = resolve_url(url, *href);
      auto frag = target.find('#');
      if (frag != std::string::npos) target.erase(frag);
      if (!is_article_link(url, target)) continue;
      if (seen.insert(title_key(target)).second) frontier.push_back(target);
    }

    std::string counterpart;
    for (const auto *a : html::select_all(*doc, options.rules.interlanguage)) {
      const auto *lang = a->attr("hreflang");
      const auto *href = a->attr("href");
      if (lang && href && *lang == options.target_lang.str()) {
        counterpart = resolve_url(url, *href);
        break;
      }
    }
    if (counterpart.empty()) {
      if (is_seed) {
        throw Error(ErrorKind::kConfig, "seed " + url +
                                            " has no interlanguage link to '" +
                                            options.target_lang.str() + "'");
      }
      result.skipped.push_back(url + ": no " + options.target_lang.str() +
                               " counterpart");
      log("skip " + url + ": no counterpart");
      continue;
    }
    std::string counterpart_page;
    try {
      counterpart_page = fetch(counterpart);
    } catch (const Error &e) {
      result.skipped.push_back(counterpart + ": " + e.what());
      log("skip " + counterpart + ": " + e.what());
      continue;
    }
    RawArticle src{url, options.source_lang,
                   page_title(*doc, options.rules, url), std::move(page)};
    auto tdoc = html::parse(counterpart_page);
    RawArticle tgt{counterpart, options.target_lang,
                   page_title(*tdoc, options.rules, counterpart),
                   std::move(counterpart_page)};
    log("pair " + src.title + " <-> " + tgt.title);
    result.pairs.emplace_back(std::move(src), std::move(tgt));
  }
  return result;
}

std::string slugify(const std::string &title) {
  std::string slug;
  bool dash = false;
  for (char32_t cp : utf8::decode(title)) {
    if (utf8::is_space(cp) || utf8::is_punct(cp)) {
      dash = !slug.empty();
      continue;
    }
    if (dash) slug.push_back('-');
    dash = false;
    utf8::append(slug, utf8::to_lower(cp));
  }
  return slug.empty() ? "untitled" : slug;
}

std::string make_pair_id(std::size_t seq, const std::string &title) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", seq);
  return std::string(buf) + "-" + slugify(title);
}

std::vector<RawPair> assign_ids(const CrawlResult &crawl, Origin origin) {
  std::vector<RawPair> out;
  std::size_t seq = 0;
  for (const auto &[src, tgt] : crawl.pairs) {
    out.push_back(RawPair{make_pair_id(++seq, src.title), src, tgt, origin});
  }
  return out;
}

std::optional<DocumentPair> clean_pair(
    const RawPair &raw, const CleanRules &rules,
    const std::function<void(const std::string &)> &log) {
  try {
    DocumentPair pair;
    pair.id = raw.id;
    pair.source_doc = extract_clean_text(raw.source, rules);
    pair.target_doc = extract_clean_text(raw.target, rules);
    pair.origin = raw.origin;
    pair.source_url = raw.source.url;
    pair.target_url = raw.target.url;
    return pair;
  } catch (const EmptyDocumentError &e) {
    if (log) log("drop " + raw.id + ": " + e.what());
    return std::nullopt;
  }
}

void write_raw_pair(const std::filesystem::path &dir, const RawPair &pair) {
  auto pdir = dir / pair.id;
  io::write_file(pdir / (pair.id + "." + pair.source.lang.str() + ".html"),
                 pair.source.html);
  io::write_file(pdir / (pair.id + "." + pair.target.lang.str() + ".html"),
                 pair.target.html);
  io::write_file(pdir / (pair.id + ".meta.json"),
                 meta_json(pair.id, pair.source, pair.target, pair.origin).dump(2) + "\n");
}

std::vector<RawPair> read_raw_pairs(const std::filesystem::path &dir) {
  std::vector<RawPair> out;
  for (const auto &pdir : pair_dirs(dir)) {
    auto meta = read_meta(pdir);
    RawPair pair;
    pair.id = meta.at("id").get<std::string>();
    pair.origin = parse_origin(meta.at("origin").get<std::string>());
    auto langs = meta.at("langs");
    auto load = [&](const std::string &lang) {
      RawArticle a;
      a.lang = LangCode(lang);
      a.url = meta.at("urls").at(lang).get<std::string>();
      a.title = meta.at("titles").at(lang).get<std::string>();
      a.html = io::read_file(pdir / (pair.id + "." + lang + ".html"));
      return a;
    };
    pair.source = load(langs.at(0).get<std::string>());
    pair.target = load(langs.at(1).get<std::string>());
    out.push_back(std::move(pair));
  }
  return out;
}

void write_document_pair(const std::filesystem::path &dir,
                         const DocumentPair &pair) {
  if (pair.source_doc.lang == pair.target_doc.lang) {
    throw Error(ErrorKind::kInput, "document pair " + pair.id +
                                       " has the same language on both sides");
  }
  auto pdir = dir / pair.id;
  io::write_file(pdir / (pair.id + "." + pair.source_doc.lang.str() + ".txt"),
                 pair.source_doc.text + "\n");
  io::write_file(pdir / (pair.id + "." + pair.target_doc.lang.str() + ".txt"),
                 pair.target_doc.text + "\n");
  RawArticle s{pair.source_url, pair.source_doc.lang, pair.source_doc.title, {}};
  RawArticle t{pair.target_url, pair.target_doc.lang, pair.target_doc.title, {}};
  io::write_file(pdir / (pair.id + ".meta.json"),
                 meta_json(pair.id, s, t, pair.origin).dump(2) + "\n");
}

std::vector<DocumentPair> read_document_pairs(const std::filesystem::path &dir) {
  std::vector<DocumentPair> out;
  for (const auto &pdir : pair_dirs(dir)) {
    auto meta = read_meta(pdir);
    DocumentPair pair;
    pair.id = meta.at("id").get<std::string>();
    pair.origin = parse_origin(meta.at("origin").get<std::string>());
    auto langs = meta.at("langs");
    auto load = [&](const std::string &lang, std::string &url) {
      CleanDocument d;
      d.lang = LangCode(lang);
      d.title = meta.at("titles").at(lang).get<std::string>();
      url = meta.at("urls").at(lang).get<std::string>();
      auto text = io::read_file(pdir / (pair.id + "." + lang + ".txt"));
      if (!text.empty() && text.back() == '\n') text.pop_back();
      d.text = std::move(text);
      return d;
    };
    pair.source_doc = load(langs.at(0).get<std::string>(), pair.source_url);
    pair.target_doc = load(langs.at(1).get<std::string>(), pair.target_url);
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace bitext
