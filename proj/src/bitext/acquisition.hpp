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

#ifndef BITEXT_ACQUISITION_HPP_
#define BITEXT_ACQUISITION_HPP_

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bitext/html.hpp"
#include "bitext/lang.hpp"

namespace bitext {

struct RawArticle {
  std::string url;
  LangCode lang;
  std::string title;
  std::string html;
};

struct CleanDocument {
  LangCode lang;
  std::string title;
  std::string text;  // paragraphs separated by blank lines
};

enum class Origin { kCrawled, kFixture };
const char *origin_name(Origin origin);

struct DocumentPair {
  std::string id;
  CleanDocument source_doc;
  CleanDocument target_doc;
  Origin origin = Origin::kFixture;
  std::string source_url;
  std::string target_url;
};

// Selector-driven cleaning and link discovery rules, loaded from JSON so a
// new wiki skin only needs a new rules file.
struct CleanRules {
  std::vector<html::Selector> content;  // first match becomes the root
  std::vector<html::Selector> title;
  html::Selector remove;
  html::Selector paragraphs;
  html::Selector article_links;
  html::Selector interlanguage;
  std::vector<std::string> stop_headings;  // lowercase

  static CleanRules defaults();
  static CleanRules load(const std::filesystem::path &path);
  static CleanRules from_json(const std::string &json_text);
};

// Throws EmptyDocumentError if no paragraph text survives.
CleanDocument extract_clean_text(const RawArticle &article,
                                 const CleanRules &rules = CleanRules::defaults());

// Wraps plain paragraphs as minimal markup; extract_clean_text inverts it.
std::string wrap_as_html(const std::string &clean_text);

class Fetcher {
 public:
  virtual ~Fetcher() = default;
  // Returns the page body; throws Error(kNetwork) on failure.
  virtual std::string fetch(const std::string &url) = 0;
};

// Resolves fixture://<path> to <root>/<path>.html.
class FixtureFetcher : public Fetcher {
 public:
  explicit FixtureFetcher(std::filesystem::path root) : root_(std::move(root)) {}
  std::string fetch(const std::string &url) override;

 private:
  std::filesystem::path root_;
};

// Live HTTP(S) client. Retries with exponential backoff.
class HttpFetcher : public Fetcher {
 public:
  explicit HttpFetcher(int retries = 3,
                       std::chrono::milliseconds backoff = std::chrono::milliseconds(500));
  std::string fetch(const std::string &url) override;

 private:
  int retries_;
  std::chrono::milliseconds backoff_;
};

struct CrawlOptions {
  std::string seed;
  std::size_t max_articles = 10;
  std::chrono::milliseconds delay{0};
  LangCode source_lang{"pl"};
  LangCode target_lang{"en"};
  CleanRules rules = CleanRules::defaults();
  std::function<void(const std::string &)> log;
};

struct CrawlResult {
  std::vector<std::pair<RawArticle, RawArticle>> pairs;
  std::vector<std::string> skipped;  // "url: reason"
};

// Breadth-first over in-body article links from the seed, pairing each
// article with its interlanguage counterpart in target_lang.
CrawlResult crawl_topic(const CrawlOptions &options, Fetcher &fetcher);

std::string slugify(const std::string &title);
std::string make_pair_id(std::size_t seq, const std::string &title);
std::string resolve_url(const std::string &base, const std::string &href);

struct RawPair {
  std::string id;
  RawArticle source;
  RawArticle target;
  Origin origin = Origin::kFixture;
};

// Numbers crawled pairs in discovery order, starting at 1.
std::vector<RawPair> assign_ids(const CrawlResult &crawl, Origin origin);

// Cleans both sides; nullopt (with a log line) when either side is empty.
std::optional<DocumentPair> clean_pair(
    const RawPair &raw, const CleanRules &rules,
    const std::function<void(const std::string &)> &log = {});

// <dir>/<id>/<id>.<lang>.html plus <id>.meta.json.
void write_raw_pair(const std::filesystem::path &dir, const RawPair &pair);
std::vector<RawPair> read_raw_pairs(const std::filesystem::path &dir);

// <dir>/<id>/<id>.<lang>.txt for both sides plus <id>.meta.json.
void write_document_pair(const std::filesystem::path &dir,
                         const DocumentPair &pair);
std::vector<DocumentPair> read_document_pairs(const std::filesystem::path &dir);

}  // namespace bitext

#endif  // BITEXT_ACQUISITION_HPP_
