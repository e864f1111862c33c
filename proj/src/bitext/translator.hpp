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

#ifndef BITEXT_TRANSLATOR_HPP_
#define BITEXT_TRANSLATOR_HPP_

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bitext/aligner.hpp"
#include "bitext/error.hpp"
#include "bitext/lang.hpp"

namespace bitext {

struct TranslationRequest {
  std::vector<std::string> lines;
  LangCode source_lang;
  LangCode target_lang;
};

struct TranslationResult {
  std::vector<std::string> lines;  // same length and order as the request
};

// An engine failure attributed to one input line.
class EngineLineError : public Error {
 public:
  EngineLineError(std::size_t line, const std::string &what)
      : Error(ErrorKind::kEngine,
              "translation failed at line " + std::to_string(line) + ": " + what),
        line_(line),
        detail_(what) {}
  std::size_t line() const { return line_; }
  const std::string &detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

class TranslationEngine {
 public:
  virtual ~TranslationEngine() = default;

  // Stable identifier including a fingerprint of the engine's resources;
  // it names the cache file.
  virtual std::string id() const = 0;

  // Translates non-empty lines. Throws EngineLineError with the index into
  // `lines` of the first line that could not be translated.
  std::vector<std::string> translate(const std::vector<std::string> &lines) {
    ++invocations_;
    return translate_batch(lines);
  }

  std::size_t invocations() const { return invocations_; }

 protected:
  virtual std::vector<std::string> translate_batch(
      const std::vector<std::string> &lines) = 0;

 private:
  std::atomic<std::size_t> invocations_{0};
};

// Word-by-word substitution with each token's best lexicon target (ties to
// the lexicographically first); unknown tokens pass through.
class GlossTable {
 public:
  explicit GlossTable(const Lexicon &lex);
  std::string translate(std::string_view line) const;

 private:
  std::unordered_map<std::string, std::string> best_;
};

std::string gloss_translate(std::string_view line, const Lexicon &lex);

class GlossEngine : public TranslationEngine {
 public:
  explicit GlossEngine(const Lexicon &lex);
  std::string id() const override { return id_; }

 protected:
  std::vector<std::string> translate_batch(const std::vector<std::string> &lines) override;

 private:
  GlossTable table_;
  std::string id_;
};

// Exact lookup after whitespace normalization. Misses go to the fallback
// engine when one is given, else the source line passes through.
class MemoryEngine : public TranslationEngine {
 public:
  MemoryEngine(std::map<std::string, std::string> memory,
               std::unique_ptr<TranslationEngine> fallback);
  // TSV source<TAB>target.
  static std::map<std::string, std::string> load_memory(const std::filesystem::path &path);

  std::string id() const override { return id_; }

 protected:
  std::vector<std::string> translate_batch(const std::vector<std::string> &lines) override;

 private:
  std::map<std::string, std::string> memory_;
  std::unique_ptr<TranslationEngine> fallback_;
  std::string id_;
};

// Runs `/bin/sh -c command` once per batch, one line in and one line out
// over stdin/stdout.
class ExternalCommandEngine : public TranslationEngine {
 public:
  explicit ExternalCommandEngine(std::string command);
  std::string id() const override { return id_; }

 protected:
  std::vector<std::string> translate_batch(const std::vector<std::string> &lines) override;

 private:
  std::string command_;
  std::string id_;
};

// Append-only TSV cache, hash-of-source<TAB>translation, one file per
// engine id and language pair.
class TranslationCache {
 public:
  TranslationCache(std::filesystem::path dir, const std::string &engine_id,
                   const LangCode &source, const LangCode &target);

  const std::string *find(const std::string &source_line) const;
  void store(const std::string &source_line, const std::string &translation);
  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::unordered_map<std::string, std::string> entries_;
  mutable std::mutex mu_;
};

// Empty lines map to empty lines without touching the engine. With a cache,
// only misses reach the engine.
TranslationResult translate_lines(const TranslationRequest &request,
                                  TranslationEngine &engine,
                                  TranslationCache *cache);

TranslationResult translate_lines(const TranslationRequest &request,
                                  TranslationEngine &engine,
                                  const std::filesystem::path &cache_dir);

}  // namespace bitext

#endif  // BITEXT_TRANSLATOR_HPP_
