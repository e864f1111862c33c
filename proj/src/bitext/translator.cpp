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

#include "bitext/translator.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <thread>

#include "bitext/io.hpp"
#include "bitext/textproc.hpp"
#include "bitext/utf8.hpp"

namespace bitext {
namespace {

namespace fs = std::filesystem;

std::string fingerprint(std::string_view data) {
  return io::sha256_hex(data).substr(0, 12);
}

std::string single_line(std::string s) {
  for (auto &c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::mutex &cache_append_mutex() {
  static std::mutex mu;
  return mu;
}

void write_all(int fd, const std::string &data) {
  // SIGPIPE is blocked on this thread so a child that exits early turns into
  // EPIPE; the per-thread pending signal dies with the thread.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGPIPE);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    off += static_cast<std::size_t>(n);
  }
  ::close(fd);
}

}  // namespace

GlossTable::GlossTable(const Lexicon &lex) {
  std::unordered_map<std::string, double> best_score;
  // Entries iterate in (src, tgt) order, so strict '>' keeps the
  // lexicographically first target among equal scores.
  for (const auto &[key, score] : lex.entries()) {
    auto it = best_score.find(key.first);
    if (it == best_score.end() || score > it->second) {
      best_score[key.first] = score;
      best_[key.first] = key.second;
    }
  }
}

std::string GlossTable::translate(std::string_view line) const {
  auto tokens = tokenize(line);
  for (auto &tok : tokens) {
    auto it = best_.find(tok);
    if (it != best_.end()) tok = it->second;
  }
  return join_tokens(tokens);
}

std::string gloss_translate(std::string_view line, const Lexicon &lex) {
  return GlossTable(lex).translate(line);
}

GlossEngine::GlossEngine(const Lexicon &lex)
    : table_(lex), id_("gloss-" + fingerprint(lex.to_tsv())) {}

std::vector<std::string> GlossEngine::translate_batch(
    const std::vector<std::string> &lines) {
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (const auto &line : lines) out.push_back(table_.translate(line));
  return out;
}

MemoryEngine::MemoryEngine(std::map<std::string, std::string> memory,
                           std::unique_ptr<TranslationEngine> fallback)
    : fallback_(std::move(fallback)) {
  std::string blob;
  for (auto &[src, tgt] : memory) {
    auto key = utf8::normalize_space(src);
    blob += key + "\t" + tgt + "\n";
    memory_.emplace(std::move(key), tgt);
  }
  id_ = "memory-" + fingerprint(blob);
  if (fallback_) id_ += "+" + fallback_->id();
}

std::map<std::string, std::string> MemoryEngine::load_memory(
    const std::filesystem::path &path) {
  std::map<std::string, std::string> out;
  std::size_t lineno = 0;
  for (const auto &line : io::read_lines(path)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = io::split_tabs(line);
    if (f.size() != 2) {
      throw Error(ErrorKind::kInput, path.string() + ":" + std::to_string(lineno) +
                                         ": expected source<TAB>target");
    }
    out.emplace(utf8::normalize_space(f[0]), f[1]);
  }
  return out;
}

std::vector<std::string> MemoryEngine::translate_batch(
    const std::vector<std::string> &lines) {
  std::vector<std::string> out(lines.size());
  std::vector<std::string> misses;
  std::vector<std::size_t> miss_index;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto it = memory_.find(utf8::normalize_space(lines[i]));
    if (it != memory_.end()) {
      out[i] = it->second;
    } else if (fallback_) {
      misses.push_back(lines[i]);
      miss_index.push_back(i);
    } else {
      out[i] = lines[i];
    }
  }
  if (!misses.empty()) {
    std::vector<std::string> filled;
    try {
      filled = fallback_->translate(misses);
    } catch (const EngineLineError &e) {
      throw EngineLineError(miss_index.at(e.line()), e.detail());
    }
    for (std::size_t k = 0; k < misses.size(); ++k) out[miss_index[k]] = filled[k];
  }
  return out;
}

ExternalCommandEngine::ExternalCommandEngine(std::string command)
    : command_(std::move(command)), id_("external-" + fingerprint(command_)) {
  if (command_.empty()) {
    throw Error(ErrorKind::kConfig, "external engine needs a command");
  }
}

std::vector<std::string> ExternalCommandEngine::translate_batch(
    const std::vector<std::string> &lines) {
  int in_pipe[2], out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw EngineLineError(0, std::string("pipe: ") + std::strerror(errno));
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw EngineLineError(0, std::string("pipe: ") + std::strerror(errno));
  }
  pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw EngineLineError(0, std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char *>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);

  std::string input;
  for (const auto &line : lines) input += single_line(line) + "\n";
  std::thread writer(write_all, in_pipe[1], std::move(input));

  std::string output;
  char buf[65536];
  while (true) {
    ssize_t n = ::read(out_pipe[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(out_pipe[0]);
  writer.join();
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  auto result = io::split_lines(output);
  const bool exited_ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  if (!exited_ok || result.size() < lines.size()) {
    std::string why = !exited_ok
                          ? "command '" + command_ + "' exited with status " +
                                std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1)
                          : "command '" + command_ + "' produced no output for this line";
    throw EngineLineError(std::min(result.size(), lines.size() - 1), why);
  }
  result.resize(lines.size());
  return result;
}

TranslationCache::TranslationCache(std::filesystem::path dir,
                                   const std::string &engine_id,
                                   const LangCode &source,
                                   const LangCode &target) {
  path_ = dir / (engine_id + "." + source.str() + "-" + target.str() + ".tsv");
  if (fs::exists(path_)) {
    for (const auto &line : io::read_lines(path_)) {
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      entries_[line.substr(0, tab)] = line.substr(tab + 1);
    }
  }
}

const std::string *TranslationCache::find(const std::string &source_line) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(io::sha256_hex(source_line));
  return it == entries_.end() ? nullptr : &it->second;
}

void TranslationCache::store(const std::string &source_line,
                             const std::string &translation) {
  auto key = io::sha256_hex(source_line);
  auto value = single_line(translation);
  std::lock_guard lock(mu_);
  if (entries_.count(key)) return;
  std::lock_guard file_lock(cache_append_mutex());
  fs::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorKind::kIo, "cannot append to " + path_.string());
  out << key << '\t' << value << '\n';
  entries_.emplace(std::move(key), std::move(value));
}

TranslationResult translate_lines(const TranslationRequest &request,
                                  TranslationEngine &engine,
                                  TranslationCache *cache) {
  if (request.source_lang == request.target_lang) {
    throw Error(ErrorKind::kInvalidArgument,
                "translation source and target languages must differ");
  }
  TranslationResult result;
  result.lines.resize(request.lines.size());
  std::vector<std::string> pending;
  std::vector<std::size_t> pending_index;
  for (std::size_t i = 0; i < request.lines.size(); ++i) {
    const auto &line = request.lines[i];
    if (utf8::trim(line).empty()) continue;
    if (cache) {
      if (const auto *hit = cache->find(line)) {
        result.lines[i] = *hit;
        continue;
      }
    }
    pending.push_back(line);
    pending_index.push_back(i);
  }
  if (pending.empty()) return result;

  std::vector<std::string> translated;
  try {
    translated = engine.translate(pending);
  } catch (const EngineLineError &e) {
    throw EngineLineError(pending_index.at(std::min(e.line(), pending_index.size() - 1)),
                          e.detail());
  }
  if (translated.size() != pending.size()) {
    throw Error(ErrorKind::kEngine, "engine " + engine.id() + " returned " +
                                        std::to_string(translated.size()) + " lines for " +
                                        std::to_string(pending.size()));
  }
  for (std::size_t k = 0; k < pending.size(); ++k) {
    auto line = single_line(translated[k]);
    if (cache) cache->store(pending[k], line);
    result.lines[pending_index[k]] = std::move(line);
  }
  return result;
}

TranslationResult translate_lines(const TranslationRequest &request,
                                  TranslationEngine &engine,
                                  const std::filesystem::path &cache_dir) {
  if (cache_dir.empty()) return translate_lines(request, engine, nullptr);
  TranslationCache cache(cache_dir, engine.id(), request.source_lang,
                         request.target_lang);
  return translate_lines(request, engine, &cache);
}

}  // namespace bitext
