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

#ifndef BITEXT_ERROR_HPP_
#define BITEXT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace bitext {

// Failure classes surfaced through the C API as status codes.
enum class ErrorKind {
  kInvalidArgument,
  kConfig,
  kIo,
  kInput,
  kStage,
  kNetwork,
  kEmptyDocument,
  kEngine,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by extract_clean_text when nothing survives cleaning.
class EmptyDocumentError : public Error {
 public:
  explicit EmptyDocumentError(const std::string &message)
      : Error(ErrorKind::kEmptyDocument, message) {}
};

// Wraps a failure with the pipeline stage and document that caused it.
class StageError : public Error {
 public:
  StageError(std::string stage, std::string doc_id, const std::string &what)
      : Error(ErrorKind::kStage,
              "stage '" + stage + "' failed" +
                  (doc_id.empty() ? std::string() : " on document " + doc_id) +
                  ": " + what),
        stage_(std::move(stage)),
        doc_id_(std::move(doc_id)) {}

  const std::string &stage() const { return stage_; }
  const std::string &doc_id() const { return doc_id_; }

 private:
  std::string stage_;
  std::string doc_id_;
};

}  // namespace bitext

#endif  // BITEXT_ERROR_HPP_
