// Copyright 2026 the wildprompt authors
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

#ifndef WILDPROMPT_ERROR_HPP
#define WILDPROMPT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wildprompt {

enum class ErrorCode {
  // corpus
  MalformedLine,
  DuplicateId,
  MissingField,
  EmptyPool,
  NonFiniteScore,
  // judges
  TransportError,
  UnparseableScore,
  MissingAnswerTag,
  // selection
  MissingScore,
  UnresolvedSelection,
  // ema / checkpoint container
  InvalidBeta,
  SchemaMismatch,
  BadMagic,
  UnsupportedVersion,
  TruncatedFile,
  ChecksumMismatch,
  // metrics
  EmptyReference,
  IdMismatch,
  DimensionMismatch,
  ZeroNorm,
  MissingLabelClass,
  EmptyClass,
  EmptyScoreFile,
  // plumbing
  IoError,
  InvalidArgument,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

/// All library failures surface as this exception; `code()` carries the
/// machine-checkable identity, `what()` the human context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }

  /// The context without the code-name prefix, for rewrapping.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

/// True for environment failures (unreadable/missing files). False for
/// content failures (malformed data, schema violations), which callers
/// report differently.
bool is_io_error(ErrorCode code);

}  // namespace wildprompt

#endif  // WILDPROMPT_ERROR_HPP
