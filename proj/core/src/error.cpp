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

#include "wildprompt/error.hpp"

namespace wildprompt {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::NonFiniteScore: return "NonFiniteScore";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::UnparseableScore: return "UnparseableScore";
    case ErrorCode::MissingAnswerTag: return "MissingAnswerTag";
    case ErrorCode::MissingScore: return "MissingScore";
    case ErrorCode::UnresolvedSelection: return "UnresolvedSelection";
    case ErrorCode::InvalidBeta: return "InvalidBeta";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::MissingLabelClass: return "MissingLabelClass";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::EmptyScoreFile: return "EmptyScoreFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

bool is_io_error(ErrorCode code) {
  return code == ErrorCode::IoError || code == ErrorCode::ConfigError ||
         code == ErrorCode::InvalidArgument;
}

}  // namespace wildprompt
