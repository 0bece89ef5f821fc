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

#ifndef WILDPROMPT_HTTP_JUDGE_HPP
#define WILDPROMPT_HTTP_JUDGE_HPP

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wildprompt/judges.hpp"

namespace wildprompt::judges {

/// Settings for a chat-completions judge endpoint. `url` is the full
/// endpoint URL; a URL without a path gets "/v1/chat/completions"
/// appended. A non-empty api_key is sent as a Bearer token.
struct JudgeEndpointConfig {
  std::string url;
  std::string model;
  std::string api_key;
  int timeout_ms = 30000;
  int max_retries = 3;
  // First retry delay; doubles per attempt with +-20% jitter. Zero
  // disables sleeping (useful in tests).
  int backoff_initial_ms = 500;
};

/// Append-only JSON-lines transcript of judge traffic. One line per HTTP
/// attempt; audio payloads are logged as paths, never as bytes. Safe for
/// concurrent writers.
class AuditLog {
 public:
  explicit AuditLog(std::filesystem::path path);

  void append(const std::string& json_object_line);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mu_;
};

/// Blocking HTTP client for the de-facto open chat-completions API.
/// Immutable after construction; safe to share across threads.
///
/// Retry policy: connection failures, 429 and 5xx responses are retried
/// up to max_retries with exponential backoff; other non-200 statuses
/// and malformed response bodies fail immediately with TransportError.
class HttpJudgeClient {
 public:
  explicit HttpJudgeClient(JudgeEndpointConfig cfg, AuditLog* audit = nullptr);

  /// Sends one chat request and returns the assistant message content.
  /// When request.audio_path is set the user message carries the file as
  /// a base64 input-audio content part ahead of the text. The request's
  /// timeout_ms and max_retries govern this call. `context_id` only
  /// labels audit-log lines.
  std::string complete(const JudgeRequest& request, const std::string& context_id) const;

  /// Scores one utterance against the audio expressiveness rubric.
  /// Audio bytes come from request.audio_path when set, else from
  /// utt.audio_path taken as a filesystem path.
  /// Throws TransportError (after retries) or UnparseableScore.
  AudioScore score_audio(const JudgeRequest& request,
                         const corpus::UtteranceRecord& utt) const;

  /// Asks the judge to pick the best reference text for target_text.
  /// request.user_text must already carry the rendered selection prompt.
  /// Throws TransportError or MissingAnswerTag.
  TextSelectionAnswer select_text(const JudgeRequest& request,
                                  const std::string& target_utt_id,
                                  const std::vector<std::string>& candidates) const;

  const JudgeEndpointConfig& config() const { return cfg_; }

 private:
  JudgeEndpointConfig cfg_;
  AuditLog* audit_;
};

/// AudioJudge backed by an HTTP endpoint. Relative audio paths in the
/// manifest resolve against the manifest's directory.
class HttpAudioJudge : public AudioJudge {
 public:
  HttpAudioJudge(JudgeEndpointConfig cfg, std::filesystem::path manifest_path,
                 AuditLog* audit = nullptr);

  AudioScore score(const corpus::UtteranceRecord& utt) const override;

 private:
  HttpJudgeClient client_;
  std::filesystem::path manifest_path_;
};

/// TextJudge backed by an HTTP endpoint.
class HttpTextJudge : public TextJudge {
 public:
  explicit HttpTextJudge(JudgeEndpointConfig cfg, AuditLog* audit = nullptr);

  TextSelectionAnswer select(const std::string& target_utt_id,
                             const std::string& target_text,
                             const std::vector<std::string>& candidates) const override;

 private:
  HttpJudgeClient client_;
};

}  // namespace wildprompt::judges

#endif  // WILDPROMPT_HTTP_JUDGE_HPP
