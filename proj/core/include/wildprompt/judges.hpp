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

#ifndef WILDPROMPT_JUDGES_HPP
#define WILDPROMPT_JUDGES_HPP

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wildprompt/corpus.hpp"

namespace wildprompt::judges {

/// Envelope for one judge call.
struct JudgeRequest {
  std::string system_prompt;
  std::string user_text;
  std::optional<std::filesystem::path> audio_path;
  int timeout_ms = 30000;
  int max_retries = 3;
};

/// A 0-10 expressiveness verdict for one utterance.
struct AudioScore {
  std::string utt_id;
  double value = 0.0;  // always in [0,10]; out-of-range replies are errors
  std::string raw_response;
};

/// The reference sentence picked by the text judge, still unresolved
/// against the candidate pool.
struct TextSelectionAnswer {
  std::string target_utt_id;
  std::string answer_text;
  std::string raw_response;
};

// ---------------------------------------------------------------------------
// Prompt templates
// ---------------------------------------------------------------------------

/// System prompt for audio expressiveness scoring. Asks for a single 0-10
/// number as the verdict.
std::string_view audio_scoring_rubric();

/// User-message template for reference selection, with `{text}` and
/// `{reference}` placeholders. Asks for the chosen sentence inside
/// <answer></answer> tags.
std::string_view text_selection_template();

/// Candidates rendered one per line as `1. <text>`.
std::string render_candidate_list(const std::vector<std::string>& candidates);

/// text_selection_template() with both placeholders substituted.
std::string render_text_selection_prompt(const std::string& target_text,
                                         const std::vector<std::string>& candidates);

// ---------------------------------------------------------------------------
// Response parsing
// ---------------------------------------------------------------------------

/// Returns the LAST decimal number in `raw` whose value lies in [0,10];
/// out-of-range numbers are not candidates. Judges often restate rubric
/// bands ("9-10: ...") before the verdict, so the final number is the
/// verdict. Throws UnparseableScore.
double parse_score(const std::string& raw);

/// Canonical rendering of a score value; parse_score(format_score(v)) == v.
std::string format_score(double value);

/// Content of the FIRST <answer>...</answer> span, trimmed. Tag match is
/// case-insensitive and tolerates whitespace inside the tags.
/// Throws MissingAnswerTag.
std::string extract_answer(const std::string& raw);

// ---------------------------------------------------------------------------
// Judge interfaces
// ---------------------------------------------------------------------------

class AudioJudge {
 public:
  virtual ~AudioJudge() = default;

  /// Scores one utterance. Thread-safe.
  /// Throws TransportError (after retries) or UnparseableScore.
  virtual AudioScore score(const corpus::UtteranceRecord& utt) const = 0;
};

class TextJudge {
 public:
  virtual ~TextJudge() = default;

  /// Picks the best reference text for the target. Candidates must be
  /// non-empty. Thread-safe.
  /// Throws TransportError (after retries) or MissingAnswerTag.
  virtual TextSelectionAnswer select(const std::string& target_utt_id,
                                     const std::string& target_text,
                                     const std::vector<std::string>& candidates) const = 0;
};

// ---------------------------------------------------------------------------
// Deterministic stubs
// ---------------------------------------------------------------------------

/// FNV-1a over the seed bytes followed by the data bytes. Stable across
/// platforms and runs, unlike std::hash.
std::uint64_t stable_hash64(std::string_view data, std::uint64_t seed);

struct AudioCallRecord {
  std::string utt_id;
  double value;
};

struct TextCallRecord {
  std::string target_utt_id;
  std::vector<std::string> candidate_texts;
  std::string answer_text;
};

/// Thread-safe in-memory transcript of stub judge calls, for pipeline audits.
class JudgeCallLog {
 public:
  void record_audio(AudioCallRecord rec);
  void record_text(TextCallRecord rec);

  std::vector<AudioCallRecord> audio_calls() const;
  std::vector<TextCallRecord> text_calls() const;
  std::size_t audio_call_count() const;
  std::size_t text_call_count() const;

 private:
  mutable std::mutex mu_;
  std::vector<AudioCallRecord> audio_calls_;
  std::vector<TextCallRecord> text_calls_;
};

/// score = stable_hash64(utt_id, seed) mod 11. No I/O, no audio reads.
class StubAudioJudge : public AudioJudge {
 public:
  explicit StubAudioJudge(std::uint64_t seed, JudgeCallLog* log = nullptr)
      : seed_(seed), log_(log) {}

  AudioScore score(const corpus::UtteranceRecord& utt) const override;

 private:
  std::uint64_t seed_;
  JudgeCallLog* log_;
};

/// Picks the candidate maximizing stable_hash64(target_utt_id + US + text)
/// and wraps it in <answer> tags, mimicking a well-behaved judge.
class StubTextJudge : public TextJudge {
 public:
  explicit StubTextJudge(std::uint64_t seed, JudgeCallLog* log = nullptr)
      : seed_(seed), log_(log) {}

  TextSelectionAnswer select(const std::string& target_utt_id,
                             const std::string& target_text,
                             const std::vector<std::string>& candidates) const override;

 private:
  std::uint64_t seed_;
  JudgeCallLog* log_;
};

}  // namespace wildprompt::judges

#endif  // WILDPROMPT_JUDGES_HPP
