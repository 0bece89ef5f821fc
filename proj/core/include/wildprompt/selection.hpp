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

#ifndef WILDPROMPT_SELECTION_HPP
#define WILDPROMPT_SELECTION_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wildprompt/corpus.hpp"
#include "wildprompt/error.hpp"
#include "wildprompt/judges.hpp"

namespace wildprompt::selection {

enum class FallbackPolicy {
  // Unresolvable text answers and stage-2 judge failures fall back to the
  // highest audio-score survivor, so every target still gets a prompt.
  HighestAudioScore,
  // Propagate instead, annotated with the target utt_id.
  Fail,
};

enum class SelectionStage { TextSelected, FallbackAudio };

const char* fallback_policy_name(FallbackPolicy policy);
std::optional<FallbackPolicy> fallback_policy_from_name(const std::string& name);
const char* stage_name(SelectionStage stage);
std::optional<SelectionStage> stage_from_name(const std::string& name);

struct SelectionConfig {
  double audio_threshold = 7.0;
  int parallelism = 8;
  FallbackPolicy fallback_policy = FallbackPolicy::HighestAudioScore;
  double resolver_min_similarity = 0.9;

  // Throws ConfigError on out-of-range values.
  void validate() const;
};

/// The chosen reference prompt for one synthesis target.
/// prompt_audio_path is carried verbatim from the enrollment manifest.
struct PromptSelection {
  std::string target_utt_id;
  std::string target_text;
  std::string prompt_utt_id;
  std::string prompt_text;
  std::string prompt_audio_path;
  double audio_score = 0.0;
  SelectionStage stage = SelectionStage::TextSelected;

  bool operator==(const PromptSelection&) const = default;
};

// ---------------------------------------------------------------------------
// Stage 1: audio filtering
// ---------------------------------------------------------------------------

/// Candidates scoring >= cfg.audio_threshold, descending score, ties by
/// ascending utt_id. Never empty: when nothing passes, the single
/// highest-scoring candidate survives. Throws MissingScore when a
/// candidate has no score.
std::vector<corpus::UtteranceRecord> filter_by_audio(
    const corpus::PromptPool& pool,
    const std::map<std::string, judges::AudioScore>& scores,
    const SelectionConfig& cfg);

// ---------------------------------------------------------------------------
// Stage 2: answer resolution
// ---------------------------------------------------------------------------

/// Matching canonicalization: ASCII lowercase, whitespace runs collapsed
/// to single spaces, ends trimmed, trailing .,!?;: stripped.
std::string normalize_for_match(std::string_view text);

/// Edit distance counting insertions, deletions, substitutions, and
/// adjacent transpositions, each at cost 1.
std::size_t osa_distance(std::string_view a, std::string_view b);

/// 1 - osa_distance/max(len) over normalize_for_match() of both sides;
/// 1.0 when both normalize to empty.
double answer_similarity(std::string_view answer, std::string_view candidate);

/// The survivor whose text matches answer.answer_text after
/// normalization, else the most similar survivor if its similarity
/// reaches cfg.resolver_min_similarity; nullopt when nothing qualifies.
/// Ties keep the earliest survivor (highest audio score).
std::optional<corpus::UtteranceRecord> try_resolve_answer(
    const judges::TextSelectionAnswer& answer,
    const std::vector<corpus::UtteranceRecord>& survivors,
    const SelectionConfig& cfg);

/// try_resolve_answer with the fallback policy applied: unresolved
/// answers yield the top survivor under HighestAudioScore and throw
/// UnresolvedSelection under Fail. Survivors must be non-empty.
corpus::UtteranceRecord resolve_answer(
    const judges::TextSelectionAnswer& answer,
    const std::vector<corpus::UtteranceRecord>& survivors,
    const SelectionConfig& cfg);

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

/// A target the pipeline could not serve (only possible under
/// FallbackPolicy::Fail; the other policy always falls back).
struct TargetFailure {
  std::string target_utt_id;
  ErrorCode code;
  std::string message;
};

struct SelectionOutcome {
  std::vector<PromptSelection> selections;  // sorted by target_utt_id
  std::vector<TargetFailure> failures;      // sorted by target_utt_id
};

/// Runs the two-stage pipeline: every distinct candidate utt_id is audio-
/// scored exactly once (cached across pools), then each target's
/// survivors go to the text judge. Judge calls run on up to
/// cfg.parallelism threads; results are sorted by target_utt_id and are
/// byte-stable across parallelism levels. pools[i] must belong to
/// targets[i]. Per-target stage-2 failures land in `failures`;
/// stage-1 and input errors throw.
SelectionOutcome run_selection_collect(
    const std::vector<corpus::UtteranceRecord>& targets,
    const std::vector<corpus::PromptPool>& pools,
    const judges::AudioJudge& audio_judge,
    const judges::TextJudge& text_judge,
    const SelectionConfig& cfg);

/// run_selection_collect, but any target failure throws (the first by
/// target_utt_id order, annotated with it).
std::vector<PromptSelection> run_selection(
    const std::vector<corpus::UtteranceRecord>& targets,
    const std::vector<corpus::PromptPool>& pools,
    const judges::AudioJudge& audio_judge,
    const judges::TextJudge& text_judge,
    const SelectionConfig& cfg);

/// JSON-lines hand-off to the TTS engine, one object per selection with
/// fields {target_utt_id, gen_text, ref_audio, ref_text}. Selections must
/// already be sorted by target_utt_id.
void write_job_manifest(const std::vector<PromptSelection>& selections,
                        const std::filesystem::path& path);

/// One job-manifest line, parsed back. Field order in the file is
/// alphabetical; round-trips through write_job_manifest exactly.
struct JobManifestEntry {
  std::string target_utt_id;
  std::string gen_text;
  std::string ref_audio;
  std::string ref_text;

  bool operator==(const JobManifestEntry&) const = default;
};

/// Reads a job manifest back. Throws MalformedLine, MissingField, IoError.
std::vector<JobManifestEntry> read_job_manifest(const std::filesystem::path& path);

/// TSV audit trail: target_utt_id, prompt_utt_id, audio_score, stage.
void write_selection_audit(const std::vector<PromptSelection>& selections,
                           const std::filesystem::path& path);

}  // namespace wildprompt::selection

#endif  // WILDPROMPT_SELECTION_HPP
