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

#ifndef WILDPROMPT_CORPUS_HPP
#define WILDPROMPT_CORPUS_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wildprompt::corpus {

enum class Split { Easy, Hard, Dev, Eval };

const char* split_name(Split split);
std::optional<Split> split_from_name(const std::string& name);

/// One audio/transcript row of a dataset manifest. `audio_path` is kept
/// verbatim as written in the manifest; resolve against the manifest's
/// directory with resolve_audio_path() before opening the file.
struct UtteranceRecord {
  std::string utt_id;
  std::string spk_id;
  std::string audio_path;
  std::string text;
  std::optional<double> duration_sec;
  std::optional<Split> split;

  bool operator==(const UtteranceRecord&) const = default;
};

/// All same-speaker enrollment utterances a target may draw its reference
/// prompt from. Candidates never include the target itself.
struct PromptPool {
  std::string target_utt_id;
  std::vector<UtteranceRecord> candidates;
};

/// Carrier for externally computed per-utterance metric scores
/// (UTMOS, DNSMOS, SDS, ...).
struct ScoreFile {
  std::map<std::string, double> entries;  // utt_id -> score
  std::string metric_name;
};

/// Reads a UTF-8 JSON-lines manifest, one UtteranceRecord object per line.
/// Unknown fields are ignored. Records are returned in file order.
/// Throws MalformedLine, DuplicateId, MissingField, IoError.
std::vector<UtteranceRecord> load_manifest(const std::filesystem::path& path);

/// Writes records as JSON-lines. load_manifest(write_manifest(r)) == r.
void write_manifest(const std::vector<UtteranceRecord>& records,
                    const std::filesystem::path& path);

/// Resolves a record's audio path relative to the manifest it came from.
/// Absolute audio paths pass through untouched.
std::filesystem::path resolve_audio_path(const std::filesystem::path& manifest_path,
                                         const UtteranceRecord& record);

/// One pool per target: all enrollment records sharing the target's spk_id,
/// sorted by utt_id ascending, the target itself excluded.
/// Throws EmptyPool when a target has no other same-speaker utterance.
std::vector<PromptPool> build_prompt_pools(
    const std::vector<UtteranceRecord>& targets,
    const std::vector<UtteranceRecord>& enrollment);

/// Reads `utt_id<TAB>score` lines; '#' comments and blank lines skipped.
/// Throws MalformedLine, DuplicateId, NonFiniteScore, IoError.
ScoreFile load_score_file(const std::filesystem::path& path,
                          const std::string& metric_name);

}  // namespace wildprompt::corpus

#endif  // WILDPROMPT_CORPUS_HPP
