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

#include "wildprompt/judges.hpp"

#include <charconv>
#include <cstdio>
#include <regex>

#include "wildprompt/error.hpp"

namespace wildprompt::judges {

namespace {

constexpr std::string_view kAudioScoringRubric =
    R"(You are an audio expressiveness expert. Evaluate the provided audio sample to determine its suitability as a prompt audio for expressive TTS systems.

Evaluation Criteria:
1. Emotional Richness (4 points) - Clear emotional expression, dynamic range, engaging tone
2. Voice Expressiveness (3 points) - Varied intonation, natural emphasis, compelling delivery
3. Prompt Suitability (3 points) - Distinctive characteristics, memorable voice, good reference quality

Focus on identifying audio with:
- Strong emotional expression and personality
- Natural variations in pitch, pace, and intensity  
- Engaging and distinctive vocal characteristics
- Clear demonstration of target speaking style

Scoring Guidelines:
- 9-10: Highly expressive, excellent prompt material
- 7-8: Good expressiveness, suitable for prompts
- 5-6: Moderate expressiveness, acceptable
- 0-4: Low expressiveness, not suitable as prompt

Output only the final total score as a number between 0-10.

Please evaluate the following audio and its corresponding text:)";

constexpr std::string_view kTextSelectionTemplate =
    R"(You are a speech synthesis expert specializing in prosodic and emotional analysis. Evaluate each reference text and select the best one to guide TTS synthesis of the target text.

**Evaluation Framework:**
1. **Prosodic Alignment** (0-10): Rhythm patterns, stress distribution, intonation flow, syllable timing
2. **Emotional Congruence** (0-10): Emotional intensity, sentiment polarity, expressive quality
3. **Linguistic Compatibility** (0-10): Sentence structure, phrase boundaries, syntactic complexity
4. **TTS Reference Suitability** (0-10): Overall effectiveness as prosodic template

**Input:**
- **Target Text**: {text}
- **Reference Candidates**: {reference}

**Output Format:**
Output the selected reference sentence in <answer> </answer> directly <no-think>)";

std::string trim(const std::string& s) {
  const char* ws = " \t\n\r";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

void replace_all(std::string& text, std::string_view placeholder, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
}

}  // namespace

std::string_view audio_scoring_rubric() { return kAudioScoringRubric; }

std::string_view text_selection_template() { return kTextSelectionTemplate; }

std::string render_candidate_list(const std::vector<std::string>& candidates) {
  std::string out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += std::to_string(i + 1);
    out += ". ";
    out += candidates[i];
  }
  return out;
}

std::string render_text_selection_prompt(const std::string& target_text,
                                         const std::vector<std::string>& candidates) {
  std::string prompt(kTextSelectionTemplate);
  replace_all(prompt, "{text}", target_text);
  replace_all(prompt, "{reference}", render_candidate_list(candidates));
  return prompt;
}

double parse_score(const std::string& raw) {
  static const std::regex number_re(R"(\d+(?:\.\d+)?)");
  double last_in_range = -1.0;
  bool found = false;
  for (auto it = std::sregex_iterator(raw.begin(), raw.end(), number_re);
       it != std::sregex_iterator(); ++it) {
    const std::string text = it->str();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) continue;
    if (value >= 0.0 && value <= 10.0) {
      last_in_range = value;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::UnparseableScore, "no score in [0,10] found in: " + raw);
  }
  return last_in_range;
}

std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

std::string extract_answer(const std::string& raw) {
  static const std::regex answer_re(R"(<\s*answer\s*>([\s\S]*?)<\s*/\s*answer\s*>)",
                                    std::regex::icase);
  std::smatch match;
  if (!std::regex_search(raw, match, answer_re)) {
    throw Error(ErrorCode::MissingAnswerTag, raw);
  }
  std::string answer = trim(match[1].str());
  if (answer.empty()) {
    throw Error(ErrorCode::MissingAnswerTag, "empty answer span in: " + raw);
  }
  return answer;
}

// ---------------------------------------------------------------------------
// Stubs
// ---------------------------------------------------------------------------

std::uint64_t stable_hash64(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ULL;  // FNV-1a offset basis
  auto mix = [&h](std::uint8_t byte) {
    h ^= byte;
    h *= 1099511628211ULL;  // FNV prime
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<std::uint8_t>(seed >> (8 * i)));
  for (char c : data) mix(static_cast<std::uint8_t>(c));
  return h;
}

void JudgeCallLog::record_audio(AudioCallRecord rec) {
  std::lock_guard<std::mutex> lock(mu_);
  audio_calls_.push_back(std::move(rec));
}

void JudgeCallLog::record_text(TextCallRecord rec) {
  std::lock_guard<std::mutex> lock(mu_);
  text_calls_.push_back(std::move(rec));
}

std::vector<AudioCallRecord> JudgeCallLog::audio_calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return audio_calls_;
}

std::vector<TextCallRecord> JudgeCallLog::text_calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return text_calls_;
}

std::size_t JudgeCallLog::audio_call_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return audio_calls_.size();
}

std::size_t JudgeCallLog::text_call_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return text_calls_.size();
}

AudioScore StubAudioJudge::score(const corpus::UtteranceRecord& utt) const {
  AudioScore result;
  result.utt_id = utt.utt_id;
  result.value = static_cast<double>(stable_hash64(utt.utt_id, seed_) % 11);
  result.raw_response = format_score(result.value);
  if (log_) log_->record_audio({result.utt_id, result.value});
  return result;
}

TextSelectionAnswer StubTextJudge::select(const std::string& target_utt_id,
                                          const std::string& target_text,
                                          const std::vector<std::string>& candidates) const {
  (void)target_text;
  if (candidates.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no candidates for " + target_utt_id);
  }
  std::size_t best = 0;
  std::uint64_t best_hash = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::uint64_t h = stable_hash64(target_utt_id + '\x1f' + candidates[i], seed_);
    if (i == 0 || h > best_hash) {
      best = i;
      best_hash = h;
    }
  }
  TextSelectionAnswer answer;
  answer.target_utt_id = target_utt_id;
  answer.answer_text = candidates[best];
  answer.raw_response = "<answer>" + candidates[best] + "</answer>";
  if (log_) log_->record_text({target_utt_id, candidates, answer.answer_text});
  return answer;
}

}  // namespace wildprompt::judges
