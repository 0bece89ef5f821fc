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

#include <doctest.h>

#include <set>

#include "test_util.hpp"
#include "wildprompt/error.hpp"
#include "wildprompt/judges.hpp"

using namespace wildprompt;
using testutil::error_code_of;

namespace {

corpus::UtteranceRecord make_record(const std::string& id) {
  corpus::UtteranceRecord rec;
  rec.utt_id = id;
  rec.spk_id = "spk";
  rec.audio_path = id + ".wav";
  rec.text = "text of " + id;
  return rec;
}

}  // namespace

TEST_SUITE("judges") {

TEST_CASE("parse_score takes the last in-range number") {
  CHECK(judges::parse_score("8") == 8.0);
  CHECK(judges::parse_score("10") == 10.0);
  CHECK(judges::parse_score("Final total score: 7.5") == 7.5);
  CHECK(judges::parse_score("9-10: excellent band. I give 6") == 6.0);
  CHECK(judges::parse_score("first 3 then 9") == 9.0);
  // Out-of-range numbers are not candidates.
  CHECK(judges::parse_score("confidence 95 percent, score 7") == 7.0);
  CHECK(judges::parse_score("12 is too much so 10") == 10.0);
}

TEST_CASE("parse_score failures") {
  CHECK(error_code_of([] { judges::parse_score("very expressive!"); }) ==
        ErrorCode::UnparseableScore);
  CHECK(error_code_of([] { judges::parse_score("score 12"); }) == ErrorCode::UnparseableScore);
  CHECK(error_code_of([] { judges::parse_score(""); }) == ErrorCode::UnparseableScore);
}

TEST_CASE("parse_score inverts format_score on the rubric grid") {
  for (double v = 0.0; v <= 10.0; v += 0.5) {
    CHECK(judges::parse_score(judges::format_score(v)) == v);
  }
}

TEST_CASE("extract_answer takes the first span, trimmed") {
  CHECK(judges::extract_answer("<answer>the cat sat</answer>") == "the cat sat");
  CHECK(judges::extract_answer("reasoning...<answer> A </answer><answer>B</answer>") == "A");
  CHECK(judges::extract_answer("<ANSWER>loud</ANSWER>") == "loud");
  CHECK(judges::extract_answer("< answer >spaced tags< / answer >") == "spaced tags");
  CHECK(judges::extract_answer("<answer>line one\nline two</answer>") ==
        "line one\nline two");
}

TEST_CASE("extract_answer failures") {
  CHECK(error_code_of([] { judges::extract_answer("no tags here"); }) ==
        ErrorCode::MissingAnswerTag);
  CHECK(error_code_of([] { judges::extract_answer("<answer>   </answer>"); }) ==
        ErrorCode::MissingAnswerTag);
  CHECK(error_code_of([] { judges::extract_answer("<answer>unclosed"); }) ==
        ErrorCode::MissingAnswerTag);
}

TEST_CASE("prompt templates carry the expected contract") {
  auto rubric = std::string(judges::audio_scoring_rubric());
  CHECK(rubric.find("0-10") != std::string::npos);
  CHECK(rubric.ends_with("Please evaluate the following audio and its corresponding text:"));

  auto tmpl = std::string(judges::text_selection_template());
  CHECK(tmpl.find("{text}") != std::string::npos);
  CHECK(tmpl.find("{reference}") != std::string::npos);
  CHECK(tmpl.find("<answer>") != std::string::npos);
}

TEST_CASE("render_candidate_list numbers one per line") {
  CHECK(judges::render_candidate_list({}) == "");
  CHECK(judges::render_candidate_list({"only"}) == "1. only");
  CHECK(judges::render_candidate_list({"first", "second"}) == "1. first\n2. second");
}

TEST_CASE("render_text_selection_prompt substitutes both placeholders") {
  auto prompt = judges::render_text_selection_prompt("target words", {"cand a", "cand b"});
  CHECK(prompt.find("target words") != std::string::npos);
  CHECK(prompt.find("1. cand a\n2. cand b") != std::string::npos);
  CHECK(prompt.find("{text}") == std::string::npos);
  CHECK(prompt.find("{reference}") == std::string::npos);
}

TEST_CASE("stable_hash64 is pinned and seed-sensitive") {
  CHECK(judges::stable_hash64("abc", 0) == 12331098614541845867ULL);
  CHECK(judges::stable_hash64("abc", 1) == 13117744247869397868ULL);
  CHECK(judges::stable_hash64("abd", 0) == 12331104112099986922ULL);
  CHECK(judges::stable_hash64("abc", 0) == judges::stable_hash64("abc", 0));
}

TEST_CASE("stub audio judge is deterministic and in range") {
  judges::StubAudioJudge judge(7);
  auto first = judge.score(make_record("u1"));
  auto second = judge.score(make_record("u1"));
  CHECK(first.value == second.value);
  CHECK(first.utt_id == "u1");
  CHECK(judges::parse_score(first.raw_response) == first.value);

  std::set<double> seen;
  for (int i = 0; i < 1000; ++i) {
    double v = judge.score(make_record("utt_" + std::to_string(i))).value;
    CHECK(v >= 0.0);
    CHECK(v <= 10.0);
    CHECK(v == static_cast<double>(static_cast<int>(v)));
    seen.insert(v);
  }
  CHECK(seen.size() == 11);  // mod-11 range fully exercised
}

TEST_CASE("stub text judge picks a member deterministically") {
  judges::StubTextJudge judge(3);
  std::vector<std::string> candidates = {"alpha", "beta", "gamma"};
  auto first = judge.select("t1", "target", candidates);
  auto second = judge.select("t1", "target", candidates);
  CHECK(first.answer_text == second.answer_text);
  CHECK(first.target_utt_id == "t1");
  bool member = false;
  for (const auto& c : candidates) member = member || c == first.answer_text;
  CHECK(member);
  CHECK(judges::extract_answer(first.raw_response) == first.answer_text);

  CHECK(error_code_of([&] { judge.select("t1", "x", {}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("call log records calls thread-safely") {
  judges::JudgeCallLog log;
  judges::StubAudioJudge audio(1, &log);
  judges::StubTextJudge text(1, &log);
  audio.score(make_record("u1"));
  audio.score(make_record("u2"));
  text.select("t1", "x", {"a", "b"});
  CHECK(log.audio_call_count() == 2);
  CHECK(log.text_call_count() == 1);
  CHECK(log.audio_calls()[0].utt_id == "u1");
  CHECK(log.text_calls()[0].candidate_texts.size() == 2);
}

}  // TEST_SUITE
