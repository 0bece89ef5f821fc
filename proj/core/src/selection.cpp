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

#include "wildprompt/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "wildprompt/error.hpp"

namespace wildprompt::selection {

namespace {

using nlohmann::json;

// Runs fn(0..n-1) on up to `parallelism` threads. Each index runs exactly
// once; failures are rethrown in index order after all workers join, so
// the surfaced error does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int parallelism, Fn&& fn) {
  if (n == 0) return;
  std::size_t workers = std::min<std::size_t>(std::max(parallelism, 1), n);
  std::vector<std::exception_ptr> errors(n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= n) break;
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
}

bool is_terminal_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

}  // namespace

const char* fallback_policy_name(FallbackPolicy policy) {
  switch (policy) {
    case FallbackPolicy::HighestAudioScore:
      return "highest_audio_score";
    case FallbackPolicy::Fail:
      return "fail";
  }
  return "unknown";
}

std::optional<FallbackPolicy> fallback_policy_from_name(const std::string& name) {
  if (name == "highest_audio_score") return FallbackPolicy::HighestAudioScore;
  if (name == "fail") return FallbackPolicy::Fail;
  return std::nullopt;
}

const char* stage_name(SelectionStage stage) {
  switch (stage) {
    case SelectionStage::TextSelected:
      return "text_selected";
    case SelectionStage::FallbackAudio:
      return "fallback_audio";
  }
  return "unknown";
}

std::optional<SelectionStage> stage_from_name(const std::string& name) {
  if (name == "text_selected") return SelectionStage::TextSelected;
  if (name == "fallback_audio") return SelectionStage::FallbackAudio;
  return std::nullopt;
}

void SelectionConfig::validate() const {
  if (!(audio_threshold >= 0.0 && audio_threshold <= 10.0)) {
    throw Error(ErrorCode::ConfigError, "audio_threshold must be in [0,10]");
  }
  if (parallelism < 1) {
    throw Error(ErrorCode::ConfigError, "parallelism must be positive");
  }
  if (!(resolver_min_similarity >= 0.0 && resolver_min_similarity <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "resolver_min_similarity must be in [0,1]");
  }
}

std::vector<corpus::UtteranceRecord> filter_by_audio(
    const corpus::PromptPool& pool,
    const std::map<std::string, judges::AudioScore>& scores,
    const SelectionConfig& cfg) {
  struct Scored {
    const corpus::UtteranceRecord* record;
    double score;
  };
  std::vector<Scored> all;
  all.reserve(pool.candidates.size());
  for (const auto& candidate : pool.candidates) {
    auto it = scores.find(candidate.utt_id);
    if (it == scores.end()) {
      throw Error(ErrorCode::MissingScore, "no audio score for " + candidate.utt_id);
    }
    all.push_back({&candidate, it->second.value});
  }
  std::stable_sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.record->utt_id < b.record->utt_id;
  });

  std::vector<corpus::UtteranceRecord> survivors;
  for (const auto& scored : all) {
    if (scored.score >= cfg.audio_threshold) survivors.push_back(*scored.record);
  }
  if (survivors.empty() && !all.empty()) {
    survivors.push_back(*all.front().record);  // floor rule: never drop a target
  }
  return survivors;
}

std::string normalize_for_match(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  while (!out.empty() && (is_terminal_punct(out.back()) || out.back() == ' ')) {
    out.pop_back();
  }
  return out;
}

std::size_t osa_distance(std::string_view a, std::string_view b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  if (m == 0) return n;
  if (n == 0) return m;
  std::vector<std::size_t> prev2(n + 1), prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) {
        cur[j] = std::min(cur[j], prev2[j - 2] + 1);
      }
    }
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return prev[n];
}

double answer_similarity(std::string_view answer, std::string_view candidate) {
  std::string a = normalize_for_match(answer);
  std::string b = normalize_for_match(candidate);
  std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(osa_distance(a, b)) / static_cast<double>(longest);
}

std::optional<corpus::UtteranceRecord> try_resolve_answer(
    const judges::TextSelectionAnswer& answer,
    const std::vector<corpus::UtteranceRecord>& survivors,
    const SelectionConfig& cfg) {
  const std::string wanted = normalize_for_match(answer.answer_text);
  for (const auto& survivor : survivors) {
    if (normalize_for_match(survivor.text) == wanted) return survivor;
  }
  const corpus::UtteranceRecord* best = nullptr;
  double best_similarity = -1.0;
  for (const auto& survivor : survivors) {
    double sim = answer_similarity(answer.answer_text, survivor.text);
    if (sim > best_similarity) {
      best_similarity = sim;
      best = &survivor;
    }
  }
  if (best != nullptr && best_similarity >= cfg.resolver_min_similarity) return *best;
  return std::nullopt;
}

corpus::UtteranceRecord resolve_answer(const judges::TextSelectionAnswer& answer,
                                       const std::vector<corpus::UtteranceRecord>& survivors,
                                       const SelectionConfig& cfg) {
  if (survivors.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "no survivors to resolve against for " + answer.target_utt_id);
  }
  if (auto resolved = try_resolve_answer(answer, survivors, cfg)) return *resolved;
  if (cfg.fallback_policy == FallbackPolicy::HighestAudioScore) return survivors.front();
  throw Error(ErrorCode::UnresolvedSelection,
              answer.target_utt_id + ": answer matches no survivor: " + answer.answer_text);
}

SelectionOutcome run_selection_collect(const std::vector<corpus::UtteranceRecord>& targets,
                                       const std::vector<corpus::PromptPool>& pools,
                                       const judges::AudioJudge& audio_judge,
                                       const judges::TextJudge& text_judge,
                                       const SelectionConfig& cfg) {
  cfg.validate();
  if (targets.size() != pools.size()) {
    throw Error(ErrorCode::InvalidArgument, "need exactly one pool per target");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (pools[i].target_utt_id != targets[i].utt_id) {
      throw Error(ErrorCode::InvalidArgument,
                  "pool " + pools[i].target_utt_id + " does not belong to target " +
                      targets[i].utt_id);
    }
    if (pools[i].candidates.empty()) {
      throw Error(ErrorCode::EmptyPool, "empty pool for " + targets[i].utt_id);
    }
  }

  // Stage 1: score each distinct candidate once, first-seen order.
  std::vector<const corpus::UtteranceRecord*> distinct;
  {
    std::unordered_set<std::string> seen;
    for (const auto& pool : pools) {
      for (const auto& candidate : pool.candidates) {
        if (seen.insert(candidate.utt_id).second) distinct.push_back(&candidate);
      }
    }
  }
  std::vector<judges::AudioScore> stage1(distinct.size());
  parallel_for(distinct.size(), cfg.parallelism,
               [&](std::size_t i) { stage1[i] = audio_judge.score(*distinct[i]); });
  std::map<std::string, judges::AudioScore> scores;
  for (auto& score : stage1) scores[score.utt_id] = std::move(score);

  // Stage 2: select a reference among each target's survivors.
  std::vector<std::optional<PromptSelection>> slots(targets.size());
  std::vector<std::optional<TargetFailure>> failed(targets.size());
  parallel_for(targets.size(), cfg.parallelism, [&](std::size_t i) {
    const auto& target = targets[i];
    auto survivors = filter_by_audio(pools[i], scores, cfg);

    const corpus::UtteranceRecord* chosen = nullptr;
    SelectionStage stage = SelectionStage::TextSelected;
    try {
      std::vector<std::string> texts;
      texts.reserve(survivors.size());
      for (const auto& s : survivors) texts.push_back(s.text);
      auto answer = text_judge.select(target.utt_id, target.text, texts);
      if (auto resolved = try_resolve_answer(answer, survivors, cfg)) {
        // Point back into survivors so audio_score lookup stays uniform.
        for (const auto& s : survivors) {
          if (s.utt_id == resolved->utt_id) {
            chosen = &s;
            break;
          }
        }
      }
      if (chosen == nullptr && cfg.fallback_policy == FallbackPolicy::Fail) {
        throw Error(ErrorCode::UnresolvedSelection,
                    "answer matches no survivor: " + answer.answer_text);
      }
    } catch (const Error& e) {
      if (cfg.fallback_policy == FallbackPolicy::Fail) {
        failed[i] = TargetFailure{target.utt_id, e.code(), e.message()};
        return;
      }
      chosen = nullptr;
    }
    if (chosen == nullptr) {
      chosen = &survivors.front();  // highest audio score
      stage = SelectionStage::FallbackAudio;
    }

    PromptSelection selection;
    selection.target_utt_id = target.utt_id;
    selection.target_text = target.text;
    selection.prompt_utt_id = chosen->utt_id;
    selection.prompt_text = chosen->text;
    selection.prompt_audio_path = chosen->audio_path;
    selection.audio_score = scores.at(chosen->utt_id).value;
    selection.stage = stage;
    slots[i] = std::move(selection);
  });

  SelectionOutcome outcome;
  for (auto& slot : slots) {
    if (slot) outcome.selections.push_back(std::move(*slot));
  }
  for (auto& failure : failed) {
    if (failure) outcome.failures.push_back(std::move(*failure));
  }
  std::sort(outcome.selections.begin(), outcome.selections.end(),
            [](const PromptSelection& a, const PromptSelection& b) {
              return a.target_utt_id < b.target_utt_id;
            });
  std::sort(outcome.failures.begin(), outcome.failures.end(),
            [](const TargetFailure& a, const TargetFailure& b) {
              return a.target_utt_id < b.target_utt_id;
            });
  return outcome;
}

std::vector<PromptSelection> run_selection(const std::vector<corpus::UtteranceRecord>& targets,
                                           const std::vector<corpus::PromptPool>& pools,
                                           const judges::AudioJudge& audio_judge,
                                           const judges::TextJudge& text_judge,
                                           const SelectionConfig& cfg) {
  auto outcome = run_selection_collect(targets, pools, audio_judge, text_judge, cfg);
  if (!outcome.failures.empty()) {
    const auto& first = outcome.failures.front();
    throw Error(first.code, first.target_utt_id + ": " + first.message);
  }
  return std::move(outcome.selections);
}

void write_job_manifest(const std::vector<PromptSelection>& selections,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open for writing: " + path.string());
  }
  for (const auto& selection : selections) {
    json line = {
        {"target_utt_id", selection.target_utt_id},
        {"gen_text", selection.target_text},
        {"ref_audio", selection.prompt_audio_path},
        {"ref_text", selection.prompt_text},
    };
    out << line.dump() << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::IoError, "failed writing: " + path.string());
  }
}

std::vector<JobManifestEntry> read_job_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open: " + path.string());
  }
  std::vector<JobManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json parsed;
    try {
      parsed = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedLine,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    JobManifestEntry entry;
    for (const char* field : {"target_utt_id", "gen_text", "ref_audio", "ref_text"}) {
      if (!parsed.contains(field) || !parsed[field].is_string()) {
        throw Error(ErrorCode::MissingField, path.string() + ":" + std::to_string(line_no) +
                                                 ": missing field " + field);
      }
    }
    entry.target_utt_id = parsed["target_utt_id"].get<std::string>();
    entry.gen_text = parsed["gen_text"].get<std::string>();
    entry.ref_audio = parsed["ref_audio"].get<std::string>();
    entry.ref_text = parsed["ref_text"].get<std::string>();
    entries.push_back(std::move(entry));
  }
  return entries;
}

void write_selection_audit(const std::vector<PromptSelection>& selections,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open for writing: " + path.string());
  }
  out << "# target_utt_id\tprompt_utt_id\taudio_score\tstage\n";
  char score_buf[32];
  for (const auto& selection : selections) {
    std::snprintf(score_buf, sizeof(score_buf), "%g", selection.audio_score);
    out << selection.target_utt_id << '\t' << selection.prompt_utt_id << '\t' << score_buf
        << '\t' << stage_name(selection.stage) << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::IoError, "failed writing: " + path.string());
  }
}

}  // namespace wildprompt::selection
