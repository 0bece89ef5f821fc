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

#include "wildprompt/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "wildprompt/error.hpp"

namespace wildprompt::corpus {

using nlohmann::json;

const char* split_name(Split split) {
  switch (split) {
    case Split::Easy: return "easy";
    case Split::Hard: return "hard";
    case Split::Dev: return "dev";
    case Split::Eval: return "eval";
  }
  return "?";
}

std::optional<Split> split_from_name(const std::string& name) {
  if (name == "easy") return Split::Easy;
  if (name == "hard") return Split::Hard;
  if (name == "dev") return Split::Dev;
  if (name == "eval") return Split::Eval;
  return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\n\r";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

std::string require_string_field(const json& obj, const char* name, int line_no) {
  if (!obj.contains(name)) {
    throw Error(ErrorCode::MissingField,
                std::string(name) + " (line " + std::to_string(line_no) + ")");
  }
  if (!obj[name].is_string()) {
    throw Error(ErrorCode::MalformedLine,
                "line " + std::to_string(line_no) + ": field '" + name +
                    "' must be a string");
  }
  return obj[name].get<std::string>();
}

UtteranceRecord parse_record(const std::string& line, int line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedLine,
                "line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::MalformedLine,
                "line " + std::to_string(line_no) + ": not a JSON object");
  }

  UtteranceRecord rec;
  rec.utt_id = require_string_field(obj, "utt_id", line_no);
  rec.spk_id = require_string_field(obj, "spk_id", line_no);
  rec.audio_path = require_string_field(obj, "audio_path", line_no);
  rec.text = require_string_field(obj, "text", line_no);

  if (rec.utt_id.empty()) {
    throw Error(ErrorCode::MalformedLine,
                "line " + std::to_string(line_no) + ": empty utt_id");
  }
  if (trim(rec.text).empty()) {
    throw Error(ErrorCode::MalformedLine,
                "line " + std::to_string(line_no) + ": text is empty");
  }

  if (obj.contains("duration_sec")) {
    if (!obj["duration_sec"].is_number()) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": duration_sec must be a number");
    }
    double d = obj["duration_sec"].get<double>();
    if (!std::isfinite(d) || d < 0.0) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": duration_sec must be >= 0");
    }
    rec.duration_sec = d;
  }
  if (obj.contains("split")) {
    if (!obj["split"].is_string()) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": split must be a string");
    }
    auto split = split_from_name(obj["split"].get<std::string>());
    if (!split) {
      throw Error(ErrorCode::MalformedLine,
                  "line " + std::to_string(line_no) + ": split must be one of easy|hard|dev|eval");
    }
    rec.split = split;
  }
  return rec;
}

}  // namespace

std::vector<UtteranceRecord> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open manifest " + path.string());
  }

  std::vector<UtteranceRecord> records;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    UtteranceRecord rec = parse_record(line, line_no);
    if (!seen_ids.insert(rec.utt_id).second) {
      throw Error(ErrorCode::DuplicateId, rec.utt_id);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_manifest(const std::vector<UtteranceRecord>& records,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  }
  for (const auto& rec : records) {
    json obj;
    obj["utt_id"] = rec.utt_id;
    obj["spk_id"] = rec.spk_id;
    obj["audio_path"] = rec.audio_path;
    obj["text"] = rec.text;
    if (rec.duration_sec) obj["duration_sec"] = *rec.duration_sec;
    if (rec.split) obj["split"] = split_name(*rec.split);
    out << obj.dump() << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::IoError, "write failed for " + path.string());
  }
}

std::filesystem::path resolve_audio_path(const std::filesystem::path& manifest_path,
                                         const UtteranceRecord& record) {
  std::filesystem::path audio(record.audio_path);
  if (audio.is_absolute()) return audio;
  return (manifest_path.parent_path() / audio).lexically_normal();
}

std::vector<PromptPool> build_prompt_pools(
    const std::vector<UtteranceRecord>& targets,
    const std::vector<UtteranceRecord>& enrollment) {
  std::unordered_map<std::string, std::vector<const UtteranceRecord*>> by_speaker;
  for (const auto& rec : enrollment) {
    by_speaker[rec.spk_id].push_back(&rec);
  }

  std::vector<PromptPool> pools;
  pools.reserve(targets.size());
  for (const auto& target : targets) {
    PromptPool pool;
    pool.target_utt_id = target.utt_id;
    auto it = by_speaker.find(target.spk_id);
    if (it != by_speaker.end()) {
      for (const UtteranceRecord* rec : it->second) {
        if (rec->utt_id != target.utt_id) pool.candidates.push_back(*rec);
      }
    }
    if (pool.candidates.empty()) {
      throw Error(ErrorCode::EmptyPool, target.utt_id);
    }
    std::sort(pool.candidates.begin(), pool.candidates.end(),
              [](const UtteranceRecord& a, const UtteranceRecord& b) {
                return a.utt_id < b.utt_id;
              });
    pools.push_back(std::move(pool));
  }
  return pools;
}

ScoreFile load_score_file(const std::filesystem::path& path,
                          const std::string& metric_name) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open score file " + path.string());
  }

  ScoreFile file;
  file.metric_name = metric_name;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::MalformedLine,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected utt_id<TAB>score");
    }
    std::string utt_id = line.substr(0, tab);
    std::string score_text = trim(line.substr(tab + 1));
    double score = 0.0;
    auto [ptr, ec] = std::from_chars(score_text.data(),
                                     score_text.data() + score_text.size(), score);
    if (ec != std::errc() || ptr != score_text.data() + score_text.size()) {
      throw Error(ErrorCode::MalformedLine,
                  path.string() + ":" + std::to_string(line_no) +
                      ": bad score '" + score_text + "'");
    }
    if (!std::isfinite(score)) {
      throw Error(ErrorCode::NonFiniteScore,
                  utt_id + " at " + path.string() + ":" + std::to_string(line_no));
    }
    if (!file.entries.emplace(utt_id, score).second) {
      throw Error(ErrorCode::DuplicateId, utt_id);
    }
  }
  return file;
}

}  // namespace wildprompt::corpus
