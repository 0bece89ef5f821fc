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

#include "wildprompt/http_judge.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "wildprompt/error.hpp"

namespace wildprompt::judges {

namespace {

using nlohmann::json;

// Splits "http://host:port/some/path" into the httplib host part and the
// request path. A bare host gets the standard chat-completions path.
struct SplitUrl {
  std::string host;  // scheme://authority
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::ConfigError, "judge url missing scheme: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    return {url, "/v1/chat/completions"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string base64_encode(const std::string& bytes) {
  static const char table[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= bytes.size()) {
    std::uint32_t n = (static_cast<std::uint8_t>(bytes[i]) << 16) |
                      (static_cast<std::uint8_t>(bytes[i + 1]) << 8) |
                      static_cast<std::uint8_t>(bytes[i + 2]);
    out.push_back(table[(n >> 18) & 63]);
    out.push_back(table[(n >> 12) & 63]);
    out.push_back(table[(n >> 6) & 63]);
    out.push_back(table[n & 63]);
    i += 3;
  }
  std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    std::uint32_t n = static_cast<std::uint8_t>(bytes[i]) << 16;
    out.push_back(table[(n >> 18) & 63]);
    out.push_back(table[(n >> 12) & 63]);
    out += "==";
  } else if (rest == 2) {
    std::uint32_t n = (static_cast<std::uint8_t>(bytes[i]) << 16) |
                      (static_cast<std::uint8_t>(bytes[i + 1]) << 8);
    out.push_back(table[(n >> 18) & 63]);
    out.push_back(table[(n >> 12) & 63]);
    out.push_back(table[(n >> 6) & 63]);
    out += "=";
  }
  return out;
}

std::string audio_format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".mp3") return "mp3";
  if (ext == ".flac") return "flac";
  if (ext == ".ogg") return "ogg";
  return "wav";
}

std::string read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read audio file: " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::IoError, "failed reading audio file: " + path.string());
  }
  return bytes;
}

// Assistant content may be a plain string or an array of typed parts.
std::string content_to_text(const json& content) {
  if (content.is_string()) return content.get<std::string>();
  if (content.is_array()) {
    std::string out;
    for (const auto& part : content) {
      if (part.is_object() && part.value("type", "") == "text") {
        out += part.value("text", "");
      }
    }
    return out;
  }
  throw Error(ErrorCode::TransportError, "unsupported message content shape");
}

int jittered_ms(int base_ms) {
  if (base_ms <= 0) return 0;
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_real_distribution<double> dist(0.8, 1.2);
  return static_cast<int>(base_ms * dist(rng));
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

AuditLog::AuditLog(std::filesystem::path path) : path_(std::move(path)) {}

void AuditLog::append(const std::string& json_object_line) {
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::app);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open audit log: " + path_.string());
  }
  out << json_object_line << '\n';
}

HttpJudgeClient::HttpJudgeClient(JudgeEndpointConfig cfg, AuditLog* audit)
    : cfg_(std::move(cfg)), audit_(audit) {
  if (cfg_.url.empty()) {
    throw Error(ErrorCode::ConfigError, "judge url is empty");
  }
  if (cfg_.timeout_ms <= 0) {
    throw Error(ErrorCode::ConfigError, "judge timeout_ms must be positive");
  }
  if (cfg_.max_retries < 0) {
    throw Error(ErrorCode::ConfigError, "judge max_retries must be nonnegative");
  }
}

std::string HttpJudgeClient::complete(const JudgeRequest& request,
                                      const std::string& context_id) const {
  if (request.timeout_ms <= 0) {
    throw Error(ErrorCode::InvalidArgument, "timeout_ms must be positive");
  }
  if (request.max_retries < 0) {
    throw Error(ErrorCode::InvalidArgument, "max_retries must be nonnegative");
  }
  SplitUrl endpoint = split_url(cfg_.url);

  json user_content;
  if (request.audio_path) {
    json audio_part = {
        {"type", "input_audio"},
        {"input_audio",
         {{"data", base64_encode(read_binary_file(*request.audio_path))},
          {"format", audio_format_from_extension(*request.audio_path)}}},
    };
    user_content =
        json::array({audio_part, json{{"type", "text"}, {"text", request.user_text}}});
  } else {
    user_content = request.user_text;
  }
  json body = {
      {"model", cfg_.model},
      {"messages",
       json::array({json{{"role", "system"}, {"content", request.system_prompt}},
                    json{{"role", "user"}, {"content", user_content}}})},
  };
  const std::string body_str = body.dump();

  httplib::Headers headers;
  if (!cfg_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + cfg_.api_key);
  }

  std::string last_failure;
  int backoff_ms = cfg_.backoff_initial_ms;
  for (int attempt = 0; attempt <= request.max_retries; ++attempt) {
    if (attempt > 0) {
      int delay = jittered_ms(backoff_ms);
      if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      backoff_ms *= 2;
    }

    httplib::Client cli(endpoint.host);
    cli.set_connection_timeout(0, request.timeout_ms * 1000LL);
    cli.set_read_timeout(0, request.timeout_ms * 1000LL);
    cli.set_write_timeout(0, request.timeout_ms * 1000LL);

    auto res = cli.Post(endpoint.path, headers, body_str, "application/json");

    if (audit_) {
      json line = {
          {"context_id", context_id},
          {"attempt", attempt + 1},
          {"url", cfg_.url},
          {"model", cfg_.model},
          {"system_prompt", request.system_prompt},
          {"user_text", request.user_text},
          {"audio_path",
           request.audio_path ? json(request.audio_path->string()) : json(nullptr)},
          {"status", res ? json(res->status) : json(nullptr)},
          {"response", res ? json(res->body) : json(httplib::to_string(res.error()))},
      };
      audit_->append(line.dump());
    }

    if (!res) {
      last_failure = std::string("connection failure: ") + httplib::to_string(res.error());
      continue;
    }
    if (retryable_status(res->status)) {
      last_failure = "HTTP " + std::to_string(res->status) + ": " + res->body;
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::TransportError,
                  "judge returned HTTP " + std::to_string(res->status) + " for " + context_id +
                      ": " + res->body);
    }

    json reply;
    try {
      reply = json::parse(res->body);
      return content_to_text(reply.at("choices").at(0).at("message").at("content"));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::TransportError,
                  "malformed judge response for " + context_id + ": " + e.what());
    }
  }
  throw Error(ErrorCode::TransportError,
              "judge unreachable for " + context_id + " after " +
                  std::to_string(request.max_retries + 1) + " attempts; last: " + last_failure);
}

AudioScore HttpJudgeClient::score_audio(const JudgeRequest& request,
                                        const corpus::UtteranceRecord& utt) const {
  JudgeRequest effective = request;
  if (effective.system_prompt.empty()) {
    effective.system_prompt = std::string(audio_scoring_rubric());
  }
  if (!effective.audio_path) {
    effective.audio_path = std::filesystem::path(utt.audio_path);
  }
  if (effective.user_text.empty()) {
    effective.user_text = utt.text;
  }
  std::string raw = complete(effective, utt.utt_id);
  AudioScore score;
  score.utt_id = utt.utt_id;
  score.raw_response = raw;
  score.value = parse_score(raw);
  return score;
}

TextSelectionAnswer HttpJudgeClient::select_text(const JudgeRequest& request,
                                                 const std::string& target_utt_id,
                                                 const std::vector<std::string>& candidates) const {
  if (candidates.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no candidates for " + target_utt_id);
  }
  std::string raw = complete(request, target_utt_id);
  TextSelectionAnswer answer;
  answer.target_utt_id = target_utt_id;
  answer.raw_response = raw;
  answer.answer_text = extract_answer(raw);
  return answer;
}

HttpAudioJudge::HttpAudioJudge(JudgeEndpointConfig cfg, std::filesystem::path manifest_path,
                               AuditLog* audit)
    : client_(std::move(cfg), audit), manifest_path_(std::move(manifest_path)) {}

AudioScore HttpAudioJudge::score(const corpus::UtteranceRecord& utt) const {
  JudgeRequest request;
  request.system_prompt = std::string(audio_scoring_rubric());
  request.audio_path = corpus::resolve_audio_path(manifest_path_, utt);
  request.timeout_ms = client_.config().timeout_ms;
  request.max_retries = client_.config().max_retries;
  return client_.score_audio(request, utt);
}

HttpTextJudge::HttpTextJudge(JudgeEndpointConfig cfg, AuditLog* audit)
    : client_(std::move(cfg), audit) {}

TextSelectionAnswer HttpTextJudge::select(const std::string& target_utt_id,
                                          const std::string& target_text,
                                          const std::vector<std::string>& candidates) const {
  JudgeRequest request;
  request.user_text = render_text_selection_prompt(target_text, candidates);
  request.timeout_ms = client_.config().timeout_ms;
  request.max_retries = client_.config().max_retries;
  return client_.select_text(request, target_utt_id, candidates);
}

}  // namespace wildprompt::judges
