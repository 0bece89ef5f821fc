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

#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "wildprompt/checkpoint.hpp"
#include "wildprompt/corpus.hpp"
#include "wildprompt/ema.hpp"
#include "wildprompt/report.hpp"

namespace wildprompt::cli {

namespace {

using nlohmann::json;

json parse_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open config: " + path.string());
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw Error(ErrorCode::ConfigError, "unknown config key " + where + "." + key);
    }
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::pair<double, std::size_t> mean_of_score_file(const std::filesystem::path& path,
                                                  const std::string& metric_name) {
  return metrics::aggregate_scores(corpus::load_score_file(path, metric_name));
}

std::vector<std::pair<std::string, std::string>> load_pairs(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open pairs file: " + path.string());
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorCode::MalformedLine,
                  path.string() + ":" + std::to_string(line_no) + ": expected id_a<TAB>id_b");
    }
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no pairs in " + path.string());
  }
  return pairs;
}

const std::vector<float>& embedding_or_throw(const metrics::EmbeddingSet& set,
                                             const std::string& id,
                                             const std::filesystem::path& path) {
  auto it = set.vectors.find(id);
  if (it == set.vectors.end()) {
    throw Error(ErrorCode::IdMismatch, "no embedding for " + id + " in " + path.string());
  }
  return it->second;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open for writing: " + path.string());
  }
  out << content;
  if (!out) {
    throw Error(ErrorCode::IoError, "failed writing: " + path.string());
  }
}

ToolConfig resolve_config(const std::optional<std::string>& config_path) {
  ToolConfig config;
  if (config_path) config = load_tool_config(*config_path);
  apply_env_overrides(config);
  return config;
}

}  // namespace

ToolConfig load_tool_config(const std::filesystem::path& path) {
  json j = parse_config_json(path);
  if (!j.is_object()) {
    throw Error(ErrorCode::ConfigError, path.string() + ": config must be a JSON object");
  }
  reject_unknown_keys(j, {"judge", "stub_seed", "selection", "a_dcf", "audit_log"}, "$");

  ToolConfig config;
  try {
    if (j.contains("judge")) {
      const json& judge = j.at("judge");
      reject_unknown_keys(
          judge, {"url", "model", "api_key", "timeout_ms", "max_retries", "backoff_initial_ms"},
          "judge");
      read_field(judge, "url", config.judge.url);
      read_field(judge, "model", config.judge.model);
      read_field(judge, "api_key", config.judge.api_key);
      read_field(judge, "timeout_ms", config.judge.timeout_ms);
      read_field(judge, "max_retries", config.judge.max_retries);
      read_field(judge, "backoff_initial_ms", config.judge.backoff_initial_ms);
    }
    read_field(j, "stub_seed", config.stub_seed);
    if (j.contains("selection")) {
      const json& sel = j.at("selection");
      reject_unknown_keys(
          sel, {"audio_threshold", "parallelism", "fallback_policy", "resolver_min_similarity"},
          "selection");
      read_field(sel, "audio_threshold", config.selection.audio_threshold);
      read_field(sel, "parallelism", config.selection.parallelism);
      read_field(sel, "resolver_min_similarity", config.selection.resolver_min_similarity);
      if (sel.contains("fallback_policy")) {
        auto policy = selection::fallback_policy_from_name(sel.at("fallback_policy"));
        if (!policy) {
          throw Error(ErrorCode::ConfigError,
                      "unknown fallback_policy: " + sel.at("fallback_policy").dump());
        }
        config.selection.fallback_policy = *policy;
      }
    }
    if (j.contains("a_dcf")) {
      const json& adcf = j.at("a_dcf");
      reject_unknown_keys(adcf,
                          {"c_miss", "c_fa_nontarget", "c_fa_spoof", "prior_target",
                           "prior_nontarget", "prior_spoof"},
                          "a_dcf");
      read_field(adcf, "c_miss", config.a_dcf.c_miss);
      read_field(adcf, "c_fa_nontarget", config.a_dcf.c_fa_nontarget);
      read_field(adcf, "c_fa_spoof", config.a_dcf.c_fa_spoof);
      read_field(adcf, "prior_target", config.a_dcf.prior_target);
      read_field(adcf, "prior_nontarget", config.a_dcf.prior_nontarget);
      read_field(adcf, "prior_spoof", config.a_dcf.prior_spoof);
    }
    if (j.contains("audit_log")) config.audit_log = j.at("audit_log").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return config;
}

void apply_env_overrides(ToolConfig& config) {
  if (const char* url = std::getenv("WILDPROMPT_JUDGE_URL")) config.judge.url = url;
  if (const char* key = std::getenv("WILDPROMPT_JUDGE_KEY")) config.judge.api_key = key;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::TransportError:
      return 2;
    default:
      return 3;
  }
}

int cmd_select(const SelectArgs& args, std::ostream& out, std::ostream& err) {
  try {
    ToolConfig config = resolve_config(args.config_path);
    if (args.audio_threshold) config.selection.audio_threshold = *args.audio_threshold;
    if (args.parallelism) config.selection.parallelism = *args.parallelism;
    if (args.audit_log) config.audit_log = *args.audit_log;
    config.selection.validate();

    auto targets = corpus::load_manifest(args.targets_manifest);
    auto enrollment = corpus::load_manifest(args.enrollment_manifest);
    auto pools = corpus::build_prompt_pools(targets, enrollment);

    std::size_t distinct_candidates = 0;
    {
      std::unordered_set<std::string> seen;
      for (const auto& pool : pools) {
        for (const auto& candidate : pool.candidates) {
          if (seen.insert(candidate.utt_id).second) ++distinct_candidates;
        }
      }
    }

    if (args.dry_run) {
      out << "planned audio-judge calls: " << distinct_candidates << '\n';
      out << "planned text-judge calls: " << targets.size() << '\n';
      return 0;
    }

    std::optional<judges::AuditLog> audit;
    if (config.audit_log) audit.emplace(*config.audit_log);
    judges::AuditLog* audit_ptr = audit ? &*audit : nullptr;

    std::unique_ptr<judges::AudioJudge> audio_judge;
    std::unique_ptr<judges::TextJudge> text_judge;
    if (config.judge.url.empty()) {
      audio_judge = std::make_unique<judges::StubAudioJudge>(config.stub_seed);
      text_judge = std::make_unique<judges::StubTextJudge>(config.stub_seed);
    } else {
      audio_judge = std::make_unique<judges::HttpAudioJudge>(
          config.judge, args.enrollment_manifest, audit_ptr);
      text_judge = std::make_unique<judges::HttpTextJudge>(config.judge, audit_ptr);
    }

    auto outcome = selection::run_selection_collect(targets, pools, *audio_judge, *text_judge,
                                                    config.selection);
    selection::write_job_manifest(outcome.selections, args.out_path);
    if (args.audit_out) {
      selection::write_selection_audit(outcome.selections, *args.audit_out);
    }

    err << "selected " << outcome.selections.size() << " of " << targets.size()
        << " targets -> " << args.out_path << '\n';
    if (!outcome.failures.empty()) {
      err << outcome.failures.size() << " targets failed:\n";
      for (const auto& failure : outcome.failures) {
        err << "  " << failure.target_utt_id << ": " << error_code_name(failure.code) << ": "
            << failure.message << '\n';
      }
      if (outcome.selections.empty()) return exit_code_for(outcome.failures.front().code);
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_ema(const EmaArgs& args, std::ostream& out, std::ostream& err) {
  try {
    if (args.inputs.empty()) {
      throw Error(ErrorCode::InvalidArgument, "need at least one checkpoint");
    }
    double beta = args.beta.value_or(0.99);
    std::vector<std::filesystem::path> paths(args.inputs.begin(), args.inputs.end());
    auto averaged = ema::ema_average_files(paths, beta);
    ema::write_checkpoint(averaged, args.out_path);

    out << "checkpoints: " << args.inputs.size() << ", beta: " << beta << '\n';
    out << "tensors: " << averaged.tensors.size() << '\n';
    for (const auto& tensor : averaged.tensors) {
      out << "  " << tensor.name << " [";
      for (std::size_t d = 0; d < tensor.shape.size(); ++d) {
        if (d > 0) out << 'x';
        out << tensor.shape[d];
      }
      out << "] " << tensor.data.size() << " elems\n";
    }
    err << "wrote " << args.out_path << '\n';
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    ToolConfig config = resolve_config(args.config_path);
    auto format = report::format_from_name(args.format);
    if (!format) {
      throw Error(ErrorCode::InvalidArgument, "unknown format: " + args.format);
    }
    if (args.ref_transcripts.has_value() != args.hyp_transcripts.has_value()) {
      throw Error(ErrorCode::InvalidArgument,
                  "--ref and --hyp must be supplied together");
    }

    report::ReportRow row;
    row.system_label = args.label;

    if (args.utmos_scores) {
      row.report.utmos_mean = mean_of_score_file(*args.utmos_scores, "UTMOS").first;
    }
    if (args.dnsmos_scores) {
      row.report.dnsmos_mean = mean_of_score_file(*args.dnsmos_scores, "DNSMOS").first;
    }
    if (args.sds_scores) {
      row.report.sds_mean = mean_of_score_file(*args.sds_scores, "SDS").first;
    }
    if (args.ref_transcripts) {
      auto refs = metrics::load_transcripts(*args.ref_transcripts);
      auto hyps = metrics::load_transcripts(*args.hyp_transcripts);
      row.report.wer_percent = 100.0 * metrics::corpus_wer(refs, hyps);
    }
    if (args.embeddings.has_value() != args.embedding_pairs.has_value()) {
      throw Error(ErrorCode::InvalidArgument,
                  "--embeddings and --pairs must be supplied together");
    }
    if (args.embeddings) {
      auto set = metrics::load_embeddings(*args.embeddings);
      auto pairs = load_pairs(*args.embedding_pairs);
      double sum = 0.0;
      for (const auto& [id_a, id_b] : pairs) {
        metrics::EmbeddingVector a{id_a, embedding_or_throw(set, id_a, *args.embeddings)};
        metrics::EmbeddingVector b{id_b, embedding_or_throw(set, id_b, *args.embeddings)};
        sum += metrics::cosine_similarity(a, b);
      }
      row.report.spk_sim_mean = sum / static_cast<double>(pairs.size());
    }
    for (const auto& trial_path : args.trial_files) {
      auto trials = metrics::load_trial_scores(trial_path);
      auto result = metrics::a_dcf(trials, config.a_dcf);
      row.report.a_dcf.emplace_back(std::filesystem::path(trial_path).stem().string(),
                                    result.min_cost);
    }

    std::string rendered = report::render({row}, *format);
    out << rendered;
    if (args.out_path) write_text_file(*args.out_path, rendered);
    if (args.row_out) report::write_report_row(row, *args.row_out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  try {
    auto format = report::format_from_name(args.format);
    if (!format) {
      throw Error(ErrorCode::InvalidArgument, "unknown format: " + args.format);
    }
    if (args.row_files.empty()) {
      throw Error(ErrorCode::InvalidArgument, "need at least one row file");
    }
    std::vector<report::ReportRow> rows;
    rows.reserve(args.row_files.size());
    for (const auto& path : args.row_files) {
      rows.push_back(report::read_report_row(path));
    }
    std::string rendered = report::render(rows, *format);
    out << rendered;
    if (args.out_path) write_text_file(*args.out_path, rendered);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace wildprompt::cli
