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

#ifndef WILDPROMPT_TOOLS_COMMANDS_HPP
#define WILDPROMPT_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wildprompt/error.hpp"
#include "wildprompt/http_judge.hpp"
#include "wildprompt/metrics.hpp"
#include "wildprompt/selection.hpp"

namespace wildprompt::cli {

/// Everything a command can read from the config file. All fields are
/// optional in the file; precedence is defaults < config file <
/// environment (WILDPROMPT_JUDGE_URL/KEY) < flags.
struct ToolConfig {
  judges::JudgeEndpointConfig judge;  // empty url selects the hash stubs
  std::uint64_t stub_seed = 0;
  selection::SelectionConfig selection;
  metrics::ADCFConfig a_dcf;
  std::optional<std::string> audit_log;  // judge traffic JSONL
};

/// Parses a JSON config file. Unknown keys are ConfigError.
ToolConfig load_tool_config(const std::filesystem::path& path);

/// WILDPROMPT_JUDGE_URL / WILDPROMPT_JUDGE_KEY, when set, replace the
/// configured judge url / api key.
void apply_env_overrides(ToolConfig& config);

/// 2 for environment trouble (IO, config, usage, transport), 3 for data
/// and schema violations.
int exit_code_for(ErrorCode code);

// ---------------------------------------------------------------------------
// select
// ---------------------------------------------------------------------------

struct SelectArgs {
  std::optional<std::string> config_path;
  std::string targets_manifest;
  std::string enrollment_manifest;
  std::string out_path;
  std::optional<std::string> audit_out;  // selection audit TSV
  std::optional<double> audio_threshold;
  std::optional<int> parallelism;
  std::optional<std::string> audit_log;
  bool dry_run = false;
};

/// Runs the two-stage prompt selection and writes the job manifest.
/// Exit 0 all targets selected, 1 partial, 2 environment, 3 data.
int cmd_select(const SelectArgs& args, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// ema
// ---------------------------------------------------------------------------

struct EmaArgs {
  std::vector<std::string> inputs;  // checkpoint paths, replay order
  std::optional<double> beta;       // default 0.99
  std::string out_path;
};

/// Replays the shadow-weight average over the input checkpoints and
/// writes the result. Prints a per-tensor schema summary.
int cmd_ema(const EmaArgs& args, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// evaluate / report
// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::optional<std::string> config_path;
  std::string label = "system";
  std::optional<std::string> ref_transcripts;
  std::optional<std::string> hyp_transcripts;
  std::optional<std::string> utmos_scores;
  std::optional<std::string> dnsmos_scores;
  std::optional<std::string> sds_scores;
  std::optional<std::string> embeddings;       // WEMB file
  std::optional<std::string> embedding_pairs;  // TSV id_a<TAB>id_b
  std::vector<std::string> trial_files;        // one a-DCF cell per file
  std::string format = "tsv";
  std::optional<std::string> out_path;  // rendered copy
  std::optional<std::string> row_out;   // row JSON consumed by `report`
};

/// Computes whichever metrics the supplied inputs allow and renders a
/// one-row table; absent inputs leave cells empty.
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);

struct ReportArgs {
  std::vector<std::string> row_files;  // row JSONs from cmd_evaluate
  std::string format = "tsv";
  std::optional<std::string> out_path;
};

/// Renders previously computed rows into one table, in argument order.
int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err);

}  // namespace wildprompt::cli

#endif  // WILDPROMPT_TOOLS_COMMANDS_HPP
