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

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace wildprompt::cli;

  CLI::App app{
      "Reference-prompt selection, weight averaging, and evaluation toolkit "
      "for zero-shot TTS pipelines"};
  app.require_subcommand(1);

  SelectArgs select_args;
  std::string select_config, select_audit_out, select_audit_log;
  double select_threshold = -1.0;
  int select_parallelism = 0;
  auto* select = app.add_subcommand(
      "select", "Pick a reference prompt per target via two-stage judge scoring");
  select->add_option("--config", select_config, "JSON config file");
  select->add_option("--targets", select_args.targets_manifest, "Targets manifest (JSONL)")
      ->required();
  select
      ->add_option("--enrollment", select_args.enrollment_manifest,
                   "Enrollment manifest (JSONL)")
      ->required();
  select->add_option("--out", select_args.out_path, "Job manifest output path")->required();
  select->add_option("--audit-out", select_audit_out, "Selection audit TSV output path");
  auto* threshold_opt = select->add_option("--audio-threshold", select_threshold,
                                           "Stage-1 score cutoff in [0,10]");
  auto* parallelism_opt =
      select->add_option("--parallelism", select_parallelism, "Max concurrent judge calls");
  select->add_option("--audit-log", select_audit_log, "Judge traffic JSONL log");
  select->add_flag("--dry-run", select_args.dry_run,
                   "Print planned judge-call counts and exit");

  EmaArgs ema_args;
  double ema_beta = -1.0;
  auto* ema = app.add_subcommand("ema", "Average checkpoints with a shadow-weight EMA");
  ema->add_option("inputs", ema_args.inputs, "Checkpoint files, replay order")
      ->required()
      ->expected(-1);
  ema->add_option("--out", ema_args.out_path, "Averaged checkpoint output path")->required();
  auto* beta_opt = ema->add_option("--beta", ema_beta, "Decay factor in [0,1), default 0.99");

  EvaluateArgs eval_args;
  std::string eval_config, eval_ref, eval_hyp, eval_utmos, eval_dnsmos, eval_sds;
  std::string eval_emb, eval_pairs, eval_out, eval_row_out;
  auto* evaluate = app.add_subcommand("evaluate", "Compute metric aggregates into a table row");
  evaluate->add_option("--config", eval_config, "JSON config file");
  evaluate->add_option("--label", eval_args.label, "Row label");
  evaluate->add_option("--ref", eval_ref, "Reference transcripts (utt_id<TAB>text)");
  evaluate->add_option("--hyp", eval_hyp, "Hypothesis transcripts (utt_id<TAB>text)");
  evaluate->add_option("--utmos", eval_utmos, "UTMOS score file (utt_id<TAB>score)");
  evaluate->add_option("--dnsmos", eval_dnsmos, "DNSMOS score file");
  evaluate->add_option("--sds", eval_sds, "Spoof detection score file");
  evaluate->add_option("--embeddings", eval_emb, "Speaker embedding file");
  evaluate->add_option("--pairs", eval_pairs, "Embedding pairing TSV (id_a<TAB>id_b)");
  evaluate->add_option("--trials", eval_args.trial_files,
                       "Trial score file (label<TAB>score), one a-DCF cell per file");
  evaluate->add_option("--format", eval_args.format, "tsv or markdown");
  evaluate->add_option("--out", eval_out, "Also write the rendered table here");
  evaluate->add_option("--row-out", eval_row_out, "Write the row as JSON for `report`");

  ReportArgs report_args;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Render evaluate rows into one table");
  report->add_option("rows", report_args.row_files, "Row JSON files from evaluate")
      ->required()
      ->expected(-1);
  report->add_option("--format", report_args.format, "tsv or markdown");
  report->add_option("--out", report_out, "Also write the rendered table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (select->parsed()) {
    if (!select_config.empty()) select_args.config_path = select_config;
    if (!select_audit_out.empty()) select_args.audit_out = select_audit_out;
    if (!select_audit_log.empty()) select_args.audit_log = select_audit_log;
    if (threshold_opt->count() > 0) select_args.audio_threshold = select_threshold;
    if (parallelism_opt->count() > 0) select_args.parallelism = select_parallelism;
    return cmd_select(select_args, std::cout, std::cerr);
  }
  if (ema->parsed()) {
    if (beta_opt->count() > 0) ema_args.beta = ema_beta;
    return cmd_ema(ema_args, std::cout, std::cerr);
  }
  if (evaluate->parsed()) {
    if (!eval_config.empty()) eval_args.config_path = eval_config;
    if (!eval_ref.empty()) eval_args.ref_transcripts = eval_ref;
    if (!eval_hyp.empty()) eval_args.hyp_transcripts = eval_hyp;
    if (!eval_utmos.empty()) eval_args.utmos_scores = eval_utmos;
    if (!eval_dnsmos.empty()) eval_args.dnsmos_scores = eval_dnsmos;
    if (!eval_sds.empty()) eval_args.sds_scores = eval_sds;
    if (!eval_emb.empty()) eval_args.embeddings = eval_emb;
    if (!eval_pairs.empty()) eval_args.embedding_pairs = eval_pairs;
    if (!eval_out.empty()) eval_args.out_path = eval_out;
    if (!eval_row_out.empty()) eval_args.row_out = eval_row_out;
    return cmd_evaluate(eval_args, std::cout, std::cerr);
  }
  if (report->parsed()) {
    if (!report_out.empty()) report_args.out_path = report_out;
    return cmd_report(report_args, std::cout, std::cerr);
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
