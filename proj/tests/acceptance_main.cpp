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
//
// Acceptance gate: one deterministic check per release criterion, each
// verified against an oracle implemented independently in this file.
// Prints one [PASS]/[FAIL] line per criterion and exits nonzero on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "commands.hpp"
#include "test_util.hpp"
#include "wildprompt/checkpoint.hpp"
#include "wildprompt/corpus.hpp"
#include "wildprompt/ema.hpp"
#include "wildprompt/judges.hpp"
#include "wildprompt/metrics.hpp"
#include "wildprompt/selection.hpp"

using namespace wildprompt;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const fs::path kDataDir = WILDPROMPT_TEST_DATA_DIR;

int g_failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!ok) ++g_failures;
}

// ---------------------------------------------------------------------------
// 1. WER kernel vs full-DP edit-distance oracle
// ---------------------------------------------------------------------------

int dp_edit_distance(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1, 0));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }
  return d[a.size()][b.size()];
}

void check_wer_oracle() {
  auto start = Clock::now();
  std::mt19937 rng(20260814);
  std::uniform_int_distribution<int> ref_len(1, 12), hyp_len(0, 12), letter(0, 4);
  auto make_tokens = [&](int n) {
    std::vector<std::string> tokens;
    for (int i = 0; i < n; ++i) tokens.push_back(std::string(1, char('a' + letter(rng))));
    return tokens;
  };
  auto join = [](const std::vector<std::string>& tokens) {
    std::string s;
    for (const auto& t : tokens) {
      if (!s.empty()) s += ' ';
      s += t;
    }
    return s;
  };

  int mismatches = 0;
  const int kTrials = 500;
  for (int t = 0; t < kTrials; ++t) {
    auto ref = make_tokens(ref_len(rng));
    auto hyp = make_tokens(hyp_len(rng));
    int expected = dp_edit_distance(ref, hyp);
    if (metrics::edit_counts(ref, hyp).total() != expected) ++mismatches;
    double got = metrics::wer({"u", join(ref)}, {"u", join(hyp)});
    if (got != static_cast<double>(expected) / static_cast<double>(ref.size())) ++mismatches;
  }
  double elapsed = seconds_since(start);
  char detail[160];
  std::snprintf(detail, sizeof detail,
                "%d/%d random token pairs match the full-DP distance exactly (%.2f s)",
                kTrials - mismatches, kTrials, elapsed);
  report("wer-dp-oracle", mismatches == 0 && elapsed < 5.0, detail);
}

// ---------------------------------------------------------------------------
// 2. a-DCF kernel vs exhaustive threshold-sweep oracle
// ---------------------------------------------------------------------------

double oracle_min_adcf(const std::vector<metrics::TrialScore>& trials,
                       const metrics::ADCFConfig& cfg) {
  std::vector<double> pooled;
  for (const auto& t : trials) pooled.push_back(t.score);
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  std::vector<double> taus = {pooled.front() - 1.0, pooled.back() + 1.0};
  for (std::size_t i = 1; i < pooled.size(); ++i) {
    taus.push_back(0.5 * (pooled[i - 1] + pooled[i]));
  }

  double best = std::numeric_limits<double>::infinity();
  for (double tau : taus) {
    double n_tar = 0, n_non = 0, n_spf = 0, miss = 0, fa_non = 0, fa_spf = 0;
    for (const auto& t : trials) {
      switch (t.label) {
        case metrics::TrialLabel::Target:
          ++n_tar;
          if (t.score < tau) ++miss;
          break;
        case metrics::TrialLabel::Nontarget:
          ++n_non;
          if (t.score >= tau) ++fa_non;
          break;
        case metrics::TrialLabel::Spoof:
          ++n_spf;
          if (t.score >= tau) ++fa_spf;
          break;
      }
    }
    double cost = cfg.c_miss * cfg.prior_target * (miss / n_tar) +
                  cfg.c_fa_nontarget * cfg.prior_nontarget * (fa_non / n_non) +
                  cfg.c_fa_spoof * cfg.prior_spoof * (fa_spf / n_spf);
    best = std::min(best, cost);
  }
  return best;
}

void check_adcf_oracle() {
  auto start = Clock::now();
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> count(3, 50);
  std::normal_distribution<double> normal(0.0, 1.0);

  metrics::ADCFConfig uniform;
  uniform.c_miss = uniform.c_fa_nontarget = uniform.c_fa_spoof = 1.0;
  uniform.prior_target = uniform.prior_nontarget = uniform.prior_spoof = 1.0 / 3.0;

  int mismatches = 0;
  const int kTrials = 200;
  for (int t = 0; t < kTrials; ++t) {
    std::vector<metrics::TrialScore> trials;
    for (auto label : {metrics::TrialLabel::Target, metrics::TrialLabel::Nontarget,
                       metrics::TrialLabel::Spoof}) {
      int n = count(rng);
      for (int i = 0; i < n; ++i) trials.push_back({label, normal(rng)});
    }
    const metrics::ADCFConfig& cfg = (t % 2 == 0) ? metrics::ADCFConfig{} : uniform;
    if (std::abs(metrics::a_dcf(trials, cfg).min_cost - oracle_min_adcf(trials, cfg)) >
        1e-12) {
      ++mismatches;
    }
  }

  // Perfectly separated classes cost exactly zero.
  bool separation_ok = true;
  std::uniform_real_distribution<double> lo(-3.0, -2.0), mid(-1.0, 0.0), hi(1.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<metrics::TrialScore> trials;
    for (int i = 0; i < 5; ++i) trials.push_back({metrics::TrialLabel::Spoof, lo(rng)});
    for (int i = 0; i < 5; ++i) trials.push_back({metrics::TrialLabel::Nontarget, mid(rng)});
    for (int i = 0; i < 5; ++i) trials.push_back({metrics::TrialLabel::Target, hi(rng)});
    if (metrics::a_dcf(trials, uniform).min_cost != 0.0) separation_ok = false;
  }

  // min_cost is invariant under a common score shift.
  bool shift_ok = true;
  std::vector<metrics::TrialScore> base;
  for (auto label : {metrics::TrialLabel::Target, metrics::TrialLabel::Nontarget,
                     metrics::TrialLabel::Spoof}) {
    for (int i = 0; i < 15; ++i) base.push_back({label, normal(rng)});
  }
  double reference = metrics::a_dcf(base, metrics::ADCFConfig{}).min_cost;
  for (double shift : {-7.5, 0.25, 3.0}) {
    auto shifted = base;
    for (auto& t : shifted) t.score += shift;
    if (std::abs(metrics::a_dcf(shifted, metrics::ADCFConfig{}).min_cost - reference) >
        1e-12) {
      shift_ok = false;
    }
  }

  double elapsed = seconds_since(start);
  char detail[200];
  std::snprintf(detail, sizeof detail,
                "%d/%d random trial sets within 1e-12 of the exhaustive sweep; "
                "separation==0: %s; shift-invariant: %s (%.2f s)",
                kTrials - mismatches, kTrials, separation_ok ? "yes" : "NO",
                shift_ok ? "yes" : "NO", elapsed);
  report("adcf-sweep-oracle",
         mismatches == 0 && separation_ok && shift_ok && elapsed < 5.0, detail);
}

// ---------------------------------------------------------------------------
// 3. EMA closed form + container bit-exactness
// ---------------------------------------------------------------------------

ema::CheckpointTensorSet scalar_set(float value) {
  ema::CheckpointTensorSet set;
  set.tensors.push_back({"theta", {1}, {value}});
  return set;
}

void check_ema_closed_form() {
  std::mt19937 rng(20260814);
  std::uniform_int_distribution<int> length(1, 20);
  std::uniform_real_distribution<double> theta(0.5, 2.0);
  const double betas[] = {0.0, 0.5, 0.9, 0.99};

  int mismatches = 0;
  const int kTrials = 100;
  for (int t = 0; t < kTrials; ++t) {
    double beta = betas[t % 4];
    int n = length(rng);
    float theta0 = static_cast<float>(theta(rng));
    auto state = ema::ema_init(scalar_set(theta0), beta);
    double expected = static_cast<double>(theta0);
    for (int i = 0; i < n; ++i) {
      float w = static_cast<float>(theta(rng));
      ema::ema_update(state, scalar_set(w));
      expected = beta * expected + (1.0 - beta) * static_cast<double>(w);
    }
    double got = static_cast<double>(state.shadow.tensors[0].data[0]);
    if (std::abs(got - expected) > 1e-6 * std::abs(expected)) ++mismatches;
  }

  TempDir dir;

  // Averaging a single checkpoint is bit-identical to the input file.
  ema::CheckpointTensorSet sample;
  sample.tensors.push_back({"w2", {2, 3}, {0.5f, -1.25f, 3.75f, 100.0f, -0.001f, 7.0f}});
  sample.tensors.push_back({"scalar", {}, {42.0f}});
  ema::write_checkpoint(sample, dir / "in.wscp");
  ema::write_checkpoint(ema::ema_average_files({dir / "in.wscp"}, 0.99), dir / "out.wscp");
  bool single_ok = read_file(dir / "in.wscp") == read_file(dir / "out.wscp");

  // The container round-trips bit-exactly, non-finite payloads included,
  // and the trailer is the CRC-32 of everything before it.
  ema::CheckpointTensorSet wild;
  wild.tensors.push_back({"m", {4},
                          {std::numeric_limits<float>::infinity(),
                           -std::numeric_limits<float>::infinity(),
                           std::numeric_limits<float>::quiet_NaN(), 1e-40f}});
  ema::write_checkpoint(wild, dir / "wild.wscp");
  auto bytes = read_file(dir / "wild.wscp");
  ema::write_checkpoint(ema::read_checkpoint(dir / "wild.wscp"), dir / "wild2.wscp");
  bool roundtrip_ok = bytes == read_file(dir / "wild2.wscp");

  std::uint32_t stored = 0;
  std::memcpy(&stored, bytes.data() + bytes.size() - 4, 4);
  std::uint32_t computed = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(bytes.size() - 4)));
  bool crc_ok = stored == computed;

  char detail[200];
  std::snprintf(detail, sizeof detail,
                "%d/%d sequences within 1e-6 relative of the closed form; "
                "single-file bit-identical: %s; round-trip+CRC bit-exact: %s",
                kTrials - mismatches, kTrials, single_ok ? "yes" : "NO",
                (roundtrip_ok && crc_ok) ? "yes" : "NO");
  report("ema-closed-form", mismatches == 0 && single_ok && roundtrip_ok && crc_ok, detail);
}

// ---------------------------------------------------------------------------
// 4. Selection determinism under parallelism
// ---------------------------------------------------------------------------

void check_selection_determinism() {
  auto start = Clock::now();
  const std::uint64_t kSeed = 7;

  std::vector<corpus::UtteranceRecord> targets, enrollment;
  char id[32];
  for (int s = 0; s < 10; ++s) {
    for (int t = 0; t < 2; ++t) {
      std::snprintf(id, sizeof id, "spk%02d_t%d", s, t);
      corpus::UtteranceRecord rec;
      rec.utt_id = id;
      rec.spk_id = std::string(id).substr(0, 5);
      rec.audio_path = std::string("audio/") + id + ".wav";
      rec.text = std::string("please read sentence ") + id;
      targets.push_back(rec);
    }
    for (int c = 0; c < 6; ++c) {
      std::snprintf(id, sizeof id, "spk%02d_c%d", s, c);
      corpus::UtteranceRecord rec;
      rec.utt_id = id;
      rec.spk_id = std::string(id).substr(0, 5);
      rec.audio_path = std::string("audio/") + id + ".wav";
      rec.text = std::string("enrollment line ") + id;
      enrollment.push_back(rec);
    }
  }
  auto pools = corpus::build_prompt_pools(targets, enrollment);

  selection::SelectionConfig cfg;
  cfg.parallelism = 8;

  TempDir dir;
  judges::JudgeCallLog log_a, log_b;
  {
    judges::StubAudioJudge audio(kSeed, &log_a);
    judges::StubTextJudge text(kSeed, &log_a);
    selection::write_job_manifest(
        selection::run_selection(targets, pools, audio, text, cfg), dir / "a.jsonl");
  }
  {
    judges::StubAudioJudge audio(kSeed, &log_b);
    judges::StubTextJudge text(kSeed, &log_b);
    selection::write_job_manifest(
        selection::run_selection(targets, pools, audio, text, cfg), dir / "b.jsonl");
  }
  auto manifest = read_file(dir / "a.jsonl");
  bool identical = !manifest.empty() && manifest == read_file(dir / "b.jsonl");

  // Each distinct candidate is audio-scored exactly once.
  bool call_count_ok =
      log_a.audio_call_count() == enrollment.size() && log_a.text_call_count() == 20;

  // The audited scores are the stub hash, and stage-1 survivors are exactly
  // the candidates at or above the 7.0 threshold (never empty by the floor
  // rule, which this fixture never needs).
  std::map<std::string, judges::AudioScore> audited;
  bool scores_ok = true;
  for (const auto& call : log_a.audio_calls()) {
    double expected = static_cast<double>(judges::stable_hash64(call.utt_id, kSeed) % 11);
    if (call.value != expected) scores_ok = false;
    audited[call.utt_id] = {call.utt_id, call.value, ""};
  }
  bool survivors_ok = true;
  for (const auto& pool : pools) {
    std::set<std::string> expected;
    for (const auto& cand : pool.candidates) {
      if (static_cast<double>(judges::stable_hash64(cand.utt_id, kSeed) % 11) >=
          cfg.audio_threshold) {
        expected.insert(cand.utt_id);
      }
    }
    if (expected.empty()) survivors_ok = false;  // fixture must exercise the filter
    std::set<std::string> got;
    for (const auto& rec : selection::filter_by_audio(pool, audited, cfg)) {
      got.insert(rec.utt_id);
    }
    if (got != expected) survivors_ok = false;
  }

  double elapsed = seconds_since(start);
  char detail[220];
  std::snprintf(detail, sizeof detail,
                "two parallelism-8 runs byte-identical: %s; 60 distinct audio calls: %s; "
                "audited survivors == {score >= 7.0}: %s (%.2f s, no network)",
                identical ? "yes" : "NO", call_count_ok ? "yes" : "NO",
                (scores_ok && survivors_ok) ? "yes" : "NO", elapsed);
  report("selection-determinism",
         identical && call_count_ok && scores_ok && survivors_ok && elapsed < 10.0, detail);
}

// ---------------------------------------------------------------------------
// 5. Evaluation report golden fixture
// ---------------------------------------------------------------------------

void check_report_golden() {
  TempDir dir;

  // Per-utterance inputs whose aggregates land on the published cells:
  // UTMOS 3.20, DNSMOS 2.61, WER 8.65, SPK-sim 0.508, SDS 0.108.
  std::string ref, hyp;
  char line[64];
  for (int i = 0; i < 200; ++i) {
    std::snprintf(line, sizeof line, "u%03d\tt0 t1 t2 t3 t4 t5 t6 t7 t8 t9\n", i);
    ref += line;
    std::snprintf(line, sizeof line, "u%03d\t%s t1 t2 t3 t4 t5 t6 t7 t8 t9\n", i,
                  i < 173 ? "x0" : "t0");
    hyp += line;
  }
  write_file(dir / "ref.tsv", ref);
  write_file(dir / "hyp.tsv", hyp);
  write_file(dir / "utmos.tsv", "u1\t3.0\nu2\t3.4\n");
  write_file(dir / "dnsmos.tsv", "d1\t2.61\n");
  write_file(dir / "sds.tsv", "s1\t0.108\n");
  write_file(dir / "trials.tsv", "target\t2\ntarget\t3\nnontarget\t0\nspoof\t1\n");
  write_file(dir / "pairs.tsv", "a\tb\n");

  metrics::EmbeddingSet embeddings;
  embeddings.dim = 2;
  embeddings.vectors["a"] = {1.0f, 0.0f};
  embeddings.vectors["b"] = {0.508f, std::sqrt(1.0f - 0.508f * 0.508f)};
  metrics::write_embeddings(embeddings, dir / "emb.wemb");

  cli::EvaluateArgs args;
  args.label = "final";
  args.ref_transcripts = (dir / "ref.tsv").string();
  args.hyp_transcripts = (dir / "hyp.tsv").string();
  args.utmos_scores = (dir / "utmos.tsv").string();
  args.dnsmos_scores = (dir / "dnsmos.tsv").string();
  args.sds_scores = (dir / "sds.tsv").string();
  args.embeddings = (dir / "emb.wemb").string();
  args.embedding_pairs = (dir / "pairs.tsv").string();
  args.trial_files = {(dir / "trials.tsv").string()};

  std::ostringstream out, err;
  int rc = cli::cmd_evaluate(args, out, err);
  auto golden = read_file(kDataDir / "report_golden.tsv");
  bool ok = rc == 0 && !golden.empty() && out.str() == golden;
  report("report-golden", ok,
         ok ? "rendered row is byte-identical to tests/data/report_golden.tsv"
            : "rendered row differs from tests/data/report_golden.tsv");
}

// ---------------------------------------------------------------------------
// 6. Condensed invariant sweep
// ---------------------------------------------------------------------------

void check_property_sweep() {
  auto start = Clock::now();
  std::mt19937 rng(1234);
  bool ok = true;
  std::string failed;

  auto expect = [&](bool cond, const char* what) {
    if (!cond && ok) {
      ok = false;
      failed = what;
    }
  };

  // WER: self-distance is zero and normalization ignores case/punctuation.
  expect(metrics::wer({"u", "Hello, WORLD!"}, {"u", "hello world"}) == 0.0,
         "wer normalization invariance");
  std::uniform_int_distribution<int> len(1, 10), letter(0, 3);
  for (int t = 0; t < 20; ++t) {
    std::string text;
    for (int i = 0; i < len(rng); ++i) text += std::string(1, char('a' + letter(rng))) + " ";
    expect(metrics::wer({"u", text}, {"u", text}) == 0.0, "wer self-distance");
  }

  // Cosine: bounded, symmetric, scale-invariant.
  std::normal_distribution<float> comp(0.0f, 1.0f);
  for (int t = 0; t < 50; ++t) {
    metrics::EmbeddingVector a{"a", {}}, b{"b", {}};
    for (int i = 0; i < 8; ++i) {
      a.values.push_back(comp(rng));
      b.values.push_back(comp(rng));
    }
    double cab = metrics::cosine_similarity(a, b);
    expect(std::abs(cab) <= 1.0 + 1e-12, "cosine bounds");
    expect(cab == metrics::cosine_similarity(b, a), "cosine symmetry");
    metrics::EmbeddingVector scaled{"s", a.values};
    for (auto& v : scaled.values) v *= 4.0f;
    expect(std::abs(metrics::cosine_similarity(scaled, b) - cab) <= 1e-9,
           "cosine scale invariance");
  }

  // EMA: the shadow stays inside the convex hull of everything it saw.
  {
    auto state = ema::ema_init(scalar_set(0.0f), 0.9);
    float lo = 0.0f, hi = 0.0f;
    std::uniform_real_distribution<float> value(-100.0f, 100.0f);
    for (int i = 0; i < 200; ++i) {
      float w = value(rng);
      lo = std::min(lo, w);
      hi = std::max(hi, w);
      ema::ema_update(state, scalar_set(w));
      float s = state.shadow.tensors[0].data[0];
      expect(s >= lo - 1e-3f && s <= hi + 1e-3f, "ema convexity");
    }
  }

  // a-DCF: nonnegative and never above the accept-all / reject-all costs.
  std::normal_distribution<double> score(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    std::vector<metrics::TrialScore> trials;
    for (auto label : {metrics::TrialLabel::Target, metrics::TrialLabel::Nontarget,
                       metrics::TrialLabel::Spoof}) {
      for (int i = 0; i < 10; ++i) trials.push_back({label, score(rng)});
    }
    metrics::ADCFConfig cfg;
    double min_cost = metrics::a_dcf(trials, cfg).min_cost;
    double reject_all = cfg.c_miss * cfg.prior_target;
    double accept_all =
        cfg.c_fa_nontarget * cfg.prior_nontarget + cfg.c_fa_spoof * cfg.prior_spoof;
    expect(min_cost >= 0.0, "a-dcf nonnegative");
    expect(min_cost <= std::min(reject_all, accept_all) + 1e-12, "a-dcf sentinel bound");
  }

  // EER: bounded and symmetric under score negation with classes swapped.
  for (int t = 0; t < 30; ++t) {
    std::vector<double> pos, neg;
    for (int i = 0; i < 12; ++i) pos.push_back(score(rng) + 0.5);
    for (int i = 0; i < 15; ++i) neg.push_back(score(rng) - 0.5);
    double e = metrics::eer(pos, neg);
    expect(e >= 0.0 && e <= 0.5, "eer bounds");
    auto negate = [](std::vector<double> v) {
      for (auto& x : v) x = -x;
      return v;
    };
    expect(std::abs(metrics::eer(negate(neg), negate(pos)) - e) <= 1e-9, "eer symmetry");
  }

  // Manifests and job manifests round-trip through their writers.
  {
    TempDir dir;
    std::vector<corpus::UtteranceRecord> records;
    corpus::UtteranceRecord rec;
    rec.utt_id = "utt_001";
    rec.spk_id = "spk_9";
    rec.audio_path = "audio/utt_001.wav";
    rec.text = "she said \"caf\xC3\xA9\"\ttwice";
    rec.duration_sec = 3.25;
    rec.split = corpus::Split::Hard;
    records.push_back(rec);
    rec.utt_id = "utt_002";
    rec.duration_sec.reset();
    rec.split.reset();
    records.push_back(rec);
    corpus::write_manifest(records, dir / "m.jsonl");
    expect(corpus::load_manifest(dir / "m.jsonl") == records, "manifest round-trip");

    std::vector<selection::PromptSelection> selections(1);
    selections[0] = {"t1", "gen text", "p1", "ref text", "audio/p1.wav", 8.0,
                     selection::SelectionStage::TextSelected};
    selection::write_job_manifest(selections, dir / "jobs.jsonl");
    auto entries = selection::read_job_manifest(dir / "jobs.jsonl");
    expect(entries.size() == 1 && entries[0].target_utt_id == "t1" &&
               entries[0].gen_text == "gen text" && entries[0].ref_audio == "audio/p1.wav" &&
               entries[0].ref_text == "ref text",
           "job manifest round-trip");
  }

  double elapsed = seconds_since(start);
  char detail[160];
  if (ok) {
    std::snprintf(detail, sizeof detail, "all condensed invariants hold (%.2f s)", elapsed);
  } else {
    std::snprintf(detail, sizeof detail, "first failing invariant: %s", failed.c_str());
  }
  report("property-sweep", ok, detail);
}

}  // namespace

int main() {
  check_wer_oracle();
  check_adcf_oracle();
  check_ema_closed_form();
  check_selection_determinism();
  check_report_golden();
  check_property_sweep();
  if (g_failures == 0) {
    std::printf("all 6 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
