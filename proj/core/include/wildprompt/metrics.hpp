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

#ifndef WILDPROMPT_METRICS_HPP
#define WILDPROMPT_METRICS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wildprompt/corpus.hpp"

namespace wildprompt::metrics {

struct Transcript {
  std::string utt_id;
  std::string text;
};

struct EmbeddingVector {
  std::string utt_id;
  std::vector<float> values;
};

/// All vectors of one embedding file share a single dimension.
struct EmbeddingSet {
  std::uint32_t dim = 0;
  std::map<std::string, std::vector<float>> vectors;
};

enum class TrialLabel { Target, Nontarget, Spoof };

const char* trial_label_name(TrialLabel label);

struct TrialScore {
  TrialLabel label;
  double score;
};

/// Costs and priors of the detection cost function. Defaults are the common
/// SASV operating point; the kernel takes whatever is configured.
struct ADCFConfig {
  double c_miss = 1.0;
  double c_fa_nontarget = 10.0;
  double c_fa_spoof = 10.0;
  double prior_target = 0.9405;
  double prior_nontarget = 0.0095;
  double prior_spoof = 0.05;

  /// Throws ConfigError unless costs > 0, priors in (0,1), priors sum to 1
  /// within 1e-9.
  void validate() const;
};

/// One aggregated metric row (Table-style). Absent metrics stay unset.
struct EvaluationReport {
  std::optional<double> utmos_mean;
  std::optional<double> dnsmos_mean;
  std::optional<double> wer_percent;
  std::optional<double> spk_sim_mean;
  std::optional<double> sds_mean;
  std::vector<std::pair<std::string, double>> a_dcf;  // (system_id, value)
};

// ---------------------------------------------------------------------------
// WER
// ---------------------------------------------------------------------------

/// Lowercases, strips punctuation except intra-word apostrophes, splits on
/// whitespace runs. Empty result is valid.
std::vector<std::string> normalize_text(const std::string& text);

struct EditCounts {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;

  int total() const { return substitutions + deletions + insertions; }
};

/// Minimum-edit-distance alignment counts between token sequences.
/// total() is the Levenshtein distance; the (S,D,I) split follows a fixed
/// deterministic tie-break.
EditCounts edit_counts(const std::vector<std::string>& ref_tokens,
                       const std::vector<std::string>& hyp_tokens);

/// (S+D+I)/N over normalized tokens, N = reference token count. May exceed 1.
/// Throws EmptyReference when the reference normalizes to no tokens.
double wer(const Transcript& reference, const Transcript& hypothesis);

/// Pooled corpus WER: sum of edits over sum of reference tokens, NOT the mean
/// of per-utterance rates. Pairs are matched by utt_id; the utt_id sets must
/// be equal. Throws IdMismatch, EmptyReference.
double corpus_wer(const std::vector<Transcript>& references,
                  const std::vector<Transcript>& hypotheses);

// ---------------------------------------------------------------------------
// Speaker similarity
// ---------------------------------------------------------------------------

/// a.b / (|a||b|), accumulated in double. Throws DimensionMismatch, ZeroNorm.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// ---------------------------------------------------------------------------
// a-DCF / EER
// ---------------------------------------------------------------------------

struct AdcfResult {
  double min_cost;
  double threshold;
};

/// cost(t) = c_miss*pi_tar*P_miss(t) + c_fa_non*pi_non*P_fa_non(t)
///         + c_fa_spf*pi_spf*P_fa_spf(t), minimized exactly over
/// t in {-inf} u {midpoints of consecutive distinct scores} u {+inf}.
/// P_miss counts target scores < t; false accepts count scores >= t (a trial
/// scoring exactly t is accepted). Ties in cost resolve to the lowest t.
/// Throws MissingLabelClass unless all three labels are present.
AdcfResult a_dcf(const std::vector<TrialScore>& trials, const ADCFConfig& cfg);

/// Equal error rate on the ROC convex hull: the rate where the interpolated
/// false-accept and false-reject curves cross. Always in [0, 0.5].
/// Throws EmptyClass.
double eer(const std::vector<double>& positives, const std::vector<double>& negatives);

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Arithmetic mean over entries in utt_id order. Throws EmptyScoreFile.
std::pair<double, std::size_t> aggregate_scores(const corpus::ScoreFile& file);

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// `utt_id<TAB>text` per line; '#' comments and blank lines skipped.
std::vector<Transcript> load_transcripts(const std::filesystem::path& path);

/// `label<TAB>score`, label in {target, nontarget, spoof}.
std::vector<TrialScore> load_trial_scores(const std::filesystem::path& path);

/// Binary container: magic "WEMB", u32 dim, then records
/// {u16 id_len, id bytes, dim x f32 little-endian}.
EmbeddingSet load_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);

}  // namespace wildprompt::metrics

#endif  // WILDPROMPT_METRICS_HPP
