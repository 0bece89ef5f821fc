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

#include "wildprompt/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>

#include "binary_io.hpp"
#include "wildprompt/error.hpp"

namespace wildprompt::metrics {

const char* trial_label_name(TrialLabel label) {
  switch (label) {
    case TrialLabel::Target: return "target";
    case TrialLabel::Nontarget: return "nontarget";
    case TrialLabel::Spoof: return "spoof";
  }
  return "?";
}

void ADCFConfig::validate() const {
  if (c_miss <= 0.0 || c_fa_nontarget <= 0.0 || c_fa_spoof <= 0.0) {
    throw Error(ErrorCode::ConfigError, "a-DCF costs must be positive");
  }
  for (double p : {prior_target, prior_nontarget, prior_spoof}) {
    if (!(p > 0.0 && p < 1.0)) {
      throw Error(ErrorCode::ConfigError, "a-DCF priors must lie in (0,1)");
    }
  }
  double sum = prior_target + prior_nontarget + prior_spoof;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::ConfigError, "a-DCF priors must sum to 1");
  }
}

// ---------------------------------------------------------------------------
// WER
// ---------------------------------------------------------------------------

std::vector<std::string> normalize_text(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      flush();
    } else if (c == '\'') {
      // Keep the apostrophe only between two word characters.
      bool prev_word = !current.empty() &&
                       std::isalnum(static_cast<unsigned char>(current.back()));
      bool next_word = i + 1 < text.size() &&
                       std::isalnum(static_cast<unsigned char>(text[i + 1]));
      if (prev_word && next_word) current.push_back('\'');
    } else if (c < 0x80 && std::ispunct(c)) {
      // dropped
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return tokens;
}

EditCounts edit_counts(const std::vector<std::string>& ref_tokens,
                       const std::vector<std::string>& hyp_tokens) {
  struct Cell {
    int total;
    EditCounts counts;
  };
  const std::size_t m = ref_tokens.size();
  const std::size_t n = hyp_tokens.size();

  std::vector<Cell> prev(n + 1), curr(n + 1);
  prev[0] = {0, {}};
  for (std::size_t j = 1; j <= n; ++j) {
    prev[j] = prev[j - 1];
    prev[j].total += 1;
    prev[j].counts.insertions += 1;
  }
  for (std::size_t i = 1; i <= m; ++i) {
    curr[0] = prev[0];
    curr[0].total += 1;
    curr[0].counts.deletions += 1;
    for (std::size_t j = 1; j <= n; ++j) {
      bool match = ref_tokens[i - 1] == hyp_tokens[j - 1];
      // diagonal first, then deletion, then insertion on ties
      Cell best = prev[j - 1];
      if (!match) {
        best.total += 1;
        best.counts.substitutions += 1;
      }
      if (prev[j].total + 1 < best.total) {
        best = prev[j];
        best.total += 1;
        best.counts.deletions += 1;
      }
      if (curr[j - 1].total + 1 < best.total) {
        best = curr[j - 1];
        best.total += 1;
        best.counts.insertions += 1;
      }
      curr[j] = best;
    }
    std::swap(prev, curr);
  }
  return prev[n].counts;
}

double wer(const Transcript& reference, const Transcript& hypothesis) {
  auto ref_tokens = normalize_text(reference.text);
  if (ref_tokens.empty()) {
    throw Error(ErrorCode::EmptyReference, reference.utt_id);
  }
  auto hyp_tokens = normalize_text(hypothesis.text);
  EditCounts counts = edit_counts(ref_tokens, hyp_tokens);
  return static_cast<double>(counts.total()) / static_cast<double>(ref_tokens.size());
}

double corpus_wer(const std::vector<Transcript>& references,
                  const std::vector<Transcript>& hypotheses) {
  std::map<std::string, const Transcript*> ref_by_id, hyp_by_id;
  for (const auto& t : references) ref_by_id[t.utt_id] = &t;
  for (const auto& t : hypotheses) hyp_by_id[t.utt_id] = &t;
  if (ref_by_id.size() != references.size() || hyp_by_id.size() != hypotheses.size()) {
    throw Error(ErrorCode::DuplicateId, "transcript sets must have unique utt_ids");
  }
  for (const auto& [id, _] : ref_by_id) {
    if (!hyp_by_id.count(id)) {
      throw Error(ErrorCode::IdMismatch, "no hypothesis for " + id);
    }
  }
  for (const auto& [id, _] : hyp_by_id) {
    if (!ref_by_id.count(id)) {
      throw Error(ErrorCode::IdMismatch, "no reference for " + id);
    }
  }

  long long edits = 0;
  long long ref_token_count = 0;
  for (const auto& [id, ref] : ref_by_id) {
    auto ref_tokens = normalize_text(ref->text);
    auto hyp_tokens = normalize_text(hyp_by_id[id]->text);
    edits += edit_counts(ref_tokens, hyp_tokens).total();
    ref_token_count += static_cast<long long>(ref_tokens.size());
  }
  if (ref_token_count == 0) {
    throw Error(ErrorCode::EmptyReference, "no reference tokens in corpus");
  }
  return static_cast<double>(edits) / static_cast<double>(ref_token_count);
}

// ---------------------------------------------------------------------------
// Speaker similarity
// ---------------------------------------------------------------------------

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.values.size() != b.values.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                a.utt_id + " has dim " + std::to_string(a.values.size()) + ", " +
                    b.utt_id + " has dim " + std::to_string(b.values.size()));
  }
  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += static_cast<double>(a.values[i]) * static_cast<double>(b.values[i]);
    norm_a += static_cast<double>(a.values[i]) * static_cast<double>(a.values[i]);
    norm_b += static_cast<double>(b.values[i]) * static_cast<double>(b.values[i]);
  }
  if (norm_a == 0.0 || norm_b == 0.0) {
    throw Error(ErrorCode::ZeroNorm,
                norm_a == 0.0 ? a.utt_id : b.utt_id);
  }
  return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

// ---------------------------------------------------------------------------
// a-DCF / EER
// ---------------------------------------------------------------------------

namespace {

// Number of elements in sorted `scores` that are >= t.
std::size_t count_ge(const std::vector<double>& scores, double t) {
  return scores.end() - std::lower_bound(scores.begin(), scores.end(), t);
}

}  // namespace

AdcfResult a_dcf(const std::vector<TrialScore>& trials, const ADCFConfig& cfg) {
  cfg.validate();

  std::vector<double> targets, nontargets, spoofs;
  for (const auto& trial : trials) {
    if (!std::isfinite(trial.score)) {
      throw Error(ErrorCode::NonFiniteScore, "trial score must be finite");
    }
    switch (trial.label) {
      case TrialLabel::Target: targets.push_back(trial.score); break;
      case TrialLabel::Nontarget: nontargets.push_back(trial.score); break;
      case TrialLabel::Spoof: spoofs.push_back(trial.score); break;
    }
  }
  if (targets.empty()) throw Error(ErrorCode::MissingLabelClass, "target");
  if (nontargets.empty()) throw Error(ErrorCode::MissingLabelClass, "nontarget");
  if (spoofs.empty()) throw Error(ErrorCode::MissingLabelClass, "spoof");

  std::sort(targets.begin(), targets.end());
  std::sort(nontargets.begin(), nontargets.end());
  std::sort(spoofs.begin(), spoofs.end());

  std::vector<double> pooled;
  pooled.reserve(trials.size());
  pooled.insert(pooled.end(), targets.begin(), targets.end());
  pooled.insert(pooled.end(), nontargets.begin(), nontargets.end());
  pooled.insert(pooled.end(), spoofs.begin(), spoofs.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  std::vector<double> candidates;
  candidates.push_back(-std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < pooled.size(); ++i) {
    candidates.push_back(0.5 * (pooled[i] + pooled[i + 1]));
  }
  candidates.push_back(std::numeric_limits<double>::infinity());

  const double n_tar = static_cast<double>(targets.size());
  const double n_non = static_cast<double>(nontargets.size());
  const double n_spf = static_cast<double>(spoofs.size());

  AdcfResult best{std::numeric_limits<double>::infinity(), 0.0};
  for (double t : candidates) {
    double p_miss = (n_tar - static_cast<double>(count_ge(targets, t))) / n_tar;
    double p_fa_non = static_cast<double>(count_ge(nontargets, t)) / n_non;
    double p_fa_spf = static_cast<double>(count_ge(spoofs, t)) / n_spf;
    double cost = cfg.c_miss * cfg.prior_target * p_miss +
                  cfg.c_fa_nontarget * cfg.prior_nontarget * p_fa_non +
                  cfg.c_fa_spoof * cfg.prior_spoof * p_fa_spf;
    if (cost < best.min_cost) {
      best.min_cost = cost;
      best.threshold = t;
    }
  }
  return best;
}

double eer(const std::vector<double>& positives, const std::vector<double>& negatives) {
  if (positives.empty()) throw Error(ErrorCode::EmptyClass, "positives");
  if (negatives.empty()) throw Error(ErrorCode::EmptyClass, "negatives");

  std::vector<double> pos = positives;
  std::vector<double> neg = negatives;
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  for (double s : pos) {
    if (!std::isfinite(s)) throw Error(ErrorCode::NonFiniteScore, "eer score must be finite");
  }
  for (double s : neg) {
    if (!std::isfinite(s)) throw Error(ErrorCode::NonFiniteScore, "eer score must be finite");
  }

  std::vector<double> pooled;
  pooled.reserve(pos.size() + neg.size());
  pooled.insert(pooled.end(), pos.begin(), pos.end());
  pooled.insert(pooled.end(), neg.begin(), neg.end());
  std::sort(pooled.begin(), pooled.end(), std::greater<>());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  struct Pt {
    double fpr, tpr;
  };
  // ROC operating points (accept when score >= threshold), threshold
  // descending from +inf, so fpr and tpr are both non-decreasing.
  std::vector<Pt> points;
  points.push_back({0.0, 0.0});
  for (double t : pooled) {
    double fpr = static_cast<double>(count_ge(neg, t)) / static_cast<double>(neg.size());
    double tpr = static_cast<double>(count_ge(pos, t)) / static_cast<double>(pos.size());
    points.push_back({fpr, tpr});
  }

  // Upper (concave) hull of the ROC.
  auto cross = [](const Pt& o, const Pt& a, const Pt& b) {
    return (a.fpr - o.fpr) * (b.tpr - o.tpr) - (a.tpr - o.tpr) * (b.fpr - o.fpr);
  };
  std::vector<Pt> hull;
  for (const Pt& p : points) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0) {
      hull.pop_back();
    }
    hull.push_back(p);
  }

  // Crossing with the anti-diagonal tpr = 1 - fpr. f goes from -1 at (0,0)
  // to +1 at (1,1), and the hull is monotone in both coordinates.
  auto f = [](const Pt& p) { return p.tpr - (1.0 - p.fpr); };
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (f(hull[i]) >= 0.0) {
      const Pt& a = hull[i - 1];
      const Pt& b = hull[i];
      if (f(b) == 0.0) return b.fpr;
      double denom = (b.fpr - a.fpr) + (b.tpr - a.tpr);
      double t = (1.0 - a.fpr - a.tpr) / denom;
      return a.fpr + t * (b.fpr - a.fpr);
    }
  }
  return 0.5;  // unreachable: f(1,1) = 1
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

std::pair<double, std::size_t> aggregate_scores(const corpus::ScoreFile& file) {
  if (file.entries.empty()) {
    throw Error(ErrorCode::EmptyScoreFile, file.metric_name);
  }
  double sum = 0.0;
  for (const auto& [_, score] : file.entries) sum += score;  // utt_id order
  return {sum / static_cast<double>(file.entries.size()), file.entries.size()};
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::vector<Transcript> load_transcripts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open transcript file " + path.string());
  }
  std::vector<Transcript> out;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::MalformedLine,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected utt_id<TAB>text");
    }
    Transcript t{line.substr(0, tab), line.substr(tab + 1)};
    if (!seen.insert(t.utt_id).second) {
      throw Error(ErrorCode::DuplicateId, t.utt_id);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TrialScore> load_trial_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open trial file " + path.string());
  }
  std::vector<TrialScore> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::MalformedLine,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected label<TAB>score");
    }
    std::string label_text = line.substr(0, tab);
    TrialLabel label;
    if (label_text == "target") {
      label = TrialLabel::Target;
    } else if (label_text == "nontarget") {
      label = TrialLabel::Nontarget;
    } else if (label_text == "spoof") {
      label = TrialLabel::Spoof;
    } else {
      throw Error(ErrorCode::MalformedLine,
                  path.string() + ":" + std::to_string(line_no) +
                      ": unknown label '" + label_text + "'");
    }
    std::string score_text = line.substr(tab + 1);
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
                  path.string() + ":" + std::to_string(line_no));
    }
    out.push_back({label, score});
  }
  return out;
}

namespace {

constexpr char kEmbeddingMagic[4] = {'W', 'E', 'M', 'B'};

}  // namespace

EmbeddingSet load_embeddings(const std::filesystem::path& path) {
  std::string data = detail::read_file_bytes(path);
  if (data.size() < 4 || std::memcmp(data.data(), kEmbeddingMagic, 4) != 0) {
    throw Error(ErrorCode::BadMagic, path.string());
  }
  detail::ByteReader reader(data, path.string());
  reader.skip(4);  // magic

  EmbeddingSet set;
  set.dim = reader.u32();
  if (set.dim == 0) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": embedding dim is zero");
  }
  while (!reader.at_end()) {
    std::uint16_t id_len = reader.u16();
    std::string id = reader.bytes(id_len);
    if (id.empty()) {
      throw Error(ErrorCode::InvalidArgument, path.string() + ": empty utt_id");
    }
    std::vector<float> values(set.dim);
    for (std::uint32_t i = 0; i < set.dim; ++i) values[i] = reader.f32();
    if (!set.vectors.emplace(std::move(id), std::move(values)).second) {
      throw Error(ErrorCode::DuplicateId, path.string());
    }
  }
  return set;
}

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
  if (set.dim == 0) {
    throw Error(ErrorCode::InvalidArgument, "embedding dim must be positive");
  }
  std::string buf;
  buf.append(kEmbeddingMagic, 4);
  detail::put_u32(buf, set.dim);
  for (const auto& [id, values] : set.vectors) {
    if (values.size() != set.dim) {
      throw Error(ErrorCode::DimensionMismatch, id);
    }
    if (id.size() > 0xffff) {
      throw Error(ErrorCode::InvalidArgument, "utt_id too long: " + id);
    }
    detail::put_u16(buf, static_cast<std::uint16_t>(id.size()));
    buf.append(id);
    for (float v : values) detail::put_f32(buf, v);
  }
  detail::write_file_bytes(path, buf);
}

}  // namespace wildprompt::metrics
