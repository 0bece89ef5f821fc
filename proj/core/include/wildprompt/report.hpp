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

#ifndef WILDPROMPT_REPORT_HPP
#define WILDPROMPT_REPORT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wildprompt/metrics.hpp"

namespace wildprompt::report {

enum class ReportFormat { Tsv, Markdown };

std::optional<ReportFormat> format_from_name(const std::string& name);
const char* format_name(ReportFormat format);

/// One table row: a system label plus its metric aggregates.
struct ReportRow {
  std::string system_label;
  metrics::EvaluationReport report;
};

/// Fixed column order: UTMOS, DNSMOS, WER, SPK-sim, SDS, a-DCF.
/// Cell formats are pinned: UTMOS/DNSMOS/WER %.2f, SPK-sim/SDS %.3f,
/// a-DCF %.4f with multiple systems joined by '/'. Missing metrics
/// render as empty cells. Output is byte-stable.
std::string render(const std::vector<ReportRow>& rows, ReportFormat format);

/// Serializes one row as a single JSON object (the hand-off format
/// between `evaluate` and `report`). Doubles round-trip exactly.
void write_report_row(const ReportRow& row, const std::filesystem::path& path);

/// Reads a row written by write_report_row.
/// Throws MalformedLine, MissingField, IoError.
ReportRow read_report_row(const std::filesystem::path& path);

}  // namespace wildprompt::report

#endif  // WILDPROMPT_REPORT_HPP
