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

#include "wildprompt/report.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "wildprompt/error.hpp"

namespace wildprompt::report {

namespace {

using nlohmann::json;

constexpr const char* kColumns[] = {"UTMOS", "DNSMOS", "WER", "SPK-sim", "SDS", "a-DCF"};

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string cell(const std::optional<double>& value, int decimals) {
  return value ? fixed(*value, decimals) : std::string();
}

std::string a_dcf_cell(const std::vector<std::pair<std::string, double>>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back('/');
    out += fixed(values[i].second, 4);
  }
  return out;
}

std::vector<std::string> row_cells(const ReportRow& row) {
  const auto& r = row.report;
  return {cell(r.utmos_mean, 2), cell(r.dnsmos_mean, 2),  cell(r.wer_percent, 2),
          cell(r.spk_sim_mean, 3), cell(r.sds_mean, 3), a_dcf_cell(r.a_dcf)};
}

std::string render_tsv(const std::vector<ReportRow>& rows) {
  std::string out = "system";
  for (const char* column : kColumns) {
    out.push_back('\t');
    out += column;
  }
  out.push_back('\n');
  for (const auto& row : rows) {
    out += row.system_label;
    for (const auto& value : row_cells(row)) {
      out.push_back('\t');
      out += value;
    }
    out.push_back('\n');
  }
  return out;
}

std::string render_markdown(const std::vector<ReportRow>& rows) {
  std::string out = "| system |";
  for (const char* column : kColumns) {
    out.push_back(' ');
    out += column;
    out += " |";
  }
  out += "\n| --- |";
  for (std::size_t i = 0; i < std::size(kColumns); ++i) out += " --- |";
  out.push_back('\n');
  for (const auto& row : rows) {
    out += "| " + row.system_label + " |";
    for (const auto& value : row_cells(row)) {
      out.push_back(' ');
      out += value;
      out += " |";
    }
    out.push_back('\n');
  }
  return out;
}

json optional_to_json(const std::optional<double>& value) {
  return value ? json(*value) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j, const char* field) {
  if (!j.contains(field) || j[field].is_null()) return std::nullopt;
  if (!j[field].is_number()) {
    throw Error(ErrorCode::MalformedLine, std::string("field ") + field + " is not a number");
  }
  return j[field].get<double>();
}

}  // namespace

std::optional<ReportFormat> format_from_name(const std::string& name) {
  if (name == "tsv") return ReportFormat::Tsv;
  if (name == "markdown") return ReportFormat::Markdown;
  return std::nullopt;
}

const char* format_name(ReportFormat format) {
  switch (format) {
    case ReportFormat::Tsv:
      return "tsv";
    case ReportFormat::Markdown:
      return "markdown";
  }
  return "unknown";
}

std::string render(const std::vector<ReportRow>& rows, ReportFormat format) {
  return format == ReportFormat::Tsv ? render_tsv(rows) : render_markdown(rows);
}

void write_report_row(const ReportRow& row, const std::filesystem::path& path) {
  json j = {
      {"system_label", row.system_label},
      {"utmos_mean", optional_to_json(row.report.utmos_mean)},
      {"dnsmos_mean", optional_to_json(row.report.dnsmos_mean)},
      {"wer_percent", optional_to_json(row.report.wer_percent)},
      {"spk_sim_mean", optional_to_json(row.report.spk_sim_mean)},
      {"sds_mean", optional_to_json(row.report.sds_mean)},
  };
  json a_dcf = json::array();
  for (const auto& [system_id, value] : row.report.a_dcf) {
    a_dcf.push_back(json::array({system_id, value}));
  }
  j["a_dcf"] = a_dcf;

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open for writing: " + path.string());
  }
  out << j.dump() << '\n';
  if (!out) {
    throw Error(ErrorCode::IoError, "failed writing: " + path.string());
  }
}

ReportRow read_report_row(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open: " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedLine, path.string() + ": " + e.what());
  }
  if (!j.contains("system_label") || !j["system_label"].is_string()) {
    throw Error(ErrorCode::MissingField, path.string() + ": missing system_label");
  }
  ReportRow row;
  row.system_label = j["system_label"].get<std::string>();
  row.report.utmos_mean = optional_from_json(j, "utmos_mean");
  row.report.dnsmos_mean = optional_from_json(j, "dnsmos_mean");
  row.report.wer_percent = optional_from_json(j, "wer_percent");
  row.report.spk_sim_mean = optional_from_json(j, "spk_sim_mean");
  row.report.sds_mean = optional_from_json(j, "sds_mean");
  if (j.contains("a_dcf")) {
    if (!j["a_dcf"].is_array()) {
      throw Error(ErrorCode::MalformedLine, path.string() + ": a_dcf is not an array");
    }
    for (const auto& entry : j["a_dcf"]) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
          !entry[1].is_number()) {
        throw Error(ErrorCode::MalformedLine, path.string() + ": bad a_dcf entry");
      }
      row.report.a_dcf.emplace_back(entry[0].get<std::string>(), entry[1].get<double>());
    }
  }
  return row;
}

}  // namespace wildprompt::report
