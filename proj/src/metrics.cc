// Copyright 2026 The Medchain Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "medchain/metrics.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "medchain/error.h"

namespace medchain {
namespace {

using nlohmann::json;

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string OptionalDouble(const std::optional<double>& v, bool json_null) {
  if (!v.has_value()) return json_null ? "null" : "";
  return FormatDouble(*v);
}

// JSON has no literal for non-finite numbers; they are written as strings.
std::string JsonDouble(double v) {
  if (std::isfinite(v)) return FormatDouble(v);
  return absl::StrCat("\"", FormatDouble(v), "\"");
}

std::string JsonOptional(const std::optional<double>& v) {
  return v.has_value() ? JsonDouble(*v) : "null";
}

double ReadDouble(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("bad number " + s);
  }
  if (!v.is_number()) throw std::invalid_argument("expected a number");
  return v.get<double>();
}

std::optional<double> ReadOptional(const json& v) {
  if (v.is_null()) return std::nullopt;
  return ReadDouble(v);
}

MetricsRow RowFromJson(const json& j) {
  MetricsRow r;
  r.schema_version = j.at("schema_version").get<std::int64_t>();
  r.experiment = j.at("experiment").get<std::string>();
  r.config_digest = j.at("config_digest").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.association_mode = j.at("association_mode").get<std::string>();
  r.num_participants = j.at("num_participants").get<std::int64_t>();
  r.miner_loads = j.at("miner_loads").get<std::vector<std::int64_t>>();
  r.round = j.at("round").get<std::int64_t>();
  r.global_loss = ReadDouble(j.at("global_loss"));
  r.total_utility = ReadDouble(j.at("total_utility"));
  r.objective = ReadDouble(j.at("objective"));
  r.test_loss = ReadOptional(j.at("test_loss"));
  r.test_accuracy = ReadOptional(j.at("test_accuracy"));
  r.uploaded = j.at("uploaded").get<std::int64_t>();
  r.downloaded = j.at("downloaded").get<std::int64_t>();
  r.broadcast = j.at("broadcast").get<std::int64_t>();
  r.learning_rate = ReadDouble(j.at("learning_rate"));
  r.wall_time_s = ReadDouble(j.at("wall_time_s"));
  return r;
}

}  // namespace

absl::StatusOr<MetricsFormat> ParseMetricsFormat(std::string_view name) {
  if (name == "csv") return MetricsFormat::kCsv;
  if (name == "jsonl" || name == "json-lines") return MetricsFormat::kJsonLines;
  return MakeError(ErrorKind::kValidationError,
                   absl::StrCat("unknown metrics format '", Sv(name), "'"));
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

const std::vector<std::string>& CsvColumns() {
  static const std::vector<std::string> kColumns = {
      "schema_version", "experiment",     "config_digest", "seed",
      "association_mode", "num_participants", "miner_loads", "round",
      "global_loss",    "total_utility",  "objective",     "test_loss",
      "test_accuracy",  "uploaded",       "downloaded",    "broadcast",
      "learning_rate",  "wall_time_s"};
  return kColumns;
}

void WriteCsv(std::span<const MetricsRow> rows, std::ostream& out) {
  out << absl::StrJoin(CsvColumns(), ",") << "\n";
  for (const MetricsRow& r : rows) {
    const std::vector<std::string> fields = {
        absl::StrCat(r.schema_version),
        CsvField(r.experiment),
        CsvField(r.config_digest),
        absl::StrCat(r.seed),
        CsvField(r.association_mode),
        absl::StrCat(r.num_participants),
        absl::StrJoin(r.miner_loads, ";"),
        absl::StrCat(r.round),
        FormatDouble(r.global_loss),
        FormatDouble(r.total_utility),
        FormatDouble(r.objective),
        OptionalDouble(r.test_loss, false),
        OptionalDouble(r.test_accuracy, false),
        absl::StrCat(r.uploaded),
        absl::StrCat(r.downloaded),
        absl::StrCat(r.broadcast),
        FormatDouble(r.learning_rate),
        FormatDouble(r.wall_time_s)};
    out << absl::StrJoin(fields, ",") << "\n";
  }
}

void WriteJsonLines(std::span<const MetricsRow> rows, std::ostream& out) {
  for (const MetricsRow& r : rows) {
    out << "{\"schema_version\":" << r.schema_version
        << ",\"experiment\":" << json(r.experiment).dump()
        << ",\"config_digest\":" << json(r.config_digest).dump()
        << ",\"seed\":" << r.seed
        << ",\"association_mode\":" << json(r.association_mode).dump()
        << ",\"num_participants\":" << r.num_participants
        << ",\"miner_loads\":[" << absl::StrJoin(r.miner_loads, ",") << "]"
        << ",\"round\":" << r.round
        << ",\"global_loss\":" << JsonDouble(r.global_loss)
        << ",\"total_utility\":" << JsonDouble(r.total_utility)
        << ",\"objective\":" << JsonDouble(r.objective)
        << ",\"test_loss\":" << JsonOptional(r.test_loss)
        << ",\"test_accuracy\":" << JsonOptional(r.test_accuracy)
        << ",\"uploaded\":" << r.uploaded
        << ",\"downloaded\":" << r.downloaded
        << ",\"broadcast\":" << r.broadcast
        << ",\"learning_rate\":" << JsonDouble(r.learning_rate)
        << ",\"wall_time_s\":" << JsonDouble(r.wall_time_s) << "}\n";
  }
}

void WriteMetrics(std::span<const MetricsRow> rows, MetricsFormat format,
                  std::ostream& out) {
  if (format == MetricsFormat::kCsv) {
    WriteCsv(rows, out);
  } else {
    WriteJsonLines(rows, out);
  }
}

absl::Status ExportMetrics(std::span<const MetricsRow> rows,
                           MetricsFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(ErrorKind::kIoError,
                     absl::StrCat("cannot open ", path, " for writing"));
  }
  WriteMetrics(rows, format, out);
  out.flush();
  if (!out) {
    return MakeError(ErrorKind::kIoError, absl::StrCat("write to ", path,
                                                       " failed"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<MetricsRow>> ReadJsonLines(std::istream& in) {
  std::vector<MetricsRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      rows.push_back(RowFromJson(json::parse(line)));
    } catch (const std::exception& e) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("line ", line_no, ": ", e.what()));
    }
  }
  return rows;
}

}  // namespace medchain
