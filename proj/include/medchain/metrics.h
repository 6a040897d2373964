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

#ifndef MEDCHAIN_METRICS_H_
#define MEDCHAIN_METRICS_H_

// Flat per-round metrics records and their CSV / JSON-lines encodings.
// Floating-point fields are written with 17 significant digits so that
// reading them back reproduces the exact doubles.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace medchain {

inline constexpr std::int64_t kMetricsSchemaVersion = 1;

struct MetricsRow {
  std::int64_t schema_version = kMetricsSchemaVersion;
  std::string experiment;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string association_mode;
  std::int64_t num_participants = 0;
  std::vector<std::int64_t> miner_loads;
  std::int64_t round = 0;
  double global_loss = 0.0;
  double total_utility = 0.0;
  double objective = 0.0;
  std::optional<double> test_loss;
  std::optional<double> test_accuracy;
  std::int64_t uploaded = 0;
  std::int64_t downloaded = 0;
  std::int64_t broadcast = 0;
  double learning_rate = 0.0;
  double wall_time_s = 0.0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

enum class MetricsFormat { kCsv, kJsonLines };

// "csv" or "jsonl" / "json-lines".
absl::StatusOr<MetricsFormat> ParseMetricsFormat(std::string_view name);

// "%.17g"; non-finite values become "nan", "inf" or "-inf".
std::string FormatDouble(double value);

// Column names in order. miner_loads is a ';'-separated list in CSV.
const std::vector<std::string>& CsvColumns();

void WriteCsv(std::span<const MetricsRow> rows, std::ostream& out);
void WriteJsonLines(std::span<const MetricsRow> rows, std::ostream& out);
void WriteMetrics(std::span<const MetricsRow> rows, MetricsFormat format,
                  std::ostream& out);

// IoError when the file cannot be written.
absl::Status ExportMetrics(std::span<const MetricsRow> rows,
                           MetricsFormat format, const std::string& path);

// ParseError (with line number) on malformed records.
absl::StatusOr<std::vector<MetricsRow>> ReadJsonLines(std::istream& in);

}  // namespace medchain

#endif  // MEDCHAIN_METRICS_H_
