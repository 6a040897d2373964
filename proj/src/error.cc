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

#include "medchain/error.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"

namespace medchain {
namespace {

constexpr char kPayloadUrl[] = "medchain/error_kind";

struct KindInfo {
  ErrorKind kind;
  std::string_view name;
  absl::StatusCode code;
};

constexpr std::array<KindInfo, 14> kKinds = {{
    {ErrorKind::kZeroRate, "ZeroRate", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kZeroTotalData, "ZeroTotalData",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kNoFeasiblePairs, "NoFeasiblePairs",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kInvalidBudget, "InvalidBudget",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kDimensionMismatch, "DimensionMismatch",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kEmptyBatch, "EmptyBatch", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kVerificationFailed, "VerificationFailed",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kIncompleteRound, "IncompleteRound",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kLengthMismatch, "LengthMismatch",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kWeightSumViolation, "WeightSumViolation",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kEmptyFederation, "EmptyFederation",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kParseError, "ParseError", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kValidationError, "ValidationError",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kIoError, "IoError", absl::StatusCode::kUnavailable},
}};

const KindInfo& Info(ErrorKind kind) {
  for (const auto& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds[0];
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) { return Info(kind).name; }

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  const KindInfo& info = Info(kind);
  std::string text(info.name);
  text += ": ";
  text += message;
  absl::Status status(info.code, text);
  status.SetPayload(kPayloadUrl, absl::Cord(std::string(info.name)));
  return status;
}

std::optional<ErrorKind> GetErrorKind(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const auto& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

}  // namespace medchain
