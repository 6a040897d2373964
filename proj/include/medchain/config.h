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

#ifndef MEDCHAIN_CONFIG_H_
#define MEDCHAIN_CONFIG_H_

// Experiment configuration, read from a JSON document. Every field except
// `seed` is optional; omitted fields take the defaults below. Unknown keys
// are rejected.
//
// {
//   "seed": 7,
//   "label": "baseline",
//   "population": {"num_mcs": 50, "num_miners": 5},
//   "ranges": {"cpu_rate_ghz": [1.0, 2.6], "cycles_per_sample": [1e4, 3e4],
//              "tx_power_db": [1, 10], "tx_power_unit": "dBW",
//              "prb_count": [1, 10], "sinr_db": [13, 20]},
//   "local_iters": 10,
//   "system": {"kappa": 1e-28, "phi": 1, "mining_reward": 10,
//              "global_iters": 15, "threshold_s": 1440, "model_bits": 3776,
//              "prb_bandwidth_hz": 2e7, "rho": 0.5, "eta": 0.5},
//   "privacy": {"epsilon": null, "delta": 1e-5, "noise_scale": 0.25,
//               "clip_bound": 8, "batch_size": 32, "learning_rate": 0.01,
//               "lr_plateau": false},
//   "association": {"mode": "mma", "orientation": "self_utility",
//                   "assoc_count": 1, "miner_capacity": null,
//                   "utility_accounting": "pairwise"},
//   "dataset": {"samples_per_mc": null, "feature_dim": 20,
//               "separation": 2.0, "test_samples": 586},
//   "model": {"architecture": "logistic_regression", "hidden": 16},
//   "ledger": {"difficulty": 8}
// }
//
// When "epsilon" is given without "noise_scale", sigma is derived from
// (epsilon, delta). "samples_per_mc": null means floor(5270 / num_mcs).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "medchain/dataset.h"
#include "medchain/dp_optimizer.h"
#include "medchain/matching.h"
#include "medchain/utility_model.h"

namespace medchain {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

enum class AssociationMode { kMma, kRandom };

// How U is priced once the association is known.
enum class UtilityAccounting {
  // Each pair keeps the economics it was ranked with (assoc_count fixed).
  kPairwise,
  // Miner revenue recomputed from the realised number of MCs per miner.
  kRealized,
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string label;
  std::int64_t num_mcs = 50;
  std::int64_t num_miners = 5;
  Range cpu_rate_ghz{1.0, 2.6};
  Range cycles_per_sample{1e4, 3e4};
  Range tx_power_db{1.0, 10.0};
  PowerUnit tx_power_unit = PowerUnit::kDbW;
  Range prb_count{1.0, 10.0};
  Range sinr_db{13.0, 20.0};
  std::int32_t local_iters = 10;
  SystemParams sys;
  PrivacyParams privacy{.epsilon = std::nullopt, .delta = 1e-5,
                        .noise_scale = 0.25, .clip_bound = 8.0};
  bool lr_plateau = false;
  AssociationMode association_mode = AssociationMode::kMma;
  Orientation orientation = Orientation::kSelfUtility;
  std::int64_t assoc_count = 1;
  std::optional<std::size_t> miner_capacity;
  UtilityAccounting utility_accounting = UtilityAccounting::kPairwise;
  std::optional<std::int64_t> samples_per_mc;
  std::size_t feature_dim = 20;
  double separation = 2.0;
  std::int64_t test_samples = 586;
  ModelShape model;  // input_dim follows feature_dim
  int difficulty = 8;

  std::int64_t SamplesPerMc() const;
  absl::Status Validate() const;
};

// Parses and validates. ParseError (with line) for malformed JSON or wrongly
// typed fields, ValidationError naming the violated constraint otherwise.
absl::StatusOr<ExperimentConfig> ParseConfig(std::string_view text);
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);

// Canonical JSON of a validated config with every default spelled out.
std::string ConfigToJson(const ExperimentConfig& cfg);

// First 16 hex chars of SHA-256 over ConfigToJson.
std::string ConfigDigest(const ExperimentConfig& cfg);

std::string_view AssociationModeName(AssociationMode mode);
std::string_view OrientationName(Orientation orientation);

}  // namespace medchain

#endif  // MEDCHAIN_CONFIG_H_
