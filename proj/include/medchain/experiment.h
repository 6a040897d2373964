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

#ifndef MEDCHAIN_EXPERIMENT_H_
#define MEDCHAIN_EXPERIMENT_H_

// End-to-end experiment: population -> preferences -> association ->
// chain -> federated training -> metrics rows.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "medchain/config.h"
#include "medchain/ledger.h"
#include "medchain/matching.h"
#include "medchain/metrics.h"
#include "medchain/orchestrator.h"

namespace medchain {

struct ExperimentOptions {
  // Wall-clock time is left at zero unless asked for, so that metrics files
  // stay byte-identical across runs.
  bool record_wall_time = false;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::string config_digest;
  AssociationResult association;
  std::optional<ComplexityCounters> mma_counters;  // MMA mode only
  // U under both accounting conventions; config.utility_accounting picks
  // the one fed into the objective.
  double pairwise_utility = 0.0;
  double realized_utility = 0.0;
  FederationRun run;
  std::vector<MetricsRow> rows;
  std::optional<Chain> chain;

  // Objective after the last round.
  double FinalObjective() const;
};

// Sum of U^Min + U^MC over associated pairs, each priced with the number of
// MCs its miner actually serves.
absl::StatusOr<double> RealizedUtility(const AssociationResult& result,
                                       std::span<const MedicalCenterSpec> mcs,
                                       const ChannelTable& channels,
                                       const SystemParams& sys);

// NoFeasiblePairs when no MC can be associated.
absl::StatusOr<ExperimentResult> RunExperiment(
    const ExperimentConfig& cfg, const ExperimentOptions& options = {});

// Cartesian grid over a base config. An empty axis keeps the base value.
struct SweepGrid {
  std::vector<double> noise_scales;
  std::vector<double> clip_bounds;
  std::vector<AssociationMode> modes;
  std::vector<std::uint64_t> seeds;
};

// One config per grid point, labelled by its coordinates, in the order
// seed, mode, clip bound, noise scale (the last varying fastest).
std::vector<ExperimentConfig> ExpandSweep(const ExperimentConfig& base,
                                          const SweepGrid& grid);

}  // namespace medchain

#endif  // MEDCHAIN_EXPERIMENT_H_
