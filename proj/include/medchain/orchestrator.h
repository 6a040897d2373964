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

#ifndef MEDCHAIN_ORCHESTRATOR_H_
#define MEDCHAIN_ORCHESTRATOR_H_

// Federated training over the chain. Per global round every participant
// trains locally from the current global weights, uploads once to its miner,
// the miner mines one block per upload, every participant downloads all of
// the round's uploads from the chain and aggregates them with data-size
// weights p_n = D_n / D.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "medchain/dataset.h"
#include "medchain/dp_optimizer.h"
#include "medchain/ids.h"
#include "medchain/ledger.h"
#include "medchain/matching.h"
#include "medchain/utility_model.h"

namespace medchain {

struct Participant {
  MedicalCenterSpec mc;  // dataset must be set
  MinerId miner;
};

struct FederationPlan {
  std::vector<Participant> participants;  // ascending MC id
  std::vector<double> aggregation_weights;
  PrivacyParams privacy;
  SystemParams sys;
  ModelShape shape;
  std::size_t miner_count = 1;  // S
  double total_utility = 0.0;   // U, fixed for the association

  // Sorts participants by MC id and derives p_n = D_n / sum D.
  static absl::StatusOr<FederationPlan> Create(
      std::vector<Participant> participants, const PrivacyParams& privacy,
      const SystemParams& sys, const ModelShape& shape,
      std::size_t miner_count, double total_utility);

  absl::Status Validate() const;
};

struct CommCounters {
  std::int64_t uploaded = 0;    // weights sent MC -> miner
  std::int64_t downloaded = 0;  // weights fetched chain -> MC
  std::int64_t broadcast = 0;   // weights sent miner -> other miners
  std::int64_t total() const { return uploaded + downloaded + broadcast; }
};

struct RoundRecord {
  std::int64_t round = 0;
  WeightVector global_weights;  // W^(t+1), after aggregation
  double global_loss = 0.0;     // J
  double total_utility = 0.0;   // U
  double objective = 0.0;       // rho U - eta J
  double learning_rate = 0.0;
  std::optional<double> test_loss;
  std::optional<double> test_accuracy;
  CommCounters comm;            // this round only
  double wall_time_s = 0.0;
};

struct FederationOptions {
  std::uint64_t seed = 0;
  bool lr_plateau = false;
  const Dataset* test_set = nullptr;
  // Keeps every participant's uploaded weights per round in the run result.
  bool keep_local_weights = false;
};

struct FederationRun {
  std::vector<RoundRecord> records;
  CommCounters comm;  // totals
  WeightVector final_weights;
  // rounds x participants, only with keep_local_weights.
  std::vector<std::vector<WeightVector>> local_weights;
};

struct WeightedVector {
  std::span<const double> weights;
  double p = 0.0;
};

// Coordinate-wise sum p_n w_n. LengthMismatch when vector lengths differ,
// WeightSumViolation unless the p_n are positive and sum to 1 (1e-12).
absl::StatusOr<WeightVector> Aggregate(std::span<const WeightedVector> locals);

// Unweighted mean of per-participant dataset losses.
absl::StatusOr<double> MeanLoss(std::span<const double> losses);

// J at `weights`: each participant's dataset loss, then MeanLoss.
absl::StatusOr<double> GlobalLoss(std::span<const double> weights,
                                  const FederationPlan& plan);

// rho * U - eta * J
double ObjectiveF(double total_utility, double global_loss,
                  const SystemParams& sys);

// Sum over associated pairs of U^Min + U^MC taken from `economics`.
double TotalUtility(const AssociationResult& result,
                    const EconomicsTable& economics);

// Runs T = plan.sys.global_iters rounds. The chain must hold the genesis
// block whose payload is the initial model.
absl::StatusOr<FederationRun> RunFederation(const FederationPlan& plan,
                                            Chain& chain,
                                            const FederationOptions& options);

}  // namespace medchain

#endif  // MEDCHAIN_ORCHESTRATOR_H_
