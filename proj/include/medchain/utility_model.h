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

#ifndef MEDCHAIN_UTILITY_MODEL_H_
#define MEDCHAIN_UTILITY_MODEL_H_

// Economic and physical quantities of the miner / medical-center market:
// computation and upload energy, delays, uplink rate, block rewards and the
// utilities that drive association. All functions are pure.

#include <cstdint>
#include <memory>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "medchain/dataset.h"
#include "medchain/ids.h"

namespace medchain {

struct SystemParams {
  double kappa = 1e-28;            // effective switched capacitance
  double phi = 1.0;                // cost per joule
  double mining_reward = 10.0;     // reward per appended block
  std::int32_t global_iters = 15;  // T
  double threshold_s = 1440.0;     // upload deadline, 24 min
  double model_bits = 3776.0;      // H
  double prb_bandwidth_hz = 20e6;  // Q
  double rho = 0.5;                // utility weight in the objective
  double eta = 0.5;                // loss weight in the objective

  absl::Status Validate() const;
};

struct MedicalCenterSpec {
  McId id;
  std::int64_t data_size = 1;      // D_n, samples
  double cpu_rate_hz = 1e9;        // f_n
  double cycles_per_sample = 1e4;  // beta_n
  std::int32_t local_iters = 1;    // I_n
  double tx_power_w = 1.0;         // mu_n
  // Local training samples. Optional for pure economic computations; when
  // present its length must equal data_size.
  std::shared_ptr<const Dataset> dataset;

  absl::Status Validate() const;
};

struct ChannelSpec {
  std::int32_t prb_count = 1;  // V
  double sinr_db = 13.0;

  absl::Status Validate() const;
};

struct PairEconomics {
  double comp_time_s = 0.0;
  double trans_time_s = 0.0;
  double comp_energy_j = 0.0;
  double trans_energy_j = 0.0;
  double miner_revenue = 0.0;  // R_s
  double reward = 0.0;         // R_{n,s}
  double miner_utility = 0.0;  // U^Min
  double mc_utility = 0.0;     // U^MC
  bool feasible = false;       // comp + trans time within the deadline
};

enum class PowerUnit { kDbW, kDbm };

double DbToLinear(double db);
double PowerDbToWatts(double db, PowerUnit unit);

// kappa * I * beta * D * f^2
double CompEnergy(const MedicalCenterSpec& mc, const SystemParams& sys);

// I * beta * D / f
double CompTime(const MedicalCenterSpec& mc);

// Shannon rate Q * V * log2(1 + SINR), SINR converted from dB first.
double DataRate(const ChannelSpec& chan, const SystemParams& sys);

// Time to upload the model T times at `rate_bps`. ZeroRate if rate <= 0.
absl::StatusOr<double> TransTime(const SystemParams& sys, double rate_bps);

double TransEnergy(const MedicalCenterSpec& mc, double trans_time_s);

// T * R * (number of MCs associated with the miner)
double MinerRevenue(const SystemParams& sys, std::int64_t assoc_count);

// Share of `revenue` proportional to mc_data / total_data.
absl::StatusOr<double> McReward(double revenue, double mc_data,
                                double total_data);

struct PairUtilities {
  double miner_utility = 0.0;
  double mc_utility = 0.0;
};

// U^Min = R_s - R_{n,s};  U^MC = R_{n,s} - phi * (E^comp + E^trans).
PairUtilities ComposeUtilities(double miner_revenue, double reward,
                               double comp_energy_j, double trans_energy_j,
                               double phi);

absl::StatusOr<PairEconomics> ComputePairEconomics(
    const MedicalCenterSpec& mc, const ChannelSpec& chan,
    const SystemParams& sys, std::int64_t assoc_count, double total_data);

}  // namespace medchain

#endif  // MEDCHAIN_UTILITY_MODEL_H_
