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

#include "medchain/utility_model.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "medchain/error.h"

namespace medchain {
namespace {

absl::Status Invalid(std::string_view what) {
  return MakeError(ErrorKind::kValidationError, what);
}

}  // namespace

absl::Status SystemParams::Validate() const {
  if (!(kappa > 0)) return Invalid("kappa must be > 0");
  if (!(phi >= 0)) return Invalid("phi must be >= 0");
  if (!(mining_reward > 0)) return Invalid("mining_reward must be > 0");
  if (global_iters < 1) return Invalid("global_iters must be >= 1");
  if (!(threshold_s > 0)) return Invalid("threshold must be > 0");
  if (!(model_bits > 0)) return Invalid("model_bits must be > 0");
  if (!(prb_bandwidth_hz > 0)) return Invalid("prb_bandwidth must be > 0");
  if (!(rho >= 0 && rho <= 1) || !(eta >= 0 && eta <= 1)) {
    return Invalid("rho and eta must lie in [0, 1]");
  }
  if (std::abs(rho + eta - 1.0) > 1e-12) {
    return Invalid(absl::StrCat("rho + eta must equal 1, got ", rho + eta));
  }
  return absl::OkStatus();
}

absl::Status MedicalCenterSpec::Validate() const {
  if (data_size < 1) return Invalid("data_size must be >= 1");
  if (!(cpu_rate_hz > 0)) return Invalid("cpu_rate must be > 0");
  if (!(cycles_per_sample > 0)) return Invalid("cycles_per_sample must be > 0");
  if (local_iters < 1) return Invalid("local_iters must be >= 1");
  if (!(tx_power_w > 0)) return Invalid("tx_power must be > 0");
  if (dataset != nullptr &&
      static_cast<std::int64_t>(dataset->size()) != data_size) {
    return Invalid("dataset length differs from data_size");
  }
  return absl::OkStatus();
}

absl::Status ChannelSpec::Validate() const {
  if (prb_count < 1) return Invalid("prb_count must be >= 1");
  if (!std::isfinite(sinr_db)) return Invalid("sinr_db must be finite");
  return absl::OkStatus();
}

double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }

double PowerDbToWatts(double db, PowerUnit unit) {
  return unit == PowerUnit::kDbW ? DbToLinear(db) : DbToLinear(db - 30.0);
}

double CompEnergy(const MedicalCenterSpec& mc, const SystemParams& sys) {
  const double f = mc.cpu_rate_hz;
  return sys.kappa * mc.local_iters * mc.cycles_per_sample *
         static_cast<double>(mc.data_size) * f * f;
}

double CompTime(const MedicalCenterSpec& mc) {
  return mc.local_iters * mc.cycles_per_sample *
         static_cast<double>(mc.data_size) / mc.cpu_rate_hz;
}

double DataRate(const ChannelSpec& chan, const SystemParams& sys) {
  return sys.prb_bandwidth_hz * chan.prb_count *
         std::log2(1.0 + DbToLinear(chan.sinr_db));
}

absl::StatusOr<double> TransTime(const SystemParams& sys, double rate_bps) {
  if (!(rate_bps > 0)) {
    return MakeError(ErrorKind::kZeroRate,
                     absl::StrCat("uplink rate is ", rate_bps));
  }
  return sys.global_iters * sys.model_bits / rate_bps;
}

double TransEnergy(const MedicalCenterSpec& mc, double trans_time_s) {
  return trans_time_s * mc.tx_power_w;
}

double MinerRevenue(const SystemParams& sys, std::int64_t assoc_count) {
  return sys.global_iters * sys.mining_reward *
         static_cast<double>(assoc_count);
}

absl::StatusOr<double> McReward(double revenue, double mc_data,
                                double total_data) {
  if (!(total_data > 0)) {
    return MakeError(ErrorKind::kZeroTotalData, "total data size is zero");
  }
  return revenue * mc_data / total_data;
}

PairUtilities ComposeUtilities(double miner_revenue, double reward,
                               double comp_energy_j, double trans_energy_j,
                               double phi) {
  return {.miner_utility = miner_revenue - reward,
          .mc_utility = reward - phi * (comp_energy_j + trans_energy_j)};
}

absl::StatusOr<PairEconomics> ComputePairEconomics(
    const MedicalCenterSpec& mc, const ChannelSpec& chan,
    const SystemParams& sys, std::int64_t assoc_count, double total_data) {
  PairEconomics econ;
  econ.comp_time_s = CompTime(mc);
  econ.comp_energy_j = CompEnergy(mc, sys);
  absl::StatusOr<double> trans_time = TransTime(sys, DataRate(chan, sys));
  if (!trans_time.ok()) return trans_time.status();
  econ.trans_time_s = *trans_time;
  econ.trans_energy_j = TransEnergy(mc, econ.trans_time_s);
  econ.miner_revenue = MinerRevenue(sys, assoc_count);
  absl::StatusOr<double> reward = McReward(
      econ.miner_revenue, static_cast<double>(mc.data_size), total_data);
  if (!reward.ok()) return reward.status();
  econ.reward = *reward;
  const PairUtilities u =
      ComposeUtilities(econ.miner_revenue, econ.reward, econ.comp_energy_j,
                       econ.trans_energy_j, sys.phi);
  econ.miner_utility = u.miner_utility;
  econ.mc_utility = u.mc_utility;
  econ.feasible = econ.comp_time_s + econ.trans_time_s <= sys.threshold_s;
  return econ;
}

}  // namespace medchain
