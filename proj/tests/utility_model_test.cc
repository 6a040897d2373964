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
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "medchain/error.h"

namespace medchain {
namespace {

MedicalCenterSpec ReferenceMc(std::int64_t data_size) {
  MedicalCenterSpec mc;
  mc.id = McId{1};
  mc.data_size = data_size;
  mc.cpu_rate_hz = 2e9;
  mc.cycles_per_sample = 2e4;
  mc.local_iters = 10;
  mc.tx_power_w = 2.0;
  return mc;
}

MedicalCenterSpec UnitMc() {
  MedicalCenterSpec mc;
  mc.data_size = 1;
  mc.cpu_rate_hz = 1;
  mc.cycles_per_sample = 1;
  mc.local_iters = 1;
  return mc;
}

TEST(SystemParamsTest, DefaultsValidate) {
  EXPECT_TRUE(SystemParams{}.Validate().ok());
}

TEST(SystemParamsTest, RejectsWeightsNotSummingToOne) {
  SystemParams sys;
  sys.rho = 0.7;
  const absl::Status s = sys.Validate();
  EXPECT_TRUE(HasErrorKind(s, ErrorKind::kValidationError)) << s;
}

TEST(SystemParamsTest, RejectsNonPositiveFields) {
  SystemParams sys;
  sys.kappa = 0;
  EXPECT_FALSE(sys.Validate().ok());
  sys = SystemParams{};
  sys.global_iters = 0;
  EXPECT_FALSE(sys.Validate().ok());
  sys = SystemParams{};
  sys.threshold_s = -1;
  EXPECT_FALSE(sys.Validate().ok());
}

TEST(MedicalCenterSpecTest, Invariants) {
  MedicalCenterSpec mc = ReferenceMc(100);
  EXPECT_TRUE(mc.Validate().ok());
  mc.local_iters = 0;
  EXPECT_FALSE(mc.Validate().ok());
  mc = ReferenceMc(0);
  EXPECT_FALSE(mc.Validate().ok());
}

TEST(ChannelSpecTest, Invariants) {
  EXPECT_TRUE((ChannelSpec{1, 13.0}).Validate().ok());
  EXPECT_FALSE((ChannelSpec{0, 13.0}).Validate().ok());
  EXPECT_FALSE(
      (ChannelSpec{1, std::numeric_limits<double>::infinity()}).Validate().ok());
}

TEST(CompEnergyTest, ReferenceValue) {
  EXPECT_NEAR(CompEnergy(ReferenceMc(527), SystemParams{}), 0.04216, 1e-15);
}

TEST(CompEnergyTest, AllOnes) {
  SystemParams sys;
  sys.kappa = 1;
  EXPECT_DOUBLE_EQ(CompEnergy(UnitMc(), sys), 1.0);
}

TEST(CompEnergyTest, QuadraticInCpuRate) {
  MedicalCenterSpec mc = ReferenceMc(527);
  const double base = CompEnergy(mc, SystemParams{});
  mc.cpu_rate_hz *= 2;
  EXPECT_DOUBLE_EQ(CompEnergy(mc, SystemParams{}) / base, 4.0);
}

TEST(CompTimeTest, ReferenceValue) {
  EXPECT_NEAR(CompTime(ReferenceMc(527)), 0.0527, 1e-15);
}

TEST(CompTimeTest, AllOnesAndLinearity) {
  EXPECT_DOUBLE_EQ(CompTime(UnitMc()), 1.0);
  EXPECT_DOUBLE_EQ(CompTime(ReferenceMc(300)), 3 * CompTime(ReferenceMc(100)));
}

TEST(DataRateTest, ReferenceValue) {
  EXPECT_NEAR(DataRate(ChannelSpec{1, 13.0}, SystemParams{}),
              87781179.34726090, 1e-4);
  EXPECT_NEAR(DbToLinear(13.0), 19.95262314968880, 1e-12);
}

TEST(DataRateTest, VanishesAsSinrFalls) {
  EXPECT_LT(DataRate(ChannelSpec{1, -300.0}, SystemParams{}), 1e-20);
}

TEST(DataRateTest, LinearInPrbCount) {
  const double one = DataRate(ChannelSpec{1, 17.0}, SystemParams{});
  EXPECT_DOUBLE_EQ(DataRate(ChannelSpec{10, 17.0}, SystemParams{}), 10 * one);
}

TEST(TransTimeTest, ReferenceValue) {
  absl::StatusOr<double> t = TransTime(SystemParams{}, 87781179.34726090);
  ASSERT_TRUE(t.ok());
  EXPECT_NEAR(*t, 6.452408183755779e-4, 1e-16);
}

TEST(TransTimeTest, UnitCaseAndHalving) {
  SystemParams sys;
  sys.global_iters = 1;
  sys.model_bits = 1234.0;
  EXPECT_DOUBLE_EQ(*TransTime(sys, 1234.0), 1.0);
  EXPECT_DOUBLE_EQ(*TransTime(sys, 617.0), 2.0);
}

TEST(TransTimeTest, ZeroRate) {
  EXPECT_TRUE(
      HasErrorKind(TransTime(SystemParams{}, 0.0).status(), ErrorKind::kZeroRate));
}

TEST(TransEnergyTest, Values) {
  const MedicalCenterSpec mc = ReferenceMc(100);
  EXPECT_NEAR(TransEnergy(mc, 6.452408183755779e-4), 1.290481636751156e-3,
              1e-17);
  EXPECT_EQ(TransEnergy(mc, 0.0), 0.0);
  MedicalCenterSpec unit = mc;
  unit.tx_power_w = 1.0;
  EXPECT_EQ(TransEnergy(unit, 0.37), 0.37);
}

TEST(PowerTest, DbwAndDbm) {
  EXPECT_DOUBLE_EQ(PowerDbToWatts(10.0, PowerUnit::kDbW), 10.0);
  EXPECT_DOUBLE_EQ(PowerDbToWatts(30.0, PowerUnit::kDbm), 1.0);
  EXPECT_DOUBLE_EQ(PowerDbToWatts(0.0, PowerUnit::kDbW), 1.0);
}

TEST(MinerRevenueTest, Values) {
  const SystemParams sys;
  EXPECT_DOUBLE_EQ(MinerRevenue(sys, 2), 300.0);
  EXPECT_EQ(MinerRevenue(sys, 0), 0.0);
  EXPECT_DOUBLE_EQ(MinerRevenue(sys, 6), 3 * MinerRevenue(sys, 2));
}

TEST(McRewardTest, Values) {
  EXPECT_DOUBLE_EQ(*McReward(300, 100, 500), 60.0);
  EXPECT_DOUBLE_EQ(*McReward(300, 500, 500), 300.0);
  EXPECT_DOUBLE_EQ(*McReward(300, 250, 500) * 2, 300.0);
  EXPECT_TRUE(
      HasErrorKind(McReward(300, 0, 0).status(), ErrorKind::kZeroTotalData));
}

TEST(ComposeUtilitiesTest, ReferenceComposition) {
  const PairUtilities u =
      ComposeUtilities(300.0, 60.0, 0.04216, 1.290481636751156e-3, 1.0);
  EXPECT_DOUBLE_EQ(u.miner_utility, 240.0);
  EXPECT_NEAR(u.mc_utility, 59.95654951836325, 1e-12);
  EXPECT_NEAR(u.mc_utility / 59.9566 - 1.0, 0.0, 1e-3);
}

TEST(PairEconomicsTest, ReferencePair) {
  absl::StatusOr<PairEconomics> e = ComputePairEconomics(
      ReferenceMc(100), ChannelSpec{1, 13.0}, SystemParams{}, 2, 500.0);
  ASSERT_TRUE(e.ok()) << e.status();
  EXPECT_DOUBLE_EQ(e->miner_revenue, 300.0);
  EXPECT_DOUBLE_EQ(e->reward, 60.0);
  EXPECT_DOUBLE_EQ(e->miner_utility, 240.0);
  EXPECT_NEAR(e->comp_energy_j, 0.008, 1e-16);
  EXPECT_NEAR(e->mc_utility, 59.99070951836325, 1e-11);
  EXPECT_TRUE(e->feasible);
}

TEST(PairEconomicsTest, ZeroPhiLeavesReward) {
  SystemParams sys;
  sys.phi = 0;
  absl::StatusOr<PairEconomics> e =
      ComputePairEconomics(ReferenceMc(100), ChannelSpec{3, 15.0}, sys, 2, 500);
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(e->mc_utility, e->reward);
}

TEST(PairEconomicsTest, DeadlineMissIsInfeasible) {
  SystemParams sys;
  sys.threshold_s = 0.01;  // below the 0.0527 s of computation
  absl::StatusOr<PairEconomics> e =
      ComputePairEconomics(ReferenceMc(527), ChannelSpec{10, 20.0}, sys, 1, 527);
  ASSERT_TRUE(e.ok());
  EXPECT_FALSE(e->feasible);
  EXPECT_GT(e->mc_utility, 0.0);
}

TEST(PairEconomicsTest, PropagatesZeroTotalData) {
  EXPECT_TRUE(HasErrorKind(
      ComputePairEconomics(ReferenceMc(100), ChannelSpec{1, 13.0},
                           SystemParams{}, 1, 0.0)
          .status(),
      ErrorKind::kZeroTotalData));
}

TEST(PairEconomicsTest, RevenueIdentityOnRandomInputs) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    MedicalCenterSpec mc;
    mc.data_size = 1 + static_cast<std::int64_t>(u(rng) * 1000);
    mc.cpu_rate_hz = 1e9 + 1.6e9 * u(rng);
    mc.cycles_per_sample = 1e4 + 2e4 * u(rng);
    mc.local_iters = 1 + static_cast<std::int32_t>(u(rng) * 20);
    mc.tx_power_w = 1 + 9 * u(rng);
    SystemParams sys;
    sys.phi = 3 * u(rng);
    const ChannelSpec chan{1 + static_cast<std::int32_t>(u(rng) * 10),
                           13 + 7 * u(rng)};
    const std::int64_t count = 1 + static_cast<std::int64_t>(u(rng) * 5);
    const double total = static_cast<double>(mc.data_size) * (1 + 4 * u(rng));
    absl::StatusOr<PairEconomics> e =
        ComputePairEconomics(mc, chan, sys, count, total);
    ASSERT_TRUE(e.ok());
    const double lhs = e->miner_utility + e->mc_utility +
                       sys.phi * (e->comp_energy_j + e->trans_energy_j);
    EXPECT_NEAR(lhs / e->miner_revenue, 1.0, 1e-9);
  }
}

TEST(PairEconomicsTest, MonotoneInDataSize) {
  const SystemParams sys;
  double prev_min = std::numeric_limits<double>::infinity();
  double prev_reward = -1;
  for (std::int64_t d = 50; d <= 500; d += 50) {
    absl::StatusOr<PairEconomics> e =
        ComputePairEconomics(ReferenceMc(d), ChannelSpec{2, 15}, sys, 2, 1000);
    ASSERT_TRUE(e.ok());
    EXPECT_LE(e->miner_utility, prev_min);
    EXPECT_GT(e->reward, prev_reward);
    prev_min = e->miner_utility;
    prev_reward = e->reward;
  }
}

TEST(PairEconomicsTest, FeasibilityMonotoneInRates) {
  SystemParams sys;
  sys.threshold_s = 0.06;
  bool was_feasible = false;
  for (double ghz = 1.0; ghz <= 2.6; ghz += 0.1) {
    MedicalCenterSpec mc = ReferenceMc(527);
    mc.cpu_rate_hz = ghz * 1e9;
    absl::StatusOr<PairEconomics> e =
        ComputePairEconomics(mc, ChannelSpec{1, 13}, sys, 1, 527);
    ASSERT_TRUE(e.ok());
    if (was_feasible) EXPECT_TRUE(e->feasible);
    was_feasible = e->feasible;
  }
  EXPECT_TRUE(was_feasible);
  was_feasible = false;
  sys.threshold_s = 0.0527 + 1e-3;
  for (int v = 1; v <= 10; ++v) {
    absl::StatusOr<PairEconomics> e =
        ComputePairEconomics(ReferenceMc(527), ChannelSpec{v, 13}, sys, 1, 527);
    ASSERT_TRUE(e.ok());
    if (was_feasible) EXPECT_TRUE(e->feasible);
    was_feasible = e->feasible;
  }
  EXPECT_TRUE(was_feasible);
}

TEST(PairEconomicsTest, BitIdenticalRepeats) {
  const auto a = *ComputePairEconomics(ReferenceMc(77), ChannelSpec{4, 16.3},
                                       SystemParams{}, 3, 900);
  const auto b = *ComputePairEconomics(ReferenceMc(77), ChannelSpec{4, 16.3},
                                       SystemParams{}, 3, 900);
  EXPECT_EQ(a.mc_utility, b.mc_utility);
  EXPECT_EQ(a.miner_utility, b.miner_utility);
  EXPECT_EQ(a.trans_time_s, b.trans_time_s);
}

}  // namespace
}  // namespace medchain
