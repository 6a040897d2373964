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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "medchain/config.h"
#include "medchain/error.h"
#include "medchain/experiment.h"
#include "medchain/metrics.h"
#include "medchain/population.h"

namespace medchain {
namespace {

ExperimentConfig SmallConfig(std::uint64_t seed) {
  ExperimentConfig cfg = *ParseConfig(
      R"({"seed": 1, "population": {"num_mcs": 6, "num_miners": 2},
          "system": {"global_iters": 3},
          "dataset": {"feature_dim": 5, "test_samples": 40},
          "ledger": {"difficulty": 4}})");
  cfg.seed = seed;
  return cfg;
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ConfigTest, MinimalConfigFillsDefaults) {
  const ExperimentConfig cfg = *ParseConfig(
      R"({"seed": 3, "population": {"num_mcs": 10, "num_miners": 5}})");
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.num_mcs, 10);
  EXPECT_EQ(cfg.num_miners, 5);
  EXPECT_EQ(cfg.sys.kappa, 1e-28);
  EXPECT_EQ(cfg.sys.prb_bandwidth_hz, 20e6);
  EXPECT_EQ(cfg.sys.model_bits, 3776.0);
  EXPECT_EQ(cfg.sys.mining_reward, 10.0);
  EXPECT_EQ(cfg.sys.phi, 1.0);
  EXPECT_EQ(cfg.sys.threshold_s, 1440.0);
  EXPECT_EQ(cfg.privacy.batch_size, 32);
  EXPECT_EQ(cfg.privacy.learning_rate, 0.01);
  EXPECT_EQ(cfg.sys.rho, 0.5);
  EXPECT_EQ(cfg.sys.eta, 0.5);
  EXPECT_EQ(cfg.sys.global_iters, 15);
  EXPECT_EQ(cfg.local_iters, 10);
  EXPECT_EQ(cfg.SamplesPerMc(), 527);
  EXPECT_EQ(cfg.model.input_dim, 20u);
}

TEST(ConfigTest, WeightsMustSumToOne) {
  const absl::StatusOr<ExperimentConfig> cfg =
      ParseConfig(R"({"seed": 1, "system": {"rho": 0.7, "eta": 0.5}})");
  EXPECT_TRUE(HasErrorKind(cfg.status(), ErrorKind::kValidationError));
  EXPECT_NE(cfg.status().message().find("rho + eta"), absl::string_view::npos);
}

TEST(ConfigTest, MissingSeed) {
  EXPECT_TRUE(HasErrorKind(ParseConfig(R"({"population": {"num_mcs": 4}})").status(),
                           ErrorKind::kValidationError));
}

TEST(ConfigTest, ParseErrorsCarryLineOrField) {
  const absl::Status bad_json = ParseConfig("{\n\"seed\": 1,\n}").status();
  EXPECT_TRUE(HasErrorKind(bad_json, ErrorKind::kParseError));
  EXPECT_NE(bad_json.message().find("line 3"), absl::string_view::npos) << bad_json;
  const absl::Status bad_type =
      ParseConfig(R"({"seed": 1, "population": {"num_mcs": "ten"}})").status();
  EXPECT_TRUE(HasErrorKind(bad_type, ErrorKind::kParseError));
  EXPECT_NE(bad_type.message().find("population.num_mcs"), absl::string_view::npos);
}

TEST(ConfigTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_TRUE(HasErrorKind(ParseConfig(R"({"seed": 1, "sead": 2})").status(),
                           ErrorKind::kValidationError));
  EXPECT_TRUE(HasErrorKind(
      ParseConfig(R"({"seed": 1, "ranges": {"sinr_db": [20, 13]}})").status(),
      ErrorKind::kValidationError));
  EXPECT_TRUE(HasErrorKind(
      ParseConfig(R"({"seed": 1, "population": {"num_miners": 0}})").status(),
      ErrorKind::kValidationError));
  EXPECT_TRUE(HasErrorKind(
      ParseConfig(R"({"seed": 1, "association": {"mode": "greedy"}})").status(),
      ErrorKind::kValidationError));
  EXPECT_TRUE(HasErrorKind(ParseConfig(R"({"seed": -4})").status(),
                           ErrorKind::kParseError));
}

TEST(ConfigTest, EpsilonDerivesSigma) {
  const ExperimentConfig cfg =
      *ParseConfig(R"({"seed": 1, "privacy": {"epsilon": 2.0}})");
  EXPECT_NEAR(cfg.privacy.noise_scale, 2.422402631302695, 1e-12);
  EXPECT_TRUE(HasErrorKind(
      ParseConfig(R"({"seed": 1, "privacy": {"epsilon": 2.0, "noise_scale": 0.25}})")
          .status(),
      ErrorKind::kValidationError));
  EXPECT_TRUE(HasErrorKind(
      ParseConfig(R"({"seed": 1, "privacy": {"epsilon": -1}})").status(),
      ErrorKind::kValidationError));
}

TEST(ConfigTest, CanonicalJsonRoundTrips) {
  const ExperimentConfig cfg = *ParseConfig(
      R"({"seed": 9, "label": "x", "association": {"mode": "random",
          "miner_capacity": 4}, "ranges": {"tx_power_unit": "dBm"},
          "model": {"architecture": "two_layer_mlp", "hidden": 8}})");
  const ExperimentConfig back = *ParseConfig(ConfigToJson(cfg));
  EXPECT_EQ(ConfigToJson(back), ConfigToJson(cfg));
  EXPECT_EQ(ConfigDigest(back), ConfigDigest(cfg));
  EXPECT_EQ(ConfigDigest(cfg).size(), 16u);
  ExperimentConfig other = cfg;
  other.seed = 10;
  EXPECT_NE(ConfigDigest(other), ConfigDigest(cfg));
}

TEST(ConfigTest, LoadConfigFromFile) {
  const std::string path = TempPath("medchain_cfg_test.json");
  {
    std::ofstream out(path);
    out << R"({"seed": 5})";
  }
  EXPECT_EQ(LoadConfig(path)->seed, 5u);
  std::remove(path.c_str());
  EXPECT_TRUE(HasErrorKind(LoadConfig(path).status(), ErrorKind::kIoError));
}

TEST(PopulationTest, DeterministicPerSeed) {
  const ExperimentConfig cfg = SmallConfig(4);
  const Population a = SamplePopulation(cfg);
  const Population b = SamplePopulation(cfg);
  for (std::size_t i = 0; i < a.mcs.size(); ++i) {
    EXPECT_EQ(a.mcs[i].cpu_rate_hz, b.mcs[i].cpu_rate_hz);
    EXPECT_EQ(a.mcs[i].tx_power_w, b.mcs[i].tx_power_w);
    EXPECT_EQ(a.mcs[i].dataset->features, b.mcs[i].dataset->features);
  }
  for (std::size_t i = 0; i < a.channels.cells.size(); ++i) {
    EXPECT_EQ(a.channels.cells[i].sinr_db, b.channels.cells[i].sinr_db);
  }
}

TEST(PopulationTest, DrawsWithinRanges) {
  ExperimentConfig cfg = SmallConfig(5);
  cfg.num_mcs = 200;
  cfg.samples_per_mc = 3;
  const Population pop = SamplePopulation(cfg);
  for (const MedicalCenterSpec& mc : pop.mcs) {
    EXPECT_GE(mc.cycles_per_sample, 1e4);
    EXPECT_LE(mc.cycles_per_sample, 3e4);
    EXPECT_GE(mc.cpu_rate_hz, 1e9);
    EXPECT_LE(mc.cpu_rate_hz, 2.6e9);
    EXPECT_GE(mc.tx_power_w, PowerDbToWatts(1, PowerUnit::kDbW) * (1 - 1e-12));
    EXPECT_LE(mc.tx_power_w, PowerDbToWatts(10, PowerUnit::kDbW) * (1 + 1e-12));
    EXPECT_EQ(mc.dataset->size(), 3u);
    EXPECT_TRUE(mc.Validate().ok());
  }
  for (const ChannelSpec& c : pop.channels.cells) {
    EXPECT_GE(c.prb_count, 1);
    EXPECT_LE(c.prb_count, 10);
    EXPECT_GE(c.sinr_db, 13.0);
    EXPECT_LE(c.sinr_db, 20.0);
  }
}

TEST(PopulationTest, DegenerateRanges) {
  ExperimentConfig cfg = SmallConfig(6);
  cfg.cycles_per_sample = {2e4, 2e4};
  cfg.cpu_rate_ghz = {1.5, 1.5};
  cfg.prb_count = {4, 4};
  cfg.sinr_db = {15, 15};
  const Population pop = SamplePopulation(cfg);
  for (const MedicalCenterSpec& mc : pop.mcs) {
    EXPECT_EQ(mc.cycles_per_sample, 2e4);
    EXPECT_EQ(mc.cpu_rate_hz, 1.5e9);
  }
  for (const ChannelSpec& c : pop.channels.cells) {
    EXPECT_EQ(c.prb_count, 4);
    EXPECT_EQ(c.sinr_db, 15.0);
  }
}

MetricsRow SampleRow(std::int64_t round) {
  MetricsRow r;
  r.experiment = "sigma=0.25;A=8,\"quoted\"";
  r.config_digest = "0123456789abcdef";
  r.seed = 18446744073709551615ull;
  r.association_mode = "mma";
  r.num_participants = 3;
  r.miner_loads = {2, 1, 0};
  r.round = round;
  r.global_loss = 0.1 + 0.2;
  r.total_utility = 1.0 / 3.0;
  r.objective = -2.5e-310;
  r.test_loss = round % 2 ? std::optional<double>(0.7) : std::nullopt;
  r.test_accuracy = 0.875;
  r.uploaded = 30;
  r.downloaded = 90;
  r.broadcast = 60;
  r.learning_rate = 0.003;
  r.wall_time_s = 0.0;
  return r;
}

TEST(MetricsTest, EmptyRunWritesHeaderOnly) {
  std::stringstream out;
  WriteCsv({}, out);
  EXPECT_EQ(out.str(),
            "schema_version,experiment,config_digest,seed,association_mode,"
            "num_participants,miner_loads,round,global_loss,total_utility,"
            "objective,test_loss,test_accuracy,uploaded,downloaded,broadcast,"
            "learning_rate,wall_time_s\n");
}

TEST(MetricsTest, SeventeenDigits) {
  EXPECT_EQ(FormatDouble(0.1), "0.10000000000000001");
  EXPECT_EQ(FormatDouble(1.0), "1");
  std::stringstream out;
  const std::vector<MetricsRow> rows = {SampleRow(1)};
  WriteCsv(rows, out);
  EXPECT_NE(out.str().find("0.30000000000000004"), std::string::npos);
  EXPECT_NE(out.str().find(",2;1;0,"), std::string::npos);
  EXPECT_NE(out.str().find("\"sigma=0.25;A=8,\"\"quoted\"\"\""), std::string::npos);
}

TEST(MetricsTest, JsonLinesRoundTrip) {
  const std::vector<MetricsRow> rows = {SampleRow(1), SampleRow(2), SampleRow(3)};
  std::stringstream out;
  WriteJsonLines(rows, out);
  std::stringstream in(out.str());
  const std::vector<MetricsRow> back = *ReadJsonLines(in);
  EXPECT_EQ(back, rows);
  std::stringstream again;
  WriteJsonLines(back, again);
  EXPECT_EQ(again.str(), out.str());
}

TEST(MetricsTest, ReadErrorsAndFormats) {
  std::stringstream bad("{\"schema_version\":1}\n");
  EXPECT_TRUE(HasErrorKind(ReadJsonLines(bad).status(), ErrorKind::kParseError));
  EXPECT_EQ(*ParseMetricsFormat("csv"), MetricsFormat::kCsv);
  EXPECT_EQ(*ParseMetricsFormat("jsonl"), MetricsFormat::kJsonLines);
  EXPECT_FALSE(ParseMetricsFormat("xml").ok());
  EXPECT_TRUE(HasErrorKind(
      ExportMetrics({}, MetricsFormat::kCsv, "/nonexistent/dir/m.csv"),
      ErrorKind::kIoError));
}

TEST(ExperimentTest, RowsAreOrderedAndConsistent) {
  const ExperimentConfig cfg = SmallConfig(7);
  const ExperimentResult r = *RunExperiment(cfg);
  ASSERT_EQ(r.rows.size(), 3u);
  const std::size_t k = r.association.participants.size();
  const auto w = static_cast<std::int64_t>(cfg.model.NumWeights());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const MetricsRow& row = r.rows[i];
    EXPECT_EQ(row.round, static_cast<std::int64_t>(i + 1));
    EXPECT_EQ(row.schema_version, kMetricsSchemaVersion);
    EXPECT_EQ(row.config_digest, ConfigDigest(cfg));
    EXPECT_EQ(row.objective,
              cfg.sys.rho * row.total_utility - cfg.sys.eta * row.global_loss);
    EXPECT_EQ(row.num_participants, static_cast<std::int64_t>(k));
    const auto kk = static_cast<std::int64_t>(k);
    EXPECT_EQ(row.uploaded + row.downloaded + row.broadcast,
              kk * (kk + 1) * w + kk * (cfg.num_miners - 1) * w);
    EXPECT_EQ(row.wall_time_s, 0.0);
  }
  EXPECT_TRUE(r.chain->Verify());
  EXPECT_EQ(r.chain->size(), 1 + 3 * k);
  EXPECT_EQ(r.rows[0].total_utility, r.pairwise_utility);
}

TEST(ExperimentTest, RandomModeRespectsCandidates) {
  ExperimentConfig cfg = SmallConfig(8);
  cfg.association_mode = AssociationMode::kRandom;
  const ExperimentResult r = *RunExperiment(cfg);
  EXPECT_FALSE(r.mma_counters.has_value());
  EXPECT_EQ(r.rows[0].association_mode, "random");
  EXPECT_GT(r.association.participants.size(), 0u);
}

TEST(ExperimentTest, RealizedAccountingChangesOnlyUtility) {
  ExperimentConfig cfg = SmallConfig(9);
  const ExperimentResult pairwise = *RunExperiment(cfg);
  cfg.utility_accounting = UtilityAccounting::kRealized;
  const ExperimentResult realized = *RunExperiment(cfg);
  EXPECT_EQ(realized.rows[0].total_utility, pairwise.realized_utility);
  for (std::size_t i = 0; i < pairwise.rows.size(); ++i) {
    EXPECT_EQ(realized.rows[i].global_loss, pairwise.rows[i].global_loss);
  }
}

TEST(ExperimentTest, InfeasibleInstance) {
  ExperimentConfig cfg = SmallConfig(10);
  cfg.sys.threshold_s = 1e-6;
  EXPECT_TRUE(HasErrorKind(RunExperiment(cfg).status(),
                           ErrorKind::kNoFeasiblePairs));
}

TEST(ExperimentTest, ByteIdenticalFiles) {
  const ExperimentConfig cfg = SmallConfig(11);
  for (MetricsFormat f : {MetricsFormat::kCsv, MetricsFormat::kJsonLines}) {
    const std::string p1 = TempPath("medchain_det_1.out");
    const std::string p2 = TempPath("medchain_det_2.out");
    ASSERT_TRUE(ExportMetrics(RunExperiment(cfg)->rows, f, p1).ok());
    ASSERT_TRUE(ExportMetrics(RunExperiment(cfg)->rows, f, p2).ok());
    const std::string a = Slurp(p1);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, Slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
  }
}

TEST(SweepTest, ExpandsGridInOrder) {
  ExperimentConfig base = SmallConfig(1);
  base.privacy.epsilon = 2.0;
  SweepGrid grid;
  grid.noise_scales = {0.0, 1.0};
  grid.clip_bounds = {1.0, 8.0};
  grid.seeds = {3, 4};
  const std::vector<ExperimentConfig> cfgs = ExpandSweep(base, grid);
  ASSERT_EQ(cfgs.size(), 8u);
  EXPECT_EQ(cfgs[0].label, "sigma=0;A=1;mode=mma;seed=3");
  EXPECT_EQ(cfgs[1].label, "sigma=1;A=1;mode=mma;seed=3");
  EXPECT_EQ(cfgs[7].seed, 4u);
  EXPECT_EQ(cfgs[7].privacy.clip_bound, 8.0);
  EXPECT_FALSE(cfgs[0].privacy.epsilon.has_value());
  for (const auto& c : cfgs) EXPECT_TRUE(c.Validate().ok());
}

}  // namespace
}  // namespace medchain
