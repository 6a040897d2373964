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

// medchain: command-line experiment runner.
//
//   medchain run --config exp.json [--seed N] [--out m.csv] [--format csv]
//   medchain sweep --config exp.json --out sweep.csv [--sigmas 0,0.25,1]
//   medchain audit-chain --chain chain.jsonl
//   medchain stability-check --config exp.json [--seed N]
//
// Exit status: 0 success, 2 invalid input, 3 infeasible instance,
// 1 anything else (I/O, failed audit of a stability check).

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "medchain/chain_io.h"
#include "medchain/config.h"
#include "medchain/error.h"
#include "medchain/experiment.h"
#include "medchain/matching.h"
#include "medchain/metrics.h"
#include "medchain/population.h"

namespace medchain {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;

int ExitCodeFor(const absl::Status& status) {
  switch (GetErrorKind(status).value_or(ErrorKind::kIoError)) {
    case ErrorKind::kParseError:
    case ErrorKind::kValidationError:
    case ErrorKind::kInvalidBudget:
      return kExitInvalid;
    case ErrorKind::kNoFeasiblePairs:
    case ErrorKind::kEmptyFederation:
      return kExitInfeasible;
    default:
      return kExitFailure;
  }
}

int Report(const absl::Status& status) {
  std::cerr << "medchain: " << status.message() << "\n";
  return ExitCodeFor(status);
}

absl::StatusOr<ExperimentConfig> LoadWithSeed(
    const std::string& path, const std::optional<std::uint64_t>& seed) {
  absl::StatusOr<ExperimentConfig> cfg = LoadConfig(path);
  if (cfg.ok() && seed.has_value()) cfg->seed = *seed;
  return cfg;
}

absl::Status Emit(std::span<const MetricsRow> rows, MetricsFormat format,
                  const std::string& out) {
  if (out.empty() || out == "-") {
    WriteMetrics(rows, format, std::cout);
    std::cout.flush();
    return absl::OkStatus();
  }
  return ExportMetrics(rows, format, out);
}

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

void AddCommon(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config (JSON)")
      ->required();
  cmd->add_option("--seed", flags.seed, "Override the config seed");
  cmd->add_option("--out", flags.out, "Metrics output path (default stdout)");
  cmd->add_option("--format", flags.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl", "json-lines"}));
}

int RunCommand(const CommonFlags& flags, const std::string& chain_out,
               bool wall_time) {
  absl::StatusOr<ExperimentConfig> cfg = LoadWithSeed(flags.config, flags.seed);
  if (!cfg.ok()) return Report(cfg.status());
  absl::StatusOr<MetricsFormat> format = ParseMetricsFormat(flags.format);
  if (!format.ok()) return Report(format.status());

  absl::StatusOr<ExperimentResult> result =
      RunExperiment(*cfg, ExperimentOptions{.record_wall_time = wall_time});
  if (!result.ok()) return Report(result.status());
  if (absl::Status s = Emit(result->rows, *format, flags.out); !s.ok()) {
    return Report(s);
  }
  if (!chain_out.empty()) {
    if (absl::Status s = ExportChain(*result->chain, chain_out); !s.ok()) {
      return Report(s);
    }
  }
  std::cerr << "participants=" << result->association.participants.size()
            << " U=" << FormatDouble(result->pairwise_utility)
            << " final_F=" << FormatDouble(result->FinalObjective())
            << " blocks=" << result->chain->size() << "\n";
  return kExitOk;
}

struct SweepFlags {
  std::vector<double> sigmas{0.0, 0.25, 0.6, 1.0};
  std::vector<double> clips{1.0, 4.0, 8.0};
  std::vector<std::string> modes;
  std::vector<std::uint64_t> seeds;
};

int SweepCommand(const CommonFlags& flags, const SweepFlags& sweep) {
  absl::StatusOr<ExperimentConfig> cfg = LoadWithSeed(flags.config, flags.seed);
  if (!cfg.ok()) return Report(cfg.status());
  absl::StatusOr<MetricsFormat> format = ParseMetricsFormat(flags.format);
  if (!format.ok()) return Report(format.status());

  SweepGrid grid;
  grid.noise_scales = sweep.sigmas;
  grid.clip_bounds = sweep.clips;
  grid.seeds = sweep.seeds;
  for (const std::string& m : sweep.modes) {
    grid.modes.push_back(m == "mma" ? AssociationMode::kMma
                                    : AssociationMode::kRandom);
  }
  std::vector<MetricsRow> rows;
  for (const ExperimentConfig& point : ExpandSweep(*cfg, grid)) {
    absl::StatusOr<ExperimentResult> result = RunExperiment(point);
    if (!result.ok()) {
      std::cerr << "medchain: experiment " << point.label << " failed\n";
      return Report(result.status());
    }
    std::cerr << point.label
              << " final_F=" << FormatDouble(result->FinalObjective()) << "\n";
    rows.insert(rows.end(), result->rows.begin(), result->rows.end());
  }
  if (absl::Status s = Emit(rows, *format, flags.out); !s.ok()) return Report(s);
  return kExitOk;
}

int AuditCommand(const std::string& path) {
  absl::StatusOr<Chain> chain = ImportChain(path);
  if (!chain.ok()) return Report(chain.status());
  const bool ok = chain->Verify();
  std::cout << "blocks=" << chain->size() << " tip=" << ToHex(chain->TipHash())
            << " verified=" << (ok ? "true" : "false") << "\n";
  return ok ? kExitOk : kExitFailure;
}

int StabilityCommand(const CommonFlags& flags) {
  absl::StatusOr<ExperimentConfig> cfg = LoadWithSeed(flags.config, flags.seed);
  if (!cfg.ok()) return Report(cfg.status());
  const Population pop = SamplePopulation(*cfg);
  absl::StatusOr<PreferenceTables> prefs = BuildPreferences(
      pop.mcs, pop.miners, pop.channels, cfg->sys,
      PreferenceOptions{.orientation = cfg->orientation,
                        .assoc_count = cfg->assoc_count});
  if (!prefs.ok()) return Report(prefs.status());
  MmaOptions options;
  if (cfg->miner_capacity.has_value()) {
    options.miner_capacity = *cfg->miner_capacity;
  }
  const MmaRun run = RunMma(*prefs, options);
  const std::vector<BlockingPair> blocking =
      FindBlockingPairs(run.result, prefs->economics);
  std::cout << "participants=" << run.result.participants.size()
            << " rounds=" << run.counters.rounds
            << " proposals=" << run.counters.proposals
            << " distinct_proposals=" << run.counters.distinct_proposals
            << " comparisons=" << run.counters.comparisons
            << " blocking_pairs=" << blocking.size() << "\n";
  for (const BlockingPair& b : blocking) {
    std::cout << "  mc=" << prefs->mc_ids[b.mc].value
              << " miner=" << prefs->miner_ids[b.miner].value << "\n";
  }
  return blocking.empty() ? kExitOk : kExitFailure;
}

}  // namespace
}  // namespace medchain

int main(int argc, char** argv) {
  using namespace medchain;
  CLI::App app{"Federated learning over a permissioned chain"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string chain_out;
  bool wall_time = false;
  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  AddCommon(run, run_flags);
  run->add_option("--chain-out", chain_out, "Write the chain audit file");
  run->add_flag("--wall-time", wall_time, "Record per-round wall time");

  CommonFlags sweep_flags;
  SweepFlags sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run a grid of experiments");
  AddCommon(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--sigmas", sweep.sigmas, "Noise scales")
      ->delimiter(',');
  sweep_cmd->add_option("--clips", sweep.clips, "Clip bounds")
      ->delimiter(',');
  sweep_cmd->add_option("--modes", sweep.modes, "mma and/or random")
      ->delimiter(',')
      ->check(CLI::IsMember({"mma", "random"}));
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds")->delimiter(',');

  std::string chain_path;
  CLI::App* audit =
      app.add_subcommand("audit-chain", "Verify an exported chain");
  audit->add_option("--chain", chain_path, "Chain audit file")->required();

  CommonFlags stab_flags;
  CLI::App* stab = app.add_subcommand(
      "stability-check", "Run the association and list blocking pairs");
  AddCommon(stab, stab_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) return RunCommand(run_flags, chain_out, wall_time);
  if (sweep_cmd->parsed()) return SweepCommand(sweep_flags, sweep);
  if (audit->parsed()) return AuditCommand(chain_path);
  return StabilityCommand(stab_flags);
}
