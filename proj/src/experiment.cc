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

#include "medchain/experiment.h"

#include <map>

#include "absl/strings/str_cat.h"
#include "medchain/error.h"
#include "medchain/metrics.h"
#include "medchain/population.h"
#include "medchain/rng.h"

namespace medchain {

double ExperimentResult::FinalObjective() const {
  return rows.empty() ? 0.0 : rows.back().objective;
}

absl::StatusOr<double> RealizedUtility(const AssociationResult& result,
                                       std::span<const MedicalCenterSpec> mcs,
                                       const ChannelTable& channels,
                                       const SystemParams& sys) {
  double total_data = 0.0;
  for (const MedicalCenterSpec& mc : mcs) {
    total_data += static_cast<double>(mc.data_size);
  }
  const std::vector<std::size_t> loads = result.MinerLoads();
  double u = 0.0;
  for (const auto& [n, s] : result.indicator) {
    absl::StatusOr<PairEconomics> e = ComputePairEconomics(
        mcs[n], channels.at(n, s), sys, static_cast<std::int64_t>(loads[s]),
        total_data);
    if (!e.ok()) return e.status();
    u += e->miner_utility + e->mc_utility;
  }
  return u;
}

absl::StatusOr<ExperimentResult> RunExperiment(
    const ExperimentConfig& cfg, const ExperimentOptions& options) {
  if (absl::Status s = cfg.Validate(); !s.ok()) return s;
  ExperimentResult out;
  out.config = cfg;
  out.config_digest = ConfigDigest(cfg);

  Population pop = SamplePopulation(cfg);
  absl::StatusOr<PreferenceTables> prefs = BuildPreferences(
      pop.mcs, pop.miners, pop.channels, cfg.sys,
      PreferenceOptions{.orientation = cfg.orientation,
                        .assoc_count = cfg.assoc_count});
  if (!prefs.ok()) return prefs.status();

  if (cfg.association_mode == AssociationMode::kMma) {
    MmaOptions mma;
    if (cfg.miner_capacity.has_value()) mma.miner_capacity = *cfg.miner_capacity;
    MmaRun run = RunMma(*prefs, mma);
    out.association = std::move(run.result);
    out.mma_counters = run.counters;
  } else {
    Rng rng = MakeStream(cfg.seed, StreamTag::kAssociation);
    out.association = RandomAssociation(*prefs, rng);
  }
  if (out.association.participants.empty()) {
    return MakeError(ErrorKind::kNoFeasiblePairs,
                     "association left every MC unassociated");
  }

  out.pairwise_utility = TotalUtility(out.association, prefs->economics);
  absl::StatusOr<double> realized =
      RealizedUtility(out.association, pop.mcs, pop.channels, cfg.sys);
  if (!realized.ok()) return realized.status();
  out.realized_utility = *realized;
  const double u = cfg.utility_accounting == UtilityAccounting::kPairwise
                       ? out.pairwise_utility
                       : out.realized_utility;

  std::vector<Participant> participants;
  for (const auto& [n, s] : out.association.indicator) {
    participants.push_back(Participant{pop.mcs[n], pop.miners[s]});
  }
  absl::StatusOr<FederationPlan> plan = FederationPlan::Create(
      std::move(participants), cfg.privacy, cfg.sys, cfg.model,
      pop.miners.size(), u);
  if (!plan.ok()) return plan.status();

  Rng init_rng = MakeStream(cfg.seed, StreamTag::kInitWeights);
  LocalModel init = InitModel(cfg.model, init_rng);
  Chain chain = Chain::Init(
      init.weights, ChainOptions{.difficulty = cfg.difficulty,
                                 .miner_count = pop.miners.size(),
                                 .block_reward = cfg.sys.mining_reward});

  FederationOptions fed{.seed = cfg.seed, .lr_plateau = cfg.lr_plateau};
  if (pop.test_set.size() > 0) fed.test_set = &pop.test_set;
  absl::StatusOr<FederationRun> run = RunFederation(*plan, chain, fed);
  if (!run.ok()) return run.status();
  out.run = *std::move(run);
  out.chain = std::move(chain);

  std::vector<std::int64_t> loads;
  for (std::size_t l : out.association.MinerLoads()) {
    loads.push_back(static_cast<std::int64_t>(l));
  }
  for (const RoundRecord& rec : out.run.records) {
    MetricsRow row;
    row.experiment = cfg.label;
    row.config_digest = out.config_digest;
    row.seed = cfg.seed;
    row.association_mode = std::string(AssociationModeName(cfg.association_mode));
    row.num_participants =
        static_cast<std::int64_t>(out.association.participants.size());
    row.miner_loads = loads;
    row.round = rec.round;
    row.global_loss = rec.global_loss;
    row.total_utility = rec.total_utility;
    row.objective = rec.objective;
    row.test_loss = rec.test_loss;
    row.test_accuracy = rec.test_accuracy;
    row.uploaded = rec.comm.uploaded;
    row.downloaded = rec.comm.downloaded;
    row.broadcast = rec.comm.broadcast;
    row.learning_rate = rec.learning_rate;
    row.wall_time_s = options.record_wall_time ? rec.wall_time_s : 0.0;
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<ExperimentConfig> ExpandSweep(const ExperimentConfig& base,
                                          const SweepGrid& grid) {
  auto or_base = [](const auto& axis, auto value) {
    using T = decltype(value);
    return axis.empty() ? std::vector<T>{value}
                        : std::vector<T>(axis.begin(), axis.end());
  };
  const auto seeds = or_base(grid.seeds, base.seed);
  const auto modes = or_base(grid.modes, base.association_mode);
  const auto clips = or_base(grid.clip_bounds, base.privacy.clip_bound);
  const auto sigmas = or_base(grid.noise_scales, base.privacy.noise_scale);

  std::vector<ExperimentConfig> out;
  for (std::uint64_t seed : seeds) {
    for (AssociationMode mode : modes) {
      for (double clip : clips) {
        for (double sigma : sigmas) {
          ExperimentConfig cfg = base;
          cfg.seed = seed;
          cfg.association_mode = mode;
          cfg.privacy.clip_bound = clip;
          if (!grid.noise_scales.empty()) cfg.privacy.epsilon.reset();
          cfg.privacy.noise_scale = sigma;
          cfg.label = absl::StrCat(
              base.label.empty() ? "" : absl::StrCat(base.label, ";"),
              "sigma=", sigma, ";A=", clip,
              ";mode=", Sv(AssociationModeName(mode)), ";seed=", seed);
          out.push_back(std::move(cfg));
        }
      }
    }
  }
  return out;
}

}  // namespace medchain
