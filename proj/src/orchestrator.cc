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

#include "medchain/orchestrator.h"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "medchain/error.h"
#include "medchain/rng.h"

namespace medchain {

absl::StatusOr<FederationPlan> FederationPlan::Create(
    std::vector<Participant> participants, const PrivacyParams& privacy,
    const SystemParams& sys, const ModelShape& shape, std::size_t miner_count,
    double total_utility) {
  if (participants.empty()) {
    return MakeError(ErrorKind::kEmptyFederation, "no participants");
  }
  std::sort(participants.begin(), participants.end(),
            [](const Participant& a, const Participant& b) {
              return a.mc.id < b.mc.id;
            });
  FederationPlan plan;
  double total = 0.0;
  for (const auto& p : participants) total += static_cast<double>(p.mc.data_size);
  for (const auto& p : participants) {
    plan.aggregation_weights.push_back(static_cast<double>(p.mc.data_size) /
                                       total);
  }
  plan.participants = std::move(participants);
  plan.privacy = privacy;
  plan.sys = sys;
  plan.shape = shape;
  plan.miner_count = miner_count;
  plan.total_utility = total_utility;
  if (absl::Status s = plan.Validate(); !s.ok()) return s;
  return plan;
}

absl::Status FederationPlan::Validate() const {
  if (participants.empty()) {
    return MakeError(ErrorKind::kEmptyFederation, "no participants");
  }
  if (aggregation_weights.size() != participants.size()) {
    return MakeError(ErrorKind::kWeightSumViolation,
                     "one aggregation weight per participant required");
  }
  double sum = 0.0;
  for (double p : aggregation_weights) {
    if (!(p > 0)) {
      return MakeError(ErrorKind::kWeightSumViolation,
                       "aggregation weights must be positive");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    return MakeError(ErrorKind::kWeightSumViolation,
                     absl::StrCat("aggregation weights sum to ", sum));
  }
  if (miner_count < 1) {
    return MakeError(ErrorKind::kValidationError, "need at least one miner");
  }
  for (const auto& p : participants) {
    if (absl::Status s = p.mc.Validate(); !s.ok()) return s;
    if (p.mc.dataset == nullptr || p.mc.dataset->size() == 0) {
      return MakeError(ErrorKind::kValidationError,
                       absl::StrCat("MC ", p.mc.id.value, " has no dataset"));
    }
    if (p.mc.dataset->dim != shape.input_dim) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrCat("MC ", p.mc.id.value,
                                    " dataset dimension differs from model"));
    }
    if (p.miner.value >= miner_count) {
      return MakeError(ErrorKind::kValidationError,
                       absl::StrCat("MC ", p.mc.id.value,
                                    " is associated with unknown miner ",
                                    p.miner.value));
    }
  }
  if (absl::Status s = sys.Validate(); !s.ok()) return s;
  return privacy.Validate();
}

absl::StatusOr<WeightVector> Aggregate(
    std::span<const WeightedVector> locals) {
  if (locals.empty()) {
    return MakeError(ErrorKind::kEmptyFederation, "nothing to aggregate");
  }
  const std::size_t len = locals.front().weights.size();
  double sum = 0.0;
  for (const auto& l : locals) {
    if (l.weights.size() != len) {
      return MakeError(ErrorKind::kLengthMismatch,
                       absl::StrCat("weight vector of length ",
                                    l.weights.size(), ", expected ", len));
    }
    if (!(l.p > 0)) {
      return MakeError(ErrorKind::kWeightSumViolation,
                       "aggregation weights must be positive");
    }
    sum += l.p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    return MakeError(ErrorKind::kWeightSumViolation,
                     absl::StrCat("aggregation weights sum to ", sum));
  }
  WeightVector out(len, 0.0);
  for (const auto& l : locals) {
    for (std::size_t k = 0; k < len; ++k) out[k] += l.p * l.weights[k];
  }
  return out;
}

absl::StatusOr<double> MeanLoss(std::span<const double> losses) {
  if (losses.empty()) {
    return MakeError(ErrorKind::kEmptyFederation, "no participant losses");
  }
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(losses.size());
}

absl::StatusOr<double> GlobalLoss(std::span<const double> weights,
                                  const FederationPlan& plan) {
  LocalModel model{plan.shape, WeightVector(weights.begin(), weights.end())};
  std::vector<double> losses;
  losses.reserve(plan.participants.size());
  for (const auto& p : plan.participants) {
    losses.push_back(DatasetLoss(model, *p.mc.dataset));
  }
  return MeanLoss(losses);
}

double ObjectiveF(double total_utility, double global_loss,
                  const SystemParams& sys) {
  return sys.rho * total_utility - sys.eta * global_loss;
}

double TotalUtility(const AssociationResult& result,
                    const EconomicsTable& economics) {
  double u = 0.0;
  for (const auto& [mc, miner] : result.indicator) {
    const PairEconomics& e = economics.at(mc, miner);
    u += e.miner_utility + e.mc_utility;
  }
  return u;
}

absl::StatusOr<FederationRun> RunFederation(const FederationPlan& plan,
                                            Chain& chain,
                                            const FederationOptions& options) {
  if (absl::Status s = plan.Validate(); !s.ok()) return s;
  if (chain.size() == 0 || !chain.options().embed_payload) {
    return MakeError(ErrorKind::kValidationError,
                     "federation needs a chain with an embedded genesis model");
  }
  const std::size_t w_len = plan.shape.NumWeights();
  const WeightVector& genesis = chain.blocks().front().payload;
  if (genesis.size() != w_len) {
    return MakeError(ErrorKind::kLengthMismatch,
                     "genesis model does not match the model shape");
  }
  const std::size_t k = plan.participants.size();
  const auto w = static_cast<std::int64_t>(w_len);
  const auto others = static_cast<std::int64_t>(plan.miner_count) - 1;

  // Mining commits in (miner id, MC id) order.
  std::vector<std::size_t> mining_order(k);
  for (std::size_t i = 0; i < k; ++i) mining_order[i] = i;
  std::stable_sort(mining_order.begin(), mining_order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return plan.participants[a].miner <
                            plan.participants[b].miner;
                   });

  FederationRun run;
  WeightVector global = genesis;
  PrivacyParams priv = plan.privacy;
  PlateauScheduler scheduler(priv.learning_rate);

  for (std::int64_t t = 1; t <= plan.sys.global_iters; ++t) {
    const auto start = std::chrono::steady_clock::now();
    RoundRecord rec;
    rec.round = t;
    rec.learning_rate = priv.learning_rate;

    std::vector<WeightVector> locals(k);
    for (std::size_t i = 0; i < k; ++i) {
      const MedicalCenterSpec& mc = plan.participants[i].mc;
      Rng rng = MakeStream(options.seed, StreamTag::kDpNoise, mc.id.value,
                           static_cast<std::uint64_t>(t));
      absl::StatusOr<TrainingResult> trained = LocalTraining(
          LocalModel{plan.shape, global}, *mc.dataset, priv, mc.local_iters,
          rng);
      if (!trained.ok()) return trained.status();
      locals[i] = std::move(trained->model.weights);
      rec.comm.uploaded += static_cast<std::int64_t>(locals[i].size());
    }

    for (std::size_t i : mining_order) {
      const Participant& p = plan.participants[i];
      Rng rng = MakeStream(options.seed, StreamTag::kMining,
                           static_cast<std::uint64_t>(t), p.mc.id.value);
      absl::StatusOr<MineReceipt> mined = chain.MineBlock(
          static_cast<std::uint64_t>(t), p.miner, p.mc.id, locals[i], w_len, rng);
      if (!mined.ok()) return mined.status();
      rec.comm.broadcast += others * w;
    }

    // Every participant downloads the round from the chain and aggregates
    // on-device; all of them arrive at the same W^(t+1).
    std::optional<WeightVector> next;
    for (std::size_t i = 0; i < k; ++i) {
      absl::StatusOr<std::vector<RoundUpload>> fetched =
          chain.FetchRoundWeights(static_cast<std::uint64_t>(t), k);
      if (!fetched.ok()) return fetched.status();
      std::vector<WeightedVector> inputs;
      inputs.reserve(fetched->size());
      for (std::size_t j = 0; j < fetched->size(); ++j) {
        const RoundUpload& up = (*fetched)[j];
        rec.comm.downloaded += static_cast<std::int64_t>(up.weights.size());
        if (up.mc != plan.participants[j].mc.id) {
          return MakeError(ErrorKind::kIncompleteRound,
                           absl::StrCat("unexpected upload from MC ",
                                        up.mc.value, " in round ", t));
        }
        inputs.push_back({up.weights, plan.aggregation_weights[j]});
      }
      absl::StatusOr<WeightVector> agg = Aggregate(inputs);
      if (!agg.ok()) return agg.status();
      if (!next.has_value()) next = *std::move(agg);
    }
    global = *std::move(next);

    absl::StatusOr<double> j = GlobalLoss(global, plan);
    if (!j.ok()) return j.status();
    rec.global_weights = global;
    rec.global_loss = *j;
    rec.total_utility = plan.total_utility;
    rec.objective = ObjectiveF(plan.total_utility, *j, plan.sys);
    if (options.test_set != nullptr) {
      const LocalModel model{plan.shape, global};
      rec.test_loss = DatasetLoss(model, *options.test_set);
      rec.test_accuracy = Accuracy(model, *options.test_set);
    }
    if (options.lr_plateau) priv.learning_rate = scheduler.Step(*j);
    if (options.keep_local_weights) run.local_weights.push_back(locals);

    run.comm.uploaded += rec.comm.uploaded;
    run.comm.downloaded += rec.comm.downloaded;
    run.comm.broadcast += rec.comm.broadcast;
    rec.wall_time_s = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    run.records.push_back(std::move(rec));
  }
  run.final_weights = std::move(global);
  return run;
}

}  // namespace medchain
