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

#include "medchain/matching.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "absl/strings/str_cat.h"
#include "medchain/error.h"

namespace medchain {
namespace {

constexpr std::size_t kNoRank = std::numeric_limits<std::size_t>::max();

// Sorts `items` by utility, highest first, ties by ascending id.
template <typename Id>
void SortByUtility(std::vector<std::size_t>& items,
                   const std::vector<double>& utility,
                   const std::vector<Id>& ids) {
  std::sort(items.begin(), items.end(), [&](std::size_t a, std::size_t b) {
    if (utility[a] != utility[b]) return utility[a] > utility[b];
    return ids[a] < ids[b];
  });
}

AssociationResult EmptyResult(const PreferenceTables& prefs) {
  AssociationResult r;
  r.mc_ids = prefs.mc_ids;
  r.miner_ids = prefs.miner_ids;
  r.assignment.assign(prefs.num_mcs(), std::nullopt);
  return r;
}

void FinalizeResult(AssociationResult& r) {
  r.indicator.clear();
  r.participants.clear();
  for (std::size_t n = 0; n < r.assignment.size(); ++n) {
    if (r.assignment[n].has_value()) {
      r.indicator.emplace_back(n, *r.assignment[n]);
      r.participants.push_back(n);
    }
  }
}

}  // namespace

bool PreferenceTables::IsCandidatePair(std::size_t mc,
                                       std::size_t miner) const {
  const PairEconomics& e = economics.at(mc, miner);
  return e.feasible && e.miner_utility > 0;
}

absl::StatusOr<PreferenceTables> BuildPreferences(
    std::span<const MedicalCenterSpec> mcs, std::span<const MinerId> miners,
    const ChannelTable& channels, const SystemParams& sys,
    const PreferenceOptions& options) {
  if (mcs.empty() || miners.empty()) {
    return MakeError(ErrorKind::kNoFeasiblePairs,
                     "need at least one MC and one miner");
  }
  if (channels.num_mcs != mcs.size() || channels.num_miners != miners.size()) {
    return MakeError(ErrorKind::kValidationError,
                     "channel table shape does not match population");
  }
  if (absl::Status s = sys.Validate(); !s.ok()) return s;
  double total_data = 0.0;
  for (const auto& mc : mcs) {
    if (absl::Status s = mc.Validate(); !s.ok()) return s;
    total_data += static_cast<double>(mc.data_size);
  }
  EconomicsTable econ(mcs.size(), miners.size());
  for (std::size_t n = 0; n < mcs.size(); ++n) {
    for (std::size_t s = 0; s < miners.size(); ++s) {
      const ChannelSpec& chan = channels.at(n, s);
      if (absl::Status st = chan.Validate(); !st.ok()) return st;
      absl::StatusOr<PairEconomics> e = ComputePairEconomics(
          mcs[n], chan, sys, options.assoc_count, total_data);
      if (!e.ok()) return e.status();
      econ.at(n, s) = *e;
    }
  }
  std::vector<McId> mc_ids;
  for (const auto& mc : mcs) mc_ids.push_back(mc.id);
  return BuildPreferencesFromEconomics(
      std::move(mc_ids), std::vector<MinerId>(miners.begin(), miners.end()),
      std::move(econ), options.orientation);
}

absl::StatusOr<PreferenceTables> BuildPreferencesFromEconomics(
    std::vector<McId> mc_ids, std::vector<MinerId> miner_ids,
    EconomicsTable economics, Orientation orientation) {
  const std::size_t n_mc = mc_ids.size();
  const std::size_t n_miner = miner_ids.size();
  if (economics.num_mcs != n_mc || economics.num_miners != n_miner) {
    return MakeError(ErrorKind::kValidationError,
                     "economics table shape does not match ids");
  }
  PreferenceTables t;
  t.mc_ids = std::move(mc_ids);
  t.miner_ids = std::move(miner_ids);
  t.economics = std::move(economics);
  t.mc_candidates.resize(n_mc);
  t.miner_candidates.resize(n_miner);
  t.mc_prefs.resize(n_mc);
  t.miner_prefs.resize(n_miner);
  t.mc_utility_lists.resize(n_mc);
  t.miner_utility_lists.resize(n_miner);

  const bool self = orientation == Orientation::kSelfUtility;
  bool any = false;
  for (std::size_t n = 0; n < n_mc; ++n) {
    std::vector<double> key(n_miner, 0.0);
    for (std::size_t s = 0; s < n_miner; ++s) {
      const PairEconomics& e = t.economics.at(n, s);
      if (e.miner_utility > 0) t.mc_candidates[n].push_back(s);
      if (t.IsCandidatePair(n, s)) t.mc_prefs[n].push_back(s);
      key[s] = self ? e.mc_utility : e.miner_utility;
    }
    SortByUtility(t.mc_prefs[n], key, t.miner_ids);
    for (std::size_t s : t.mc_prefs[n]) t.mc_utility_lists[n].push_back(key[s]);
    any = any || !t.mc_prefs[n].empty();
  }
  for (std::size_t s = 0; s < n_miner; ++s) {
    std::vector<double> key(n_mc, 0.0);
    for (std::size_t n = 0; n < n_mc; ++n) {
      const PairEconomics& e = t.economics.at(n, s);
      if (e.feasible) t.miner_candidates[s].push_back(n);
      if (t.IsCandidatePair(n, s)) t.miner_prefs[s].push_back(n);
      key[n] = self ? e.miner_utility : e.mc_utility;
    }
    SortByUtility(t.miner_prefs[s], key, t.mc_ids);
    for (std::size_t n : t.miner_prefs[s]) {
      t.miner_utility_lists[s].push_back(key[n]);
    }
  }
  if (!any) {
    return MakeError(ErrorKind::kNoFeasiblePairs,
                     "no MC-miner pair meets the deadline with positive "
                     "miner utility");
  }
  return t;
}

std::vector<std::size_t> AssociationResult::MinerLoads() const {
  std::vector<std::size_t> loads(miner_ids.size(), 0);
  for (const auto& [mc, miner] : indicator) ++loads[miner];
  return loads;
}

MmaRun RunMma(const PreferenceTables& prefs, const MmaOptions& options) {
  const std::size_t n_mc = prefs.num_mcs();
  const std::size_t n_miner = prefs.num_miners();
  MmaRun run;
  run.result = EmptyResult(prefs);
  ComplexityCounters& counters = run.counters;

  std::vector<std::vector<std::size_t>> rank(
      n_miner, std::vector<std::size_t>(n_mc, kNoRank));
  for (std::size_t s = 0; s < n_miner; ++s) {
    for (std::size_t r = 0; r < prefs.miner_prefs[s].size(); ++r) {
      rank[s][prefs.miner_prefs[s][r]] = r;
    }
  }

  std::vector<std::size_t> load(n_miner, 0);
  std::set<std::pair<std::size_t, std::size_t>> proposed;
  std::vector<std::size_t> pool(n_mc);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> waiting(n_miner);

  while (!pool.empty()) {
    for (auto& w : waiting) w.clear();
    std::vector<std::size_t> still_waiting;
    bool proposed_this_round = false;
    for (std::size_t n : pool) {
      // Best miner on P_n that can still take an MC.
      auto it = std::find_if(
          prefs.mc_prefs[n].begin(), prefs.mc_prefs[n].end(),
          [&](std::size_t s) { return load[s] < options.miner_capacity; });
      if (it == prefs.mc_prefs[n].end()) continue;  // left unassociated
      waiting[*it].push_back(n);
      ++counters.proposals;
      proposed.emplace(n, *it);
      proposed_this_round = true;
    }
    if (!proposed_this_round) break;
    ++counters.rounds;

    std::size_t rejected = 0;
    std::vector<bool> accepted(n_mc, false);
    for (std::size_t s = 0; s < n_miner; ++s) {
      if (waiting[s].empty()) continue;
      std::size_t best = waiting[s].front();
      for (std::size_t i = 1; i < waiting[s].size(); ++i) {
        ++counters.comparisons;
        if (rank[s][waiting[s][i]] < rank[s][best]) best = waiting[s][i];
      }
      run.result.assignment[best] = s;
      accepted[best] = true;
      ++load[s];
      rejected += waiting[s].size() - 1;
    }
    for (std::size_t n : pool) {
      if (!accepted[n]) still_waiting.push_back(n);
    }
    pool = std::move(still_waiting);
    if (rejected == 0) break;
  }
  counters.distinct_proposals = static_cast<std::int64_t>(proposed.size());
  FinalizeResult(run.result);
  return run;
}

AssociationResult RandomAssociation(const PreferenceTables& prefs, Rng& rng) {
  AssociationResult r = EmptyResult(prefs);
  for (std::size_t n = 0; n < prefs.num_mcs(); ++n) {
    // Candidates in ascending index order so the draw does not depend on
    // preference order.
    std::vector<std::size_t> options = prefs.mc_prefs[n];
    if (options.empty()) continue;
    std::sort(options.begin(), options.end());
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    r.assignment[n] = options[pick(rng)];
  }
  FinalizeResult(r);
  return r;
}

std::vector<BlockingPair> FindBlockingPairs(const AssociationResult& result,
                                            const EconomicsTable& economics) {
  std::vector<BlockingPair> out;
  for (std::size_t n = 0; n < result.assignment.size(); ++n) {
    if (!result.assignment[n].has_value()) continue;
    const std::size_t current = *result.assignment[n];
    const double have = economics.at(n, current).mc_utility;
    for (std::size_t s = 0; s < economics.num_miners; ++s) {
      if (s == current) continue;
      const PairEconomics& e = economics.at(n, s);
      if (e.feasible && e.miner_utility > 0 && e.mc_utility > have) {
        out.push_back({n, s});
      }
    }
  }
  return out;
}

bool IsFeasibleAssociation(const AssociationResult& result,
                           const PreferenceTables& prefs) {
  if (result.assignment.size() != prefs.num_mcs()) return false;
  std::vector<std::size_t> expected_participants;
  std::size_t pairs = 0;
  for (std::size_t n = 0; n < result.assignment.size(); ++n) {
    if (!result.assignment[n].has_value()) continue;
    const std::size_t s = *result.assignment[n];
    if (s >= prefs.num_miners() || !prefs.IsCandidatePair(n, s)) return false;
    expected_participants.push_back(n);
    ++pairs;
  }
  if (result.indicator.size() != pairs) return false;
  for (const auto& [n, s] : result.indicator) {
    if (result.assignment[n] != s) return false;
  }
  return result.participants == expected_participants;
}

}  // namespace medchain
