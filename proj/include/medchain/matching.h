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

#ifndef MEDCHAIN_MATCHING_H_
#define MEDCHAIN_MATCHING_H_

// Miner / medical-center association by round-based deferred acceptance.
//
// Each round every unmatched MC proposes to the best miner on its preference
// list. Every miner that received proposals accepts exactly one proposer (its
// favourite by its own list) and rejects the others. Accepted MCs leave the
// pool for good; rejected MCs propose again next round with a freshly rebuilt
// list, so miners keep accumulating MCs across rounds (many-to-one). The
// process stops once a round produces no rejection.
//
// A pair is a candidate only when its upload meets the deadline and the
// miner's utility is strictly positive. Ties in utility are broken by
// ascending id.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "medchain/ids.h"
#include "medchain/rng.h"
#include "medchain/utility_model.h"

namespace medchain {

// Which utility each side ranks by.
enum class Orientation {
  // MCs rank miners by U^Min and miners rank MCs by U^MC, exactly as the
  // association procedure is usually stated.
  kAsWritten,
  // Each side ranks by its own utility (MCs by U^MC, miners by U^Min). This
  // is conventional deferred acceptance and the default.
  kSelfUtility,
};

// Row-major N x S table of per-pair values.
template <typename T>
struct PairTable {
  std::size_t num_mcs = 0;
  std::size_t num_miners = 0;
  std::vector<T> cells;

  PairTable() = default;
  PairTable(std::size_t n, std::size_t s, const T& init = T{})
      : num_mcs(n), num_miners(s), cells(n * s, init) {}

  T& at(std::size_t mc, std::size_t miner) {
    return cells[mc * num_miners + miner];
  }
  const T& at(std::size_t mc, std::size_t miner) const {
    return cells[mc * num_miners + miner];
  }
};

using ChannelTable = PairTable<ChannelSpec>;
using EconomicsTable = PairTable<PairEconomics>;

// Everything below refers to MCs and miners by their position in mc_ids /
// miner_ids.
struct PreferenceTables {
  std::vector<McId> mc_ids;
  std::vector<MinerId> miner_ids;
  EconomicsTable economics;

  // Candidate sets as defined by the two filters, ascending index.
  std::vector<std::vector<std::size_t>> mc_candidates;     // U^Min > 0
  std::vector<std::vector<std::size_t>> miner_candidates;  // deadline met

  // Preference lists over pairs passing both filters, best first, and the
  // governing utility of each entry (non-increasing).
  std::vector<std::vector<std::size_t>> mc_prefs;
  std::vector<std::vector<std::size_t>> miner_prefs;
  std::vector<std::vector<double>> mc_utility_lists;
  std::vector<std::vector<double>> miner_utility_lists;

  std::size_t num_mcs() const { return mc_ids.size(); }
  std::size_t num_miners() const { return miner_ids.size(); }
  // Passes the deadline filter and the U^Min > 0 filter.
  bool IsCandidatePair(std::size_t mc, std::size_t miner) const;
};

struct PreferenceOptions {
  Orientation orientation = Orientation::kSelfUtility;
  // Association count assumed for each pair when pricing it before any
  // association exists.
  std::int64_t assoc_count = 1;
};

// Prices every pair and builds the preference tables. NoFeasiblePairs when no
// pair passes both filters.
absl::StatusOr<PreferenceTables> BuildPreferences(
    std::span<const MedicalCenterSpec> mcs, std::span<const MinerId> miners,
    const ChannelTable& channels, const SystemParams& sys,
    const PreferenceOptions& options = {});

// Same, from an already priced table.
absl::StatusOr<PreferenceTables> BuildPreferencesFromEconomics(
    std::vector<McId> mc_ids, std::vector<MinerId> miner_ids,
    EconomicsTable economics, Orientation orientation);

struct AssociationResult {
  std::vector<McId> mc_ids;
  std::vector<MinerId> miner_ids;
  // Per MC: index of its miner, or nullopt when unassociated.
  std::vector<std::optional<std::size_t>> assignment;
  // (mc, miner) pairs with y = 1, ascending by mc.
  std::vector<std::pair<std::size_t, std::size_t>> indicator;
  // Associated MCs, ascending index.
  std::vector<std::size_t> participants;

  std::vector<std::size_t> MinerLoads() const;
};

struct ComplexityCounters {
  std::int64_t rounds = 0;
  std::int64_t proposals = 0;           // every proposal, repeats included
  std::int64_t distinct_proposals = 0;  // distinct (mc, miner) proposals
  std::int64_t comparisons = 0;         // utility comparisons by miners
};

struct MmaOptions {
  // Maximum number of MCs a miner accepts over the whole run.
  std::size_t miner_capacity = std::numeric_limits<std::size_t>::max();
};

struct MmaRun {
  AssociationResult result;
  ComplexityCounters counters;
};

MmaRun RunMma(const PreferenceTables& prefs, const MmaOptions& options = {});

// Baseline: each MC with at least one candidate miner picks one uniformly at
// random.
AssociationResult RandomAssociation(const PreferenceTables& prefs, Rng& rng);

struct BlockingPair {
  std::size_t mc = 0;
  std::size_t miner = 0;
  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

// Every (C_n, M_s) with C_n associated to some other miner s*, (n, s) a
// candidate pair, and U^MC(n, s) > U^MC(n, s*). Empty means stable.
std::vector<BlockingPair> FindBlockingPairs(const AssociationResult& result,
                                            const EconomicsTable& economics);

// Checks the structural invariants of an association: at most one miner per
// MC, candidate pairs only, and a participant set consistent with the
// indicator.
bool IsFeasibleAssociation(const AssociationResult& result,
                           const PreferenceTables& prefs);

}  // namespace medchain

#endif  // MEDCHAIN_MATCHING_H_
