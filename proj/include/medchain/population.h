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

#ifndef MEDCHAIN_POPULATION_H_
#define MEDCHAIN_POPULATION_H_

#include <vector>

#include "medchain/config.h"
#include "medchain/dataset.h"
#include "medchain/ids.h"
#include "medchain/matching.h"
#include "medchain/rng.h"
#include "medchain/utility_model.h"

namespace medchain {

struct Population {
  std::vector<MedicalCenterSpec> mcs;  // ids 0..N-1, datasets attached
  std::vector<MinerId> miners;         // ids 0..S-1
  ChannelTable channels;               // N x S
  Dataset test_set;
};

// Draws every MC and channel parameter uniformly from the configured ranges.
// PRB counts are uniform integers in the range. `rng` drives the economic
// parameters only; datasets use their own (seed, MC) streams so the data of
// an MC does not depend on how many draws came before it.
Population SamplePopulation(const ExperimentConfig& cfg, Rng& rng);

// Same, with the population stream derived from cfg.seed.
Population SamplePopulation(const ExperimentConfig& cfg);

}  // namespace medchain

#endif  // MEDCHAIN_POPULATION_H_
