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

#include "medchain/population.h"

#include <cmath>
#include <memory>
#include <random>

namespace medchain {
namespace {

double Uniform(const Range& r, Rng& rng) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

std::int32_t UniformInt(const Range& r, Rng& rng) {
  const auto lo = static_cast<std::int32_t>(std::ceil(r.lo));
  const auto hi = static_cast<std::int32_t>(std::floor(r.hi));
  if (lo == hi) return lo;
  return std::uniform_int_distribution<std::int32_t>(lo, hi)(rng);
}

}  // namespace

Population SamplePopulation(const ExperimentConfig& cfg, Rng& rng) {
  const auto n = static_cast<std::size_t>(cfg.num_mcs);
  const auto s = static_cast<std::size_t>(cfg.num_miners);
  const SyntheticSpec local{.samples = cfg.SamplesPerMc(),
                            .dim = cfg.feature_dim,
                            .separation = cfg.separation};

  Population pop;
  pop.mcs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    MedicalCenterSpec mc;
    mc.id = McId{static_cast<std::uint32_t>(i)};
    mc.data_size = local.samples;
    mc.cpu_rate_hz = Uniform(cfg.cpu_rate_ghz, rng) * 1e9;
    mc.cycles_per_sample = Uniform(cfg.cycles_per_sample, rng);
    mc.local_iters = cfg.local_iters;
    mc.tx_power_w =
        PowerDbToWatts(Uniform(cfg.tx_power_db, rng), cfg.tx_power_unit);
    Rng data_rng = MakeStream(cfg.seed, StreamTag::kLocalData, i);
    mc.dataset =
        std::make_shared<const Dataset>(MakeTwoGaussians(local, data_rng));
    pop.mcs.push_back(std::move(mc));
  }
  for (std::size_t j = 0; j < s; ++j) {
    pop.miners.push_back(MinerId{static_cast<std::uint32_t>(j)});
  }
  pop.channels = ChannelTable(n, s);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      ChannelSpec& c = pop.channels.at(i, j);
      c.prb_count = UniformInt(cfg.prb_count, rng);
      c.sinr_db = Uniform(cfg.sinr_db, rng);
    }
  }
  Rng test_rng = MakeStream(cfg.seed, StreamTag::kTestData);
  pop.test_set = MakeTwoGaussians(
      SyntheticSpec{.samples = cfg.test_samples,
                    .dim = cfg.feature_dim,
                    .separation = cfg.separation},
      test_rng);
  return pop;
}

Population SamplePopulation(const ExperimentConfig& cfg) {
  Rng rng = MakeStream(cfg.seed, StreamTag::kPopulation);
  return SamplePopulation(cfg, rng);
}

}  // namespace medchain
