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

#ifndef MEDCHAIN_RNG_H_
#define MEDCHAIN_RNG_H_

#include <cstdint>
#include <random>

namespace medchain {

using Rng = std::mt19937_64;

// Independent purposes draw from disjoint streams of the same experiment seed.
enum class StreamTag : std::uint32_t {
  kPopulation = 1,
  kLocalData = 2,
  kTestData = 3,
  kDpNoise = 4,
  kMining = 5,
  kAssociation = 6,
  kInitWeights = 7,
  kShuffle = 8,
};

// Derives a generator for (seed, tag, a, b). Distinct tuples give unrelated
// streams; identical tuples give identical streams regardless of call order.
Rng MakeStream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0,
               std::uint64_t b = 0);

}  // namespace medchain

#endif  // MEDCHAIN_RNG_H_
