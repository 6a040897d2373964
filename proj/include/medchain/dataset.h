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

#ifndef MEDCHAIN_DATASET_H_
#define MEDCHAIN_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "medchain/rng.h"

namespace medchain {

// Dense binary-labelled samples, features stored row-major.
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> features;
  std::vector<double> labels;  // 0 or 1

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * dim, dim);
  }
  void Append(std::span<const double> x, double y);
};

struct SyntheticSpec {
  std::int64_t samples = 100;
  std::size_t dim = 20;
  double separation = 2.0;  // distance between the two class means
};

// Two isotropic unit-variance Gaussian clusters whose means sit at
// +-separation/2 along the all-ones diagonal. Labels are fair coin flips.
Dataset MakeTwoGaussians(const SyntheticSpec& spec, Rng& rng);

}  // namespace medchain

#endif  // MEDCHAIN_DATASET_H_
