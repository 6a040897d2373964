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

#include "medchain/dataset.h"

#include <cmath>
#include <random>

namespace medchain {

void Dataset::Append(std::span<const double> x, double y) {
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(y);
}

Dataset MakeTwoGaussians(const SyntheticSpec& spec, Rng& rng) {
  Dataset data;
  data.dim = spec.dim;
  const std::size_t n = spec.samples > 0 ? spec.samples : 0;
  data.features.reserve(n * spec.dim);
  data.labels.reserve(n);
  const double offset =
      spec.dim == 0 ? 0.0
                    : 0.5 * spec.separation / std::sqrt(double(spec.dim));
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> x(spec.dim);
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = coin(rng);
    const double shift = positive ? offset : -offset;
    for (double& v : x) v = shift + noise(rng);
    data.Append(x, positive ? 1.0 : 0.0);
  }
  return data;
}

}  // namespace medchain
