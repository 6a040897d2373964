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

#ifndef MEDCHAIN_DP_OPTIMIZER_H_
#define MEDCHAIN_DP_OPTIMIZER_H_

// Differentially private local training: per-sample binary cross-entropy
// gradients, L2 clipping to a bound A, Gaussian noise N(0, sigma^2 A^2 I)
// added once per batch to the summed clipped gradients, and plain SGD.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "medchain/dataset.h"
#include "medchain/rng.h"

namespace medchain {

using WeightVector = std::vector<double>;

enum class Architecture { kLogisticRegression, kTwoLayerMlp };

struct ModelShape {
  Architecture arch = Architecture::kLogisticRegression;
  std::size_t input_dim = 0;
  std::size_t hidden = 16;  // only used by the MLP

  std::size_t NumWeights() const;
};

// Weight layout:
//   logistic regression: [w_0 .. w_{d-1}, b]
//   two-layer MLP:       [W1 (hidden x d, row-major), b1 (hidden),
//                         w2 (hidden), b2]
// The MLP uses tanh hidden units; both heads end in a sigmoid.
struct LocalModel {
  ModelShape shape;
  WeightVector weights;
};

struct PrivacyParams {
  std::optional<double> epsilon;
  double delta = 1e-5;
  double noise_scale = 0.0;  // sigma
  double clip_bound = 8.0;   // A
  std::int64_t batch_size = 32;
  double learning_rate = 0.01;

  absl::Status Validate() const;
};

// sqrt(2 ln(1.25 / delta)) / epsilon. InvalidBudget unless epsilon > 0 and
// 0 < delta < 1.
absl::StatusOr<double> SigmaFromBudget(double epsilon, double delta);

LocalModel InitModel(const ModelShape& shape, Rng& rng);

// Probability of the positive class.
double Predict(const LocalModel& model, std::span<const double> x);

double SampleLoss(const LocalModel& model, std::span<const double> x,
                  double y);

absl::StatusOr<WeightVector> PerSampleGradient(const LocalModel& model,
                                               std::span<const double> x,
                                               double y);

// Mean per-sample loss over the dataset.
double DatasetLoss(const LocalModel& model, const Dataset& data);

double Accuracy(const LocalModel& model, const Dataset& data);

// g / max(1, ||g||_2 / A).
WeightVector ClipGradient(std::span<const double> gradient, double clip_bound);

// (1/B) * (sum of clipped per-sample gradients + N(0, sigma^2 A^2 I)) over the
// samples of `data` selected by `batch`. B is the nominal batch size from
// `priv`, not batch.size().
absl::StatusOr<WeightVector> NoisyBatchGradient(
    const LocalModel& model, const Dataset& data,
    std::span<const std::size_t> batch, const PrivacyParams& priv, Rng& rng);

// One SGD step w -= alpha * G''.
absl::StatusOr<LocalModel> NoisyBatchStep(const LocalModel& model,
                                          const Dataset& data,
                                          std::span<const std::size_t> batch,
                                          const PrivacyParams& priv, Rng& rng);

struct TrainingResult {
  LocalModel model;
  double loss = 0.0;  // dataset-average loss at the returned weights
};

// Runs `local_iters` passes over `data`; each pass reshuffles, then steps
// through consecutive batches (the short tail batch included). The shuffle
// generator is seeded from the first draw of `rng`, so batch order is the
// same for every noise scale.
absl::StatusOr<TrainingResult> LocalTraining(const LocalModel& model,
                                             const Dataset& data,
                                             const PrivacyParams& priv,
                                             std::int64_t local_iters,
                                             Rng& rng);

// Multiplies the learning rate by `factor` once the observed loss fails to
// improve for `patience` consecutive steps.
class PlateauScheduler {
 public:
  PlateauScheduler(double initial_lr, int patience = 2, double factor = 0.3);

  // Records a loss and returns the learning rate to use next.
  double Step(double loss);
  double learning_rate() const { return lr_; }

 private:
  double lr_;
  int patience_;
  double factor_;
  std::optional<double> best_;
  int stale_ = 0;
};

}  // namespace medchain

#endif  // MEDCHAIN_DP_OPTIMIZER_H_
