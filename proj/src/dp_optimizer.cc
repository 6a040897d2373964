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

#include "medchain/dp_optimizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "medchain/error.h"

namespace medchain {
namespace {

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) - y z, stable for large |z|.
double BinaryCrossEntropy(double z, double y) {
  const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
  return softplus - y * z;
}

// Hidden activations and output logit of the MLP.
double MlpForward(const LocalModel& m, std::span<const double> x,
                  std::vector<double>& hidden) {
  const std::size_t d = m.shape.input_dim;
  const std::size_t h = m.shape.hidden;
  const double* w1 = m.weights.data();
  const double* b1 = w1 + h * d;
  const double* w2 = b1 + h;
  const double b2 = w2[h];
  hidden.resize(h);
  double z = b2;
  for (std::size_t j = 0; j < h; ++j) {
    double a = b1[j];
    const double* row = w1 + j * d;
    for (std::size_t k = 0; k < d; ++k) a += row[k] * x[k];
    hidden[j] = std::tanh(a);
    z += w2[j] * hidden[j];
  }
  return z;
}

double Logit(const LocalModel& m, std::span<const double> x) {
  if (m.shape.arch == Architecture::kLogisticRegression) {
    const std::size_t d = m.shape.input_dim;
    double z = m.weights[d];
    for (std::size_t k = 0; k < d; ++k) z += m.weights[k] * x[k];
    return z;
  }
  std::vector<double> hidden;
  return MlpForward(m, x, hidden);
}

// Adds the per-sample gradient into `out` (which must be sized NumWeights()).
void AccumulateGradient(const LocalModel& m, std::span<const double> x,
                        double y, std::span<double> out) {
  const std::size_t d = m.shape.input_dim;
  if (m.shape.arch == Architecture::kLogisticRegression) {
    const double dz = Sigmoid(Logit(m, x)) - y;
    for (std::size_t k = 0; k < d; ++k) out[k] += dz * x[k];
    out[d] += dz;
    return;
  }
  const std::size_t h = m.shape.hidden;
  std::vector<double> hidden;
  const double dz = Sigmoid(MlpForward(m, x, hidden)) - y;
  const double* w2 = m.weights.data() + h * d + h;
  double* g_w1 = out.data();
  double* g_b1 = g_w1 + h * d;
  double* g_w2 = g_b1 + h;
  for (std::size_t j = 0; j < h; ++j) {
    const double da = dz * w2[j] * (1.0 - hidden[j] * hidden[j]);
    double* row = g_w1 + j * d;
    for (std::size_t k = 0; k < d; ++k) row[k] += da * x[k];
    g_b1[j] += da;
    g_w2[j] += dz * hidden[j];
  }
  g_w2[h] += dz;
}

double L2Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

std::size_t ModelShape::NumWeights() const {
  if (arch == Architecture::kLogisticRegression) return input_dim + 1;
  return hidden * input_dim + 2 * hidden + 1;
}

absl::Status PrivacyParams::Validate() const {
  auto invalid = [](std::string_view what) {
    return MakeError(ErrorKind::kValidationError, what);
  };
  if (epsilon.has_value() && !(*epsilon > 0)) {
    return MakeError(ErrorKind::kInvalidBudget, "epsilon must be > 0");
  }
  if (!(delta > 0 && delta < 1)) {
    return MakeError(ErrorKind::kInvalidBudget, "delta must lie in (0, 1)");
  }
  if (!(noise_scale >= 0) || !std::isfinite(noise_scale)) {
    return invalid("noise_scale must be finite and >= 0");
  }
  if (!(clip_bound > 0)) return invalid("clip_bound must be > 0");
  if (batch_size < 1) return invalid("batch_size must be >= 1");
  if (!(learning_rate > 0)) return invalid("learning_rate must be > 0");
  return absl::OkStatus();
}

absl::StatusOr<double> SigmaFromBudget(double epsilon, double delta) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return MakeError(ErrorKind::kInvalidBudget,
                     absl::StrCat("epsilon must be > 0, got ", epsilon));
  }
  if (!(delta > 0 && delta < 1)) {
    return MakeError(ErrorKind::kInvalidBudget,
                     absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

LocalModel InitModel(const ModelShape& shape, Rng& rng) {
  LocalModel model{shape, WeightVector(shape.NumWeights(), 0.0)};
  if (shape.arch == Architecture::kTwoLayerMlp) {
    // Hidden units need distinct starting points; the output layer starts
    // small so the initial prediction is close to 1/2.
    const double in_scale = 1.0 / std::sqrt(double(std::max<std::size_t>(
                                       shape.input_dim, 1)));
    const double out_scale = 1.0 / std::sqrt(double(shape.hidden));
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n_w1 = shape.hidden * shape.input_dim;
    for (std::size_t i = 0; i < n_w1; ++i) {
      model.weights[i] = in_scale * normal(rng);
    }
    double* w2 = model.weights.data() + n_w1 + shape.hidden;
    for (std::size_t j = 0; j < shape.hidden; ++j) {
      w2[j] = 0.1 * out_scale * normal(rng);
    }
  }
  return model;
}

double Predict(const LocalModel& model, std::span<const double> x) {
  return Sigmoid(Logit(model, x));
}

double SampleLoss(const LocalModel& model, std::span<const double> x,
                  double y) {
  return BinaryCrossEntropy(Logit(model, x), y);
}

absl::StatusOr<WeightVector> PerSampleGradient(const LocalModel& model,
                                               std::span<const double> x,
                                               double y) {
  if (x.size() != model.shape.input_dim) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("sample has ", x.size(),
                                  " features, model expects ",
                                  model.shape.input_dim));
  }
  if (model.weights.size() != model.shape.NumWeights()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     "weight vector does not match model shape");
  }
  WeightVector grad(model.weights.size(), 0.0);
  AccumulateGradient(model, x, y, grad);
  return grad;
}

double DatasetLoss(const LocalModel& model, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    sum += SampleLoss(model, data.row(i), data.labels[i]);
  }
  return sum / static_cast<double>(data.size());
}

double Accuracy(const LocalModel& model, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool positive = Predict(model, data.row(i)) >= 0.5;
    if (positive == (data.labels[i] > 0.5)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

WeightVector ClipGradient(std::span<const double> gradient,
                          double clip_bound) {
  const double scale = std::max(1.0, L2Norm(gradient) / clip_bound);
  WeightVector out(gradient.begin(), gradient.end());
  for (double& v : out) v /= scale;
  return out;
}

absl::StatusOr<WeightVector> NoisyBatchGradient(
    const LocalModel& model, const Dataset& data,
    std::span<const std::size_t> batch, const PrivacyParams& priv, Rng& rng) {
  if (batch.empty()) {
    return MakeError(ErrorKind::kEmptyBatch, "batch has no samples");
  }
  if (data.dim != model.shape.input_dim) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("dataset has ", data.dim,
                                  " features, model expects ",
                                  model.shape.input_dim));
  }
  const std::size_t n = model.weights.size();
  WeightVector sum(n, 0.0);
  WeightVector grad(n);
  for (std::size_t idx : batch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    AccumulateGradient(model, data.row(idx), data.labels[idx], grad);
    const double scale = std::max(1.0, L2Norm(grad) / priv.clip_bound);
    for (std::size_t k = 0; k < n; ++k) sum[k] += grad[k] / scale;
  }
  const double stddev = priv.noise_scale * priv.clip_bound;
  if (stddev > 0) {
    std::normal_distribution<double> noise(0.0, stddev);
    for (double& v : sum) v += noise(rng);
  }
  const double inv_b = 1.0 / static_cast<double>(priv.batch_size);
  for (double& v : sum) v *= inv_b;
  return sum;
}

absl::StatusOr<LocalModel> NoisyBatchStep(const LocalModel& model,
                                          const Dataset& data,
                                          std::span<const std::size_t> batch,
                                          const PrivacyParams& priv,
                                          Rng& rng) {
  absl::StatusOr<WeightVector> g =
      NoisyBatchGradient(model, data, batch, priv, rng);
  if (!g.ok()) return g.status();
  LocalModel next = model;
  for (std::size_t k = 0; k < next.weights.size(); ++k) {
    next.weights[k] -= priv.learning_rate * (*g)[k];
  }
  return next;
}

absl::StatusOr<TrainingResult> LocalTraining(const LocalModel& model,
                                             const Dataset& data,
                                             const PrivacyParams& priv,
                                             std::int64_t local_iters,
                                             Rng& rng) {
  if (data.size() == 0) {
    return MakeError(ErrorKind::kEmptyBatch, "local dataset is empty");
  }
  LocalModel current = model;
  // Batch order has its own generator.
  Rng shuffle_rng(rng());
  std::vector<std::size_t> order(data.size());
  const std::size_t b = static_cast<std::size_t>(priv.batch_size);
  for (std::int64_t it = 0; it < local_iters; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < order.size(); start += b) {
      const std::size_t len = std::min(b, order.size() - start);
      absl::StatusOr<LocalModel> next = NoisyBatchStep(
          current, data, std::span(order).subspan(start, len), priv, rng);
      if (!next.ok()) return next.status();
      current = *std::move(next);
    }
  }
  const double loss = DatasetLoss(current, data);
  return TrainingResult{std::move(current), loss};
}

PlateauScheduler::PlateauScheduler(double initial_lr, int patience,
                                   double factor)
    : lr_(initial_lr), patience_(patience), factor_(factor) {}

double PlateauScheduler::Step(double loss) {
  if (!best_.has_value() || loss < *best_) {
    best_ = loss;
    stale_ = 0;
  } else if (++stale_ >= patience_) {
    lr_ *= factor_;
    stale_ = 0;
  }
  return lr_;
}

}  // namespace medchain
