//
// Copyright 2026 The ggdp Authors
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
//

#include "ggdp/models.h"

#include <algorithm>
#include <cmath>

#include "ggdp/errors.h"

namespace ggdp {
namespace {

void SoftmaxInPlace(std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& v : logits) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : logits) v /= sum;
}

int ArgmaxOf(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

void CheckLabel(int label, int classes) {
  if (label < 0 || label >= classes) throw InputError("label out of range");
}

}  // namespace

LogisticModel::LogisticModel(std::size_t features, int classes)
    : features_(features), classes_(classes) {
  if (features == 0 || classes < 2) {
    throw ParameterError("logistic model needs features and >= 2 classes");
  }
}

std::size_t LogisticModel::num_params() const {
  return static_cast<std::size_t>(classes_) * (features_ + 1);
}

std::vector<double> LogisticModel::Init(Rng&) const {
  return std::vector<double>(num_params(), 0.0);
}

void LogisticModel::Gradient(std::span<const double> params,
                             std::span<const double> x, int label,
                             std::span<double> grad) const {
  CheckLabel(label, classes_);
  const std::size_t k = static_cast<std::size_t>(classes_);
  const double* bias = params.data() + k * features_;
  std::vector<double> p(k);
  for (std::size_t c = 0; c < k; ++c) {
    double z = bias[c];
    for (std::size_t f = 0; f < features_; ++f) {
      z += params[c * features_ + f] * x[f];
    }
    p[c] = z;
  }
  SoftmaxInPlace(p);
  for (std::size_t c = 0; c < k; ++c) {
    const double d = p[c] - (static_cast<int>(c) == label ? 1.0 : 0.0);
    for (std::size_t f = 0; f < features_; ++f) grad[c * features_ + f] = d * x[f];
    grad[k * features_ + c] = d;
  }
}

int LogisticModel::Predict(std::span<const double> params,
                           std::span<const double> x) const {
  const std::size_t k = static_cast<std::size_t>(classes_);
  std::vector<double> z(k);
  for (std::size_t c = 0; c < k; ++c) {
    z[c] = params[k * features_ + c];
    for (std::size_t f = 0; f < features_; ++f) {
      z[c] += params[c * features_ + f] * x[f];
    }
  }
  return ArgmaxOf(z);
}

MlpModel::MlpModel(std::size_t features, int classes, std::size_t hidden)
    : features_(features), classes_(classes), hidden_(hidden) {
  if (features == 0 || classes < 2 || hidden == 0) {
    throw ParameterError("mlp needs features, hidden units and >= 2 classes");
  }
}

// Layout: W1 (hidden x features), b1 (hidden), W2 (classes x hidden),
// b2 (classes).
std::size_t MlpModel::num_params() const {
  const std::size_t k = static_cast<std::size_t>(classes_);
  return hidden_ * features_ + hidden_ + k * hidden_ + k;
}

std::vector<double> MlpModel::Init(Rng& rng) const {
  std::vector<double> params(num_params(), 0.0);
  std::normal_distribution<double> w1(
      0.0, 1.0 / std::sqrt(static_cast<double>(features_)));
  std::normal_distribution<double> w2(
      0.0, 1.0 / std::sqrt(static_cast<double>(hidden_)));
  std::size_t i = 0;
  for (; i < hidden_ * features_; ++i) params[i] = w1(rng);
  i += hidden_;
  const std::size_t w2_end = i + static_cast<std::size_t>(classes_) * hidden_;
  for (; i < w2_end; ++i) params[i] = w2(rng);
  return params;
}

void MlpModel::Forward(std::span<const double> params,
                       std::span<const double> x, std::vector<double>& hidden,
                       std::vector<double>& logits) const {
  const std::size_t k = static_cast<std::size_t>(classes_);
  const double* w1 = params.data();
  const double* b1 = w1 + hidden_ * features_;
  const double* w2 = b1 + hidden_;
  const double* b2 = w2 + k * hidden_;
  hidden.assign(hidden_, 0.0);
  for (std::size_t j = 0; j < hidden_; ++j) {
    double z = b1[j];
    for (std::size_t f = 0; f < features_; ++f) z += w1[j * features_ + f] * x[f];
    hidden[j] = std::tanh(z);
  }
  logits.assign(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    double z = b2[c];
    for (std::size_t j = 0; j < hidden_; ++j) z += w2[c * hidden_ + j] * hidden[j];
    logits[c] = z;
  }
}

void MlpModel::Gradient(std::span<const double> params,
                        std::span<const double> x, int label,
                        std::span<double> grad) const {
  CheckLabel(label, classes_);
  const std::size_t k = static_cast<std::size_t>(classes_);
  std::vector<double> hidden;
  std::vector<double> p;
  Forward(params, x, hidden, p);
  SoftmaxInPlace(p);
  p[static_cast<std::size_t>(label)] -= 1.0;

  const double* w2 = params.data() + hidden_ * features_ + hidden_;
  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + hidden_ * features_;
  double* g_w2 = g_b1 + hidden_;
  double* g_b2 = g_w2 + k * hidden_;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < hidden_; ++j) g_w2[c * hidden_ + j] = p[c] * hidden[j];
    g_b2[c] = p[c];
  }
  for (std::size_t j = 0; j < hidden_; ++j) {
    double back = 0.0;
    for (std::size_t c = 0; c < k; ++c) back += w2[c * hidden_ + j] * p[c];
    const double dz = back * (1.0 - hidden[j] * hidden[j]);
    for (std::size_t f = 0; f < features_; ++f) g_w1[j * features_ + f] = dz * x[f];
    g_b1[j] = dz;
  }
}

int MlpModel::Predict(std::span<const double> params,
                      std::span<const double> x) const {
  std::vector<double> hidden;
  std::vector<double> logits;
  Forward(params, x, hidden, logits);
  return ArgmaxOf(logits);
}

std::unique_ptr<Model> MakeModel(const std::string& name, std::size_t features,
                                 int classes) {
  if (name == "logistic") return std::make_unique<LogisticModel>(features, classes);
  if (name == "mlp") return std::make_unique<MlpModel>(features, classes);
  throw ParameterError("unknown model '" + name + "' (use logistic or mlp)");
}

double Accuracy(const Model& model, std::span<const double> params,
                const Dataset& data) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (model.Predict(params, data.row(i)) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace ggdp
