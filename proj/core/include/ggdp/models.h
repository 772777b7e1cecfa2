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

#ifndef GGDP_MODELS_H_
#define GGDP_MODELS_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ggdp/dataset.h"
#include "ggdp/random.h"

namespace ggdp {

// A differentiable classifier with per-example gradients. Parameters live
// in a flat vector owned by the caller.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string name() const = 0;
  virtual std::size_t num_params() const = 0;
  virtual std::vector<double> Init(Rng& rng) const = 0;
  // Gradient of the cross-entropy loss of one example, written to grad.
  virtual void Gradient(std::span<const double> params,
                        std::span<const double> x, int label,
                        std::span<double> grad) const = 0;
  virtual int Predict(std::span<const double> params,
                      std::span<const double> x) const = 0;
};

// Multinomial logistic regression (softmax over an affine map).
class LogisticModel : public Model {
 public:
  LogisticModel(std::size_t features, int classes);

  std::string name() const override { return "logistic"; }
  std::size_t num_params() const override;
  std::vector<double> Init(Rng& rng) const override;
  void Gradient(std::span<const double> params, std::span<const double> x,
                int label, std::span<double> grad) const override;
  int Predict(std::span<const double> params,
              std::span<const double> x) const override;

 private:
  std::size_t features_;
  int classes_;
};

// One tanh hidden layer followed by a softmax output layer.
class MlpModel : public Model {
 public:
  MlpModel(std::size_t features, int classes, std::size_t hidden = 32);

  std::string name() const override { return "mlp"; }
  std::size_t num_params() const override;
  std::vector<double> Init(Rng& rng) const override;
  void Gradient(std::span<const double> params, std::span<const double> x,
                int label, std::span<double> grad) const override;
  int Predict(std::span<const double> params,
              std::span<const double> x) const override;

 private:
  void Forward(std::span<const double> params, std::span<const double> x,
               std::vector<double>& hidden, std::vector<double>& logits) const;

  std::size_t features_;
  int classes_;
  std::size_t hidden_;
};

// "logistic" or "mlp"; throws ParameterError otherwise.
std::unique_ptr<Model> MakeModel(const std::string& name,
                                 std::size_t features, int classes);

double Accuracy(const Model& model, std::span<const double> params,
                const Dataset& data);

}  // namespace ggdp

#endif  // GGDP_MODELS_H_
