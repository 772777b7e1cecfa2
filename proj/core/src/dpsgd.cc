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

#include "ggdp/dpsgd.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "ggdp/errors.h"
#include "ggdp/mechanisms.h"
#include "ggdp/parallel.h"

namespace ggdp {

void TrainConfig::Validate() const {
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    throw ParameterError("clip norm must be positive");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ParameterError("learning rate must be positive");
  }
  if (!(expected_batch >= 1.0)) {
    throw ParameterError("expected batch size must be >= 1");
  }
  if (epochs < 1) throw ParameterError("epochs must be >= 1");
  if (target_epsilon && !(*target_epsilon > 0.0)) {
    throw ParameterError("target epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta must lie in (0, 1)");
  }
}

std::int64_t TrainConfig::StepsPerEpoch(std::size_t dataset_size) const {
  return std::max<std::int64_t>(
      1, std::llround(static_cast<double>(dataset_size) / expected_batch));
}

double TrainConfig::SampleRate(std::size_t dataset_size) const {
  const double q = expected_batch / static_cast<double>(dataset_size);
  if (!(q > 0.0 && q <= 1.0)) {
    throw ParameterError("expected batch " + std::to_string(expected_batch) +
                         " exceeds the dataset size " +
                         std::to_string(dataset_size));
  }
  return q;
}

nlohmann::json EpochLog::ToJson() const {
  return {{"epoch", epoch},
          {"epsilon", epsilon},
          {"delta", delta},
          {"train_acc", train_acc},
          {"test_acc", test_acc}};
}

TrainResult BetaDpSgd(const Model& model, const Dataset& train,
                      const Dataset* test, const TrainConfig& config,
                      Rng& rng) {
  config.Validate();
  if (train.size() == 0) throw InputError("empty training set");
  if (train.num_features == 0 || train.features.size() !=
                                     train.size() * train.num_features) {
    throw InputError("training features do not match the row count");
  }
  const double q = config.SampleRate(train.size());
  const std::int64_t per_epoch = config.StepsPerEpoch(train.size());
  const std::int64_t total_steps = per_epoch * config.epochs;
  const double beta = config.noise.beta();
  const std::size_t dim = model.num_params();

  // Every random stream is derived up front so the run is a pure function
  // of the incoming Rng state.
  const std::uint64_t seed = rng();
  Rng init_rng = MakeRng(seed, {1});
  Rng batch_rng = MakeRng(seed, {2});
  Rng noise_rng = MakeRng(seed, {3});

  std::unique_ptr<CompositionAccountant> accountant;
  std::int64_t allowed = total_steps;
  if (config.private_mode) {
    MechanismSpec step{config.noise, 1.0, q, 1};
    accountant = std::make_unique<CompositionAccountant>(
        step, total_steps, config.accounting, DeriveSeed(seed, {4}));
    if (config.target_epsilon) {
      allowed = accountant->MaxSteps(*config.target_epsilon, config.delta);
      if (allowed == 0) {
        throw BudgetError(
            "privacy budget exhausted before the first step: one step costs "
            "epsilon " +
            std::to_string(accountant->Epsilon(1, config.delta)) +
            " at delta " + std::to_string(config.delta) + ", target is " +
            std::to_string(*config.target_epsilon));
      }
    }
  }

  TrainResult result;
  result.params = model.Init(init_rng);
  GGSampler noise(config.noise.Scaled(config.clip_norm));
  std::bernoulli_distribution include(q);
  std::vector<std::size_t> batch;
  std::vector<double> grads;
  std::vector<double> sum(dim);

  auto log_epoch = [&](std::int64_t epoch) {
    EpochLog entry;
    entry.epoch = epoch;
    entry.steps = result.steps;
    entry.delta = config.delta;
    entry.epsilon =
        accountant ? accountant->Epsilon(result.steps, config.delta) : 0.0;
    entry.train_acc = Accuracy(model, result.params, train);
    entry.test_acc = test ? Accuracy(model, result.params, *test) : 0.0;
    result.log.push_back(entry);
  };

  for (std::int64_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const std::int64_t steps_before = result.steps;
    for (std::int64_t s = 0; s < per_epoch; ++s) {
      if (result.steps >= allowed) {
        result.halted_by_budget = true;
        break;
      }
      batch.clear();
      if (q >= 1.0) {
        for (std::size_t i = 0; i < train.size(); ++i) batch.push_back(i);
      } else {
        for (std::size_t i = 0; i < train.size(); ++i) {
          if (include(batch_rng)) batch.push_back(i);
        }
      }
      grads.assign(batch.size() * dim, 0.0);
      ParallelFor(batch.size(), [&](std::size_t b) {
        const std::size_t i = batch[b];
        std::span<double> g(grads.data() + b * dim, dim);
        model.Gradient(result.params, train.row(i), train.labels[i], g);
        if (config.private_mode) LBetaClipInPlace(g, beta, config.clip_norm);
      });
      std::fill(sum.begin(), sum.end(), 0.0);
      for (std::size_t b = 0; b < batch.size(); ++b) {
        for (std::size_t p = 0; p < dim; ++p) sum[p] += grads[b * dim + p];
      }
      if (config.private_mode) {
        for (double& v : sum) v += noise(noise_rng);
      }
      const double scale = config.learning_rate / config.expected_batch;
      for (std::size_t p = 0; p < dim; ++p) result.params[p] -= scale * sum[p];
      ++result.steps;
    }
    if (result.steps > steps_before) log_epoch(epoch);
    if (result.halted_by_budget) break;
  }
  return result;
}

}  // namespace ggdp
