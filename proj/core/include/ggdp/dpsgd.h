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

#ifndef GGDP_DPSGD_H_
#define GGDP_DPSGD_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "ggdp/accountant.h"
#include "ggdp/dataset.h"
#include "ggdp/gg_distribution.h"
#include "ggdp/models.h"
#include "ggdp/random.h"

namespace ggdp {

struct TrainConfig {
  GGParams noise{2.0, 1.0};
  double clip_norm = 1.0;
  double learning_rate = 0.5;
  double expected_batch = 64.0;
  std::int64_t epochs = 10;
  // When set, training stops before the step that would push epsilon at
  // `delta` above this value.
  std::optional<double> target_epsilon;
  double delta = 1e-5;
  // false trains the non-private baseline: identical batches and step
  // sizes, but no clipping, no noise and no accounting.
  bool private_mode = true;
  AccountOptions accounting;

  // Throws ParameterError on C <= 0, eta <= 0, batch < 1 or epochs < 1.
  void Validate() const;
  std::int64_t StepsPerEpoch(std::size_t dataset_size) const;
  double SampleRate(std::size_t dataset_size) const;
};

struct EpochLog {
  std::int64_t epoch = 0;
  std::int64_t steps = 0;  // cumulative
  double epsilon = 0.0;
  double delta = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;

  // {"epoch", "epsilon", "delta", "train_acc", "test_acc"}
  nlohmann::json ToJson() const;
};

struct TrainResult {
  std::vector<double> params;
  std::vector<EpochLog> log;
  std::int64_t steps = 0;
  bool halted_by_budget = false;
};

// Poisson-subsampled DP-SGD with l_beta clipping and GG noise. Each step
// draws a batch with rate q = expected_batch / |train|, clips every
// per-example gradient to l_beta norm C, adds N_beta(0, sigma * C) to each
// coordinate of the sum, divides by expected_batch and takes a gradient
// step. `test` may be null. Throws BudgetError when not even one step fits
// in the target epsilon.
TrainResult BetaDpSgd(const Model& model, const Dataset& train,
                      const Dataset* test, const TrainConfig& config,
                      Rng& rng);

}  // namespace ggdp

#endif  // GGDP_DPSGD_H_
