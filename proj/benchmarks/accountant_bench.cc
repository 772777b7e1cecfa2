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

#include <cmath>
#include <cstddef>

#include "benchmark/benchmark.h"
#include "ggdp/accountant.h"
#include "ggdp/prv.h"
#include "ggdp/random.h"

namespace ggdp {
namespace {

void BM_DiscretizeFromSamples(benchmark::State& state) {
  const MechanismSpec spec{GGParams(1.5, 1.0), 1.0, std::nullopt, 1};
  const PrvSampler sampler = MakePrvSampler(spec, LossDirection::kAdd);
  const auto cfg = AccountantConfig::FromBins(10.0, std::size_t{1} << 16,
                                              state.range(0));
  for (auto _ : state) {
    Rng rng(kDefaultSeed);
    benchmark::DoNotOptimize(DiscretizeFromSamples(sampler, cfg, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscretizeFromSamples)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_ComposeSelf(benchmark::State& state) {
  const std::size_t bins = static_cast<std::size_t>(state.range(0));
  const auto cfg = AccountantConfig::FromBins(100.0, bins, 10000);
  const DiscretePRV single = DiscretizeFromCdf(
      [](double x) {
        return ReferencePrvCdf(ReferenceMechanism::kGaussian, 1.0, 1.0, x);
      },
      cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComposeSelf(single, state.range(1)));
  }
  state.SetLabel("bins=" + std::to_string(bins));
}
BENCHMARK(BM_ComposeSelf)
    ->Args({1 << 16, 100})
    ->Args({1 << 19, 100})
    ->Args({1 << 19, 10000})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ggdp

BENCHMARK_MAIN();
