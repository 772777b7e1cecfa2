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

#ifndef GGDP_MECHANISMS_H_
#define GGDP_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ggdp/gg_distribution.h"
#include "ggdp/random.h"

namespace ggdp {

// Per-class vote counts, optionally with the ground-truth label.
struct VoteHistogram {
  std::vector<std::int64_t> counts;
  std::optional<int> true_label;

  std::size_t num_classes() const { return counts.size(); }
  // Index of the largest count; ties go to the lowest index.
  int Argmax() const;
  // Throws InputError for fewer than two classes or negative counts.
  void Validate() const;
};

// Releases f_value + Y with Y_i i.i.d. N_beta(0, sigma * sensitivity).
// The caller is responsible for the l_beta sensitivity bound.
std::vector<double> GGMechanism(std::span<const double> f_value,
                                double sensitivity, const GGParams& noise,
                                Rng& rng);

// A summation query sum_{x in S} g(x) over records indexed 0..n-1;
// `contribute(i, acc)` adds g(record i) into acc. The empty sum is zero.
struct SumQuery {
  std::size_t num_records = 0;
  std::size_t dimension = 0;
  std::function<void(std::size_t, std::span<double>)> contribute;
};

// Poisson-subsamples records with rate q, evaluates the query on the sample
// and applies GGMechanism. With q == 1 no sampling randomness is consumed,
// so the output equals GGMechanism on the full data under the same seed.
std::vector<double> SGGMechanism(const SumQuery& query, double sensitivity,
                                 const GGParams& noise, double sample_rate,
                                 Rng& rng);

// GGNMax: argmax_i (counts_i + Y_i), Y_i i.i.d. N_beta(0, sigma). Count
// functions have sensitivity 1. Ties go to the lowest index.
int GGNMax(std::span<const double> counts, const GGParams& noise, Rng& rng);
int GGNMax(const VoteHistogram& histogram, const GGParams& noise, Rng& rng);

// g / max(1, ||g||_beta / C).
std::vector<double> LBetaClip(std::span<const double> g, double beta,
                              double clip_norm);
void LBetaClipInPlace(std::span<double> g, double beta, double clip_norm);

double LBetaNorm(std::span<const double> g, double beta);

}  // namespace ggdp

#endif  // GGDP_MECHANISMS_H_
