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

#include "ggdp/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ggdp/errors.h"

namespace ggdp {
namespace {

void RequireFinite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError(std::string(what) + " is not finite");
  }
}

}  // namespace

int VoteHistogram::Argmax() const {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                          counts.begin());
}

void VoteHistogram::Validate() const {
  if (counts.size() < 2) throw InputError("a histogram needs >= 2 classes");
  for (std::int64_t c : counts) {
    if (c < 0) throw InputError("vote counts must be non-negative");
  }
  if (true_label && (*true_label < 0 ||
                     *true_label >= static_cast<int>(counts.size()))) {
    throw InputError("true label out of range");
  }
}

std::vector<double> GGMechanism(std::span<const double> f_value,
                                double sensitivity, const GGParams& noise,
                                Rng& rng) {
  RequireFinite(f_value, "query value");
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw ParameterError("sensitivity must be positive and finite");
  }
  GGSampler sampler(noise.Scaled(sensitivity));
  std::vector<double> out(f_value.begin(), f_value.end());
  for (double& v : out) v += sampler(rng);
  return out;
}

std::vector<double> SGGMechanism(const SumQuery& query, double sensitivity,
                                 const GGParams& noise, double sample_rate,
                                 Rng& rng) {
  if (!(sample_rate > 0.0 && sample_rate <= 1.0)) {
    throw ParameterError("sample rate must lie in (0, 1]");
  }
  std::vector<double> sum(query.dimension, 0.0);
  std::bernoulli_distribution include(sample_rate);
  for (std::size_t i = 0; i < query.num_records; ++i) {
    if (sample_rate < 1.0 && !include(rng)) continue;
    query.contribute(i, sum);
  }
  return GGMechanism(sum, sensitivity, noise, rng);
}

int GGNMax(std::span<const double> counts, const GGParams& noise, Rng& rng) {
  if (counts.size() < 2) throw InputError("GGNMax needs >= 2 classes");
  RequireFinite(counts, "vote count");
  GGSampler sampler(noise);
  int best = 0;
  double best_value = counts[0] + sampler(rng);
  for (std::size_t i = 1; i < counts.size(); ++i) {
    const double v = counts[i] + sampler(rng);
    if (v > best_value) {
      best_value = v;
      best = static_cast<int>(i);
    }
  }
  return best;
}

int GGNMax(const VoteHistogram& histogram, const GGParams& noise, Rng& rng) {
  histogram.Validate();
  std::vector<double> counts(histogram.counts.begin(), histogram.counts.end());
  return GGNMax(counts, noise, rng);
}

double LBetaNorm(std::span<const double> g, double beta) {
  double scale = 0.0;
  for (double x : g) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double x : g) sum += std::pow(std::fabs(x) / scale, beta);
  return scale * std::pow(sum, 1.0 / beta);
}

void LBetaClipInPlace(std::span<double> g, double beta, double clip_norm) {
  if (!(clip_norm > 0.0)) throw ParameterError("clip norm must be > 0");
  if (!(beta >= 1.0)) throw ParameterError("clip beta must be >= 1");
  RequireFinite(g, "gradient");
  const double norm = LBetaNorm(g, beta);
  if (norm <= clip_norm) return;
  const double factor = clip_norm / norm;
  for (double& x : g) x *= factor;
}

std::vector<double> LBetaClip(std::span<const double> g, double beta,
                              double clip_norm) {
  std::vector<double> out(g.begin(), g.end());
  LBetaClipInPlace(out, beta, clip_norm);
  return out;
}

}  // namespace ggdp
