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

#ifndef GGDP_PRV_H_
#define GGDP_PRV_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ggdp/gg_distribution.h"
#include "ggdp/random.h"

namespace ggdp {

// One GG mechanism instance as seen by the accountant. The sensitivity is
// measured in the l_beta norm matching noise.beta(); the noise actually
// added is N_beta(0, sigma * sensitivity) in the mechanisms module, but for
// accounting only the ratio sensitivity / sigma matters.
struct MechanismSpec {
  GGParams noise;
  double sensitivity = 1.0;
  std::optional<double> sample_rate;  // Poisson rate q in (0, 1]
  std::int64_t compositions = 1;

  // Throws ParameterError on sensitivity <= 0, q outside (0, 1] or k < 1.
  void Validate() const;
};

// Which ordering of the dominating pair a PRV describes.
//
// With Q = N_beta(0, sigma), P = N_beta(Delta, sigma) and the Poisson mixture
// M = (1 - q) Q + q P:
//   kAdd:    log(Q(t) / M(t)),  t ~ Q   (for q absent: log(Q/P), t ~ Q)
//   kRemove: log(M(t) / Q(t)),  t ~ M   (for q absent: log(P/Q), t ~ P)
// kAdd is the direction whose privacy curve the plain accountant reports.
enum class LossDirection { kRemove, kAdd };

// l(t) = (|t - Delta|^beta - |t|^beta) / sigma^beta = log(Q(t) / P(t)).
double LossFunction(const GGParams& noise, double sensitivity, double t);

// Log-ratio of the Poisson-subsampled pair; see LossDirection.
//   kRemove: log(1 - q + q e^{-l(t)}),  kAdd: -log(1 - q + q e^{-l(t)}).
double SubsampledLossFunction(const GGParams& noise, double sensitivity,
                              double sample_rate, double t,
                              LossDirection direction);

// A block sampler of privacy-loss values. Implementations must be
// deterministic functions of the Rng state.
using PrvSampler = std::function<void(Rng&, std::span<double>)>;

// Sampler for a single (uncomposed) invocation of spec in the given
// direction. With q == 1 the output equals the plain sampler draw for draw.
PrvSampler MakePrvSampler(const MechanismSpec& spec, LossDirection direction);

std::vector<double> SamplePrv(const MechanismSpec& spec,
                              LossDirection direction, Rng& rng,
                              std::size_t count);

enum class ReferenceMechanism { kGaussian, kLaplace };

// Exact CDF of the PRV (kAdd direction) of the classic mechanisms:
//   kGaussian: noise std `scale`, PRV ~ Normal(D^2 / 2s^2, D^2 / s^2);
//   kLaplace:  Laplace scale `scale`, PRV = (|T - D| - |T|) / b, which has
//              atoms at +-D/b.
double ReferencePrvCdf(ReferenceMechanism kind, double scale,
                       double sensitivity, double x);

// Draws sum_i (|t_i - mu_i|^beta - |t_i|^beta) / sigma^beta with t_i i.i.d.
// N_beta(0, sigma). Requires beta <= 2 and ||mu||_beta == sensitivity
// within 1e-9 (ParameterError otherwise).
std::vector<double> SampleMultidimPrv(const GGParams& noise,
                                      std::span<const double> mu,
                                      double sensitivity, Rng& rng,
                                      std::size_t count);

}  // namespace ggdp

#endif  // GGDP_PRV_H_
