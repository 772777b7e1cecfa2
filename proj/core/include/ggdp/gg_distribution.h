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

#ifndef GGDP_GG_DISTRIBUTION_H_
#define GGDP_GG_DISTRIBUTION_H_

#include <random>
#include <span>
#include <vector>

#include "ggdp/random.h"

namespace ggdp {

inline constexpr double kMaxBeta = 64.0;
inline constexpr double kMaxSigma = 1e12;

// Shape/scale pair of a zero-centred Generalized Gaussian N_beta(0, sigma)
// in scale form:
//
//   pdf(x) = beta / (2 sigma Gamma(1/beta)) * exp(-(|x - mu| / sigma)^beta)
//
// beta = 1 is Laplace with scale sigma, beta = 2 is Normal with standard
// deviation sigma / sqrt(2).
class GGParams {
 public:
  // Throws ParameterError unless 1 <= beta <= 64 and 0 < sigma <= 1e12.
  GGParams(double beta, double sigma);

  // Converts from the "power" form exp(-|x - mu|^beta / s), where
  // s = sigma^beta.
  static GGParams FromPowerForm(double beta, double power_sigma);

  double beta() const { return beta_; }
  double sigma() const { return sigma_; }
  double power_form_sigma() const;

  // Same shape, scale multiplied by factor (used for sigma * sensitivity).
  GGParams Scaled(double factor) const { return {beta_, sigma_ * factor}; }

  friend bool operator==(const GGParams&, const GGParams&) = default;

 private:
  double beta_;
  double sigma_;
};

double GGPdf(const GGParams& params, double mu, double x);

// CDF of N_beta(0, sigma):
//   F(x) = 1/2 + sign(x)/2 * P(1/beta, (|x|/sigma)^beta).
double GGCdf(const GGParams& params, double x);

// 1 - F(x) without cancellation in the upper tail.
double GGSurvival(const GGParams& params, double x);

// Pr[|Z| >= cutoff] = Q(1/beta, (cutoff/sigma)^beta).
double GGTwoSidedTail(const GGParams& params, double cutoff);

// Inverse CDF; u must lie in (0, 1).
double GGQuantile(const GGParams& params, double u);

// E|Z|^order = sigma^order * Gamma((order + 1)/beta) / Gamma(1/beta).
double GGAbsoluteMoment(const GGParams& params, double order);

// Gamma-transform sampler: Z = S * sigma * G^(1/beta) with
// G ~ Gamma(1/beta, 1) and S a fair random sign. Holds the (stateful)
// gamma distribution, so use one instance per random stream.
class GGSampler {
 public:
  explicit GGSampler(const GGParams& params);

  double operator()(Rng& rng);
  void Fill(Rng& rng, std::span<double> out);

  const GGParams& params() const { return params_; }

 private:
  GGParams params_;
  double inv_beta_;
  std::gamma_distribution<double> gamma_;
};

std::vector<double> SampleGG(const GGParams& params, Rng& rng,
                             std::size_t count);

}  // namespace ggdp

#endif  // GGDP_GG_DISTRIBUTION_H_
