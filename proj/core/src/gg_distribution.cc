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

#include "ggdp/gg_distribution.h"

#include <cmath>
#include <string>

#include "ggdp/errors.h"
#include "ggdp/special_functions.h"

namespace ggdp {

GGParams::GGParams(double beta, double sigma) : beta_(beta), sigma_(sigma) {
  if (!(beta >= 1.0 && beta <= kMaxBeta)) {
    throw ParameterError("beta must lie in [1, 64], got " +
                         std::to_string(beta));
  }
  if (!(sigma > 0.0 && sigma <= kMaxSigma)) {
    throw ParameterError("sigma must lie in (0, 1e12], got " +
                         std::to_string(sigma));
  }
}

GGParams GGParams::FromPowerForm(double beta, double power_sigma) {
  if (!(power_sigma > 0.0)) {
    throw ParameterError("power-form sigma must be positive");
  }
  return GGParams(beta, std::pow(power_sigma, 1.0 / beta));
}

double GGParams::power_form_sigma() const { return std::pow(sigma_, beta_); }

double GGPdf(const GGParams& params, double mu, double x) {
  const double beta = params.beta();
  const double sigma = params.sigma();
  const double z = std::pow(std::fabs(x - mu) / sigma, beta);
  return std::exp(std::log(beta) - std::log(2.0 * sigma) -
                  std::lgamma(1.0 / beta) - z);
}

double GGCdf(const GGParams& params, double x) {
  if (std::isnan(x)) throw ParameterError("cdf of NaN");
  if (x == 0.0) return 0.5;
  const double z = std::pow(std::fabs(x) / params.sigma(), params.beta());
  const double half_tail = 0.5 * RegularizedGammaQ(1.0 / params.beta(), z);
  return x < 0.0 ? half_tail : 1.0 - half_tail;
}

double GGSurvival(const GGParams& params, double x) {
  return GGCdf(params, -x);
}

double GGTwoSidedTail(const GGParams& params, double cutoff) {
  if (!(cutoff >= 0.0)) throw ParameterError("tail cutoff must be >= 0");
  const double z = std::pow(cutoff / params.sigma(), params.beta());
  return RegularizedGammaQ(1.0 / params.beta(), z);
}

double GGQuantile(const GGParams& params, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw ParameterError("quantile needs u in (0, 1), got " +
                         std::to_string(u));
  }
  if (u == 0.5) return 0.0;
  const double a = 1.0 / params.beta();
  const double tail = u < 0.5 ? 2.0 * u : 2.0 * (1.0 - u);
  const double z = InverseGammaQ(a, tail);
  const double magnitude = params.sigma() * std::pow(z, a);
  return u < 0.5 ? -magnitude : magnitude;
}

double GGAbsoluteMoment(const GGParams& params, double order) {
  if (!(order >= 0.0)) throw ParameterError("moment order must be >= 0");
  const double beta = params.beta();
  return std::pow(params.sigma(), order) *
         std::exp(std::lgamma((order + 1.0) / beta) - std::lgamma(1.0 / beta));
}

GGSampler::GGSampler(const GGParams& params)
    : params_(params),
      inv_beta_(1.0 / params.beta()),
      gamma_(1.0 / params.beta(), 1.0) {}

double GGSampler::operator()(Rng& rng) {
  const double g = gamma_(rng);
  const bool negative = (rng() >> 63) != 0;
  double magnitude;
  if (params_.beta() == 1.0) {
    magnitude = g;
  } else if (params_.beta() == 2.0) {
    magnitude = std::sqrt(g);
  } else {
    magnitude = std::pow(g, inv_beta_);
  }
  magnitude *= params_.sigma();
  return negative ? -magnitude : magnitude;
}

void GGSampler::Fill(Rng& rng, std::span<double> out) {
  for (double& v : out) v = (*this)(rng);
}

std::vector<double> SampleGG(const GGParams& params, Rng& rng,
                             std::size_t count) {
  if (count == 0) throw ParameterError("sample count must be >= 1");
  GGSampler sampler(params);
  std::vector<double> out(count);
  sampler.Fill(rng, out);
  return out;
}

}  // namespace ggdp
