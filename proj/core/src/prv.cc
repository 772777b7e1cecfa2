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

#include "ggdp/prv.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ggdp/errors.h"
#include "ggdp/special_functions.h"

namespace ggdp {
namespace {

// (d / sigma)^beta with exact fast paths for the Laplace and Gaussian cases.
inline double ScaledPower(double d, double inv_sigma, double beta) {
  const double r = d * inv_sigma;
  if (beta == 1.0) return r;
  if (beta == 2.0) return r * r;
  return std::pow(r, beta);
}

// Laplace losses obey |l| <= |d| / sigma exactly; the subtraction of two
// rounded absolute values can overshoot by an ulp.
inline double ClampLaplace(double loss, double bound, double beta) {
  return beta == 1.0 ? std::clamp(loss, -bound, bound) : loss;
}

// log(1 - q + q e^{x}) evaluated as a log-sum-exp.
inline double LogMixture(double log1m_q, double log_q, double x) {
  const double b = log_q + x;
  const double hi = std::max(log1m_q, b);
  const double lo = std::min(log1m_q, b);
  return hi + std::log1p(std::exp(lo - hi));
}

inline double Canonical(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void MechanismSpec::Validate() const {
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw ParameterError("sensitivity must be positive and finite");
  }
  if (sample_rate && !(*sample_rate > 0.0 && *sample_rate <= 1.0)) {
    throw ParameterError("sample rate must lie in (0, 1], got " +
                         std::to_string(*sample_rate));
  }
  if (compositions < 1) throw ParameterError("compositions must be >= 1");
}

double LossFunction(const GGParams& noise, double sensitivity, double t) {
  const double inv_sigma = 1.0 / noise.sigma();
  return ClampLaplace(
      ScaledPower(std::fabs(t - sensitivity), inv_sigma, noise.beta()) -
          ScaledPower(std::fabs(t), inv_sigma, noise.beta()),
      std::fabs(sensitivity) * inv_sigma, noise.beta());
}

double SubsampledLossFunction(const GGParams& noise, double sensitivity,
                              double sample_rate, double t,
                              LossDirection direction) {
  if (!(sample_rate > 0.0 && sample_rate <= 1.0)) {
    throw ParameterError("sample rate must lie in (0, 1]");
  }
  const double loss = LossFunction(noise, sensitivity, t);
  double remove;
  if (sample_rate == 1.0) {
    remove = -loss;
  } else {
    remove = LogMixture(std::log1p(-sample_rate), std::log(sample_rate), -loss);
  }
  return direction == LossDirection::kRemove ? remove : -remove;
}

PrvSampler MakePrvSampler(const MechanismSpec& spec, LossDirection direction) {
  spec.Validate();
  const GGParams noise = spec.noise;
  const double delta = spec.sensitivity;
  const double q = spec.sample_rate.value_or(1.0);
  const double beta = noise.beta();
  const double inv_sigma = 1.0 / noise.sigma();
  const double bound = delta * inv_sigma;

  // Loss l(t) for t drawn from Q (t = z) or from P (t = delta - z).
  auto loss_from_q = [=](double z) {
    return ClampLaplace(ScaledPower(std::fabs(z - delta), inv_sigma, beta) -
                            ScaledPower(std::fabs(z), inv_sigma, beta),
                        bound, beta);
  };
  auto loss_from_p = [=](double z) {
    return ClampLaplace(ScaledPower(std::fabs(z), inv_sigma, beta) -
                            ScaledPower(std::fabs(delta - z), inv_sigma, beta),
                        bound, beta);
  };

  if (q == 1.0) {
    // Both directions coincide draw for draw: -l(delta - z) == l(z).
    return [=](Rng& rng, std::span<double> out) {
      GGSampler gg(noise);
      if (direction == LossDirection::kAdd) {
        for (double& v : out) v = loss_from_q(gg(rng));
      } else {
        for (double& v : out) v = -loss_from_p(gg(rng));
      }
    };
  }

  const double log1m_q = std::log1p(-q);
  const double log_q = std::log(q);
  if (direction == LossDirection::kAdd) {
    return [=](Rng& rng, std::span<double> out) {
      GGSampler gg(noise);
      for (double& v : out) {
        v = -LogMixture(log1m_q, log_q, -loss_from_q(gg(rng)));
      }
    };
  }
  return [=](Rng& rng, std::span<double> out) {
    GGSampler gg(noise);
    for (double& v : out) {
      const bool from_p = Canonical(rng) < q;
      const double z = gg(rng);
      const double loss = from_p ? loss_from_p(z) : loss_from_q(z);
      v = LogMixture(log1m_q, log_q, -loss);
    }
  };
}

std::vector<double> SamplePrv(const MechanismSpec& spec,
                              LossDirection direction, Rng& rng,
                              std::size_t count) {
  if (count == 0) throw ParameterError("sample count must be >= 1");
  PrvSampler sampler = MakePrvSampler(spec, direction);
  std::vector<double> out(count);
  sampler(rng, out);
  return out;
}

double ReferencePrvCdf(ReferenceMechanism kind, double scale,
                       double sensitivity, double x) {
  if (!(scale > 0.0) || !(sensitivity > 0.0)) {
    throw ParameterError("reference PRV needs positive scale and sensitivity");
  }
  if (kind == ReferenceMechanism::kGaussian) {
    const double mean = sensitivity * sensitivity / (2.0 * scale * scale);
    const double sd = sensitivity / scale;
    return NormalCdf((x - mean) / sd);
  }
  // Laplace: T <= 0 gives the atom +c (mass 1/2), T >= D the atom -c
  // (mass e^{-c}/2), and 0 < T < D maps linearly onto (-c, c).
  const double c = sensitivity / scale;
  if (x < -c) return 0.0;
  if (x >= c) return 1.0;
  return 0.5 * std::exp(-(c - x) / 2.0);
}

std::vector<double> SampleMultidimPrv(const GGParams& noise,
                                      std::span<const double> mu,
                                      double sensitivity, Rng& rng,
                                      std::size_t count) {
  const double beta = noise.beta();
  if (beta > 2.0) {
    throw ParameterError(
        "multidimensional PRVs are only dimension-independent for beta <= 2");
  }
  if (mu.empty()) throw ParameterError("mu must have at least one coordinate");
  double norm = 0.0;
  for (double m : mu) norm += std::pow(std::fabs(m), beta);
  norm = std::pow(norm, 1.0 / beta);
  if (std::fabs(norm - sensitivity) > 1e-9) {
    throw ParameterError("||mu||_beta = " + std::to_string(norm) +
                         " does not match sensitivity " +
                         std::to_string(sensitivity));
  }
  const double inv_sigma = 1.0 / noise.sigma();
  GGSampler gg(noise);
  std::vector<double> out(count);
  for (double& v : out) {
    double sum = 0.0;
    for (double m : mu) {
      const double t = gg(rng);
      sum += ClampLaplace(ScaledPower(std::fabs(t - m), inv_sigma, beta) -
                              ScaledPower(std::fabs(t), inv_sigma, beta),
                          std::fabs(m) * inv_sigma, beta);
    }
    v = sum;
  }
  return out;
}

}  // namespace ggdp
