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

#include "ggdp/special_functions.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ggdp/errors.h"

namespace ggdp {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

// log of x^a e^-x / Gamma(a), the common prefactor of both expansions.
double LogPrefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

// Series for P(a, x); valid (and fast) for x < a + 1.
double GammaPSeries(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(LogPrefactor(a, x));
}

// Continued fraction for Q(a, x) (modified Lentz); valid for x >= a + 1.
double GammaQContinuedFraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(LogPrefactor(a, x)) * h;
}

void CheckArguments(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw ParameterError("incomplete gamma requires a > 0 and x >= 0, got a=" +
                         std::to_string(a) + " x=" + std::to_string(x));
  }
}

// Solves P(a, y) = target (lower = true) or Q(a, y) = target by Newton's
// method in u = log(y), safeguarded by a bisection bracket.
double InvertIncompleteGamma(double a, double target, bool lower) {
  if (!(target > 0.0 && target < 1.0)) {
    throw ParameterError("incomplete gamma inverse needs a probability in "
                         "(0, 1), got " + std::to_string(target));
  }
  // Residual with the sign arranged so that it increases with u.
  auto residual = [&](double u) {
    const double y = std::exp(u);
    return lower ? RegularizedGammaP(a, y) - target
                 : target - RegularizedGammaQ(a, y);
  };
  // d/du P(a, e^u) = e^u * y^(a-1) e^-y / Gamma(a) = exp(a u - y - lgamma a).
  auto slope = [&](double u) {
    const double y = std::exp(u);
    return std::exp(a * u - y - std::lgamma(a));
  };

  // Initial guess from the small-y asymptote P ~ y^a / Gamma(a + 1), or from
  // the tail asymptote Q ~ y^(a-1) e^-y / Gamma(a) when Q is tiny.
  double u;
  if (lower) {
    u = (std::log(target) + std::lgamma(a + 1.0)) / a;
  } else {
    u = std::log(std::max(a, -std::log(target) - std::lgamma(a)));
  }
  u = std::clamp(u, -700.0, 6.5);

  double lo = u, hi = u;
  while (residual(lo) > 0.0 && lo > -740.0) lo -= 2.0;
  while (residual(hi) < 0.0 && hi < 7.0) hi += 0.5;
  u = std::clamp(u, lo, hi);

  for (int it = 0; it < 400; ++it) {
    const double r = residual(u);
    if (r == 0.0) return std::exp(u);
    if (r < 0.0) {
      lo = u;
    } else {
      hi = u;
    }
    const double s = slope(u);
    double next = (s > 0.0 && std::isfinite(s)) ? u - r / s : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - u) <= 1e-15 * std::max(1.0, std::fabs(u))) {
      return std::exp(next);
    }
    u = next;
    if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(u))) break;
  }
  return std::exp(u);
}

}  // namespace

double RegularizedGammaP(double a, double x) {
  CheckArguments(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return GammaPSeries(a, x);
  return 1.0 - GammaQContinuedFraction(a, x);
}

double RegularizedGammaQ(double a, double x) {
  CheckArguments(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - GammaPSeries(a, x);
  return GammaQContinuedFraction(a, x);
}

double InverseGammaP(double a, double p) {
  if (p > 0.5 && p < 1.0) return InvertIncompleteGamma(a, 1.0 - p, false);
  return InvertIncompleteGamma(a, p, true);
}

double InverseGammaQ(double a, double q) {
  if (q > 0.5 && q < 1.0) return InvertIncompleteGamma(a, 1.0 - q, true);
  return InvertIncompleteGamma(a, q, false);
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace ggdp
