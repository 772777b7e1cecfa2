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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boost/math/distributions/normal.hpp"
#include "boost/math/quadrature/gauss_kronrod.hpp"
#include "boost/math/quadrature/tanh_sinh.hpp"
#include "boost/math/special_functions/gamma.hpp"
#include "boost/math/tools/roots.hpp"
#include "boost/multiprecision/cpp_dec_float.hpp"

namespace ggdp::oracle {
namespace {

using Mp = boost::multiprecision::cpp_dec_float_50;

double Phi(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace

double GGPdf(double beta, double sigma, double x) {
  return beta / (2.0 * sigma * boost::math::tgamma(1.0 / beta)) *
         std::exp(-std::pow(std::fabs(x) / sigma, beta));
}

double GGCdf(double beta, double sigma, double x) {
  const double p =
      boost::math::gamma_p(1.0 / beta, std::pow(std::fabs(x) / sigma, beta));
  return x >= 0 ? 0.5 + 0.5 * p : 0.5 - 0.5 * p;
}

double Integrate(const std::function<double(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  double error = 0.0;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &error);
}

double GaussianDelta(double epsilon, double s, double d) {
  return Phi(d / (2 * s) - epsilon * s / d) -
         std::exp(epsilon) * Phi(-d / (2 * s) - epsilon * s / d);
}

double GaussianEpsilon(double delta, double s, double d) {
  double hi = 1.0;
  while (GaussianDelta(hi, s, d) > delta) hi *= 2.0;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      [&](double e) { return GaussianDelta(e, s, d) - delta; }, 0.0, hi,
      boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (r.first + r.second);
}

double SubsampledGaussianPrvCdf(double s, double d, double q, bool add,
                                double y) {
  // Loss l(t) = (d^2 - 2 t d) / (2 s^2) is decreasing in t.
  const double var = s * s;
  auto t_of_loss = [&](double l) { return (d * d - 2.0 * var * l) / (2.0 * d); };
  const boost::math::normal_distribution<double> Q(0.0, s);
  const boost::math::normal_distribution<double> P(d, s);
  if (add) {
    // y = -log(1 - q + q e^{-l}) decreases in t.
    const double top = -std::log1p(-q);
    if (q < 1.0 && y >= top) return 1.0;
    const double inner = (std::exp(-y) - (1.0 - q)) / q;
    if (inner <= 0.0) return 1.0;
    const double t = t_of_loss(-std::log(inner));
    return boost::math::cdf(boost::math::complement(Q, t));
  }
  // y = log(1 - q + q e^{-l}) increases in t; t ~ (1 - q) Q + q P.
  const double bottom = std::log1p(-q);
  if (q < 1.0 && y <= bottom) return 0.0;
  const double inner = (std::exp(y) - (1.0 - q)) / q;
  if (inner <= 0.0) return 0.0;
  const double t = t_of_loss(-std::log(inner));
  return (1.0 - q) * boost::math::cdf(Q, t) + q * boost::math::cdf(P, t);
}

std::vector<double> CyclicConvolution(std::span<const double> a,
                                      std::span<const double> b) {
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      out[(i + l + n - n / 2) % n] += a[i] * b[l];
    }
  }
  return out;
}

double TotalVariation(std::span<const double> a, std::span<const double> b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::fabs(a[i] - b[i]);
  return 0.5 * tv;
}

Bounds ErrorBoundsMp(double s_in, double t_in, double n_in, double h_in,
                     double L_in, double k_in, double tail_single,
                     double tail_sum) {
  const Mp s(s_in), t(t_in), n(n_in), h(h_in), L(L_in), k(k_in);
  const Mp p1(tail_single), ps(tail_sum);
  const Mp root = sqrt(L / (n * h));
  const Mp eta = 2 * k * p1 + 4 * exp(-2 * s * s / (k * h * h)) +
                 4 * k * exp(-n * t * t / (2 * L * L)) +
                 8 * k * exp(-n * t * t / 2) + ps + 2 * k * (t + root);
  const Mp tau = s + k * (t + 2 * L * (t / 2 + root)) + 2 * k * (t / 2 + root);
  return {eta.convert_to<double>(), tau.convert_to<double>()};
}

double SubsampledLossMp(double sigma, double d, double q, double t) {
  const Mp tt(t), dd(d), ss(sigma), qq(q);
  const Mp loss = ((tt - dd) * (tt - dd) - tt * tt) / (ss * ss);
  const Mp v = log(1 - qq + qq * exp(-loss));
  return v.convert_to<double>();
}

double TwoClassHardmax(double beta, double sigma, double gap) {
  // Pr[Y1 - Y0 < gap] = int pdf(y) F(y + gap) dy.
  auto f = [&](double y) { return GGPdf(beta, sigma, y) * GGCdf(beta, sigma, y + gap); };
  const double inf = std::numeric_limits<double>::infinity();
  return Integrate(f, -inf, 0.0) + Integrate(f, 0.0, inf);
}

double KsTwoSample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

double KsOneSample(std::vector<double> a,
                   const std::function<double(double)>& cdf) {
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f,
                  f - static_cast<double>(i) / n});
  }
  return d;
}

double KsCritical(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace ggdp::oracle
