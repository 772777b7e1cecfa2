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

#include "ggdp/calibrate.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include "ggdp/errors.h"
#include "ggdp/gg_distribution.h"

namespace ggdp {
namespace {

constexpr int kMaxBracketSteps = 200;
constexpr int kMaxBisections = 200;

// Least-squares polynomial through (xs, ys), evaluated at x.
double PolyFitEval(const std::vector<double>& xs, const std::vector<double>& ys,
                   int order, double x) {
  const int n = order + 1;
  std::vector<double> a(static_cast<std::size_t>(n * (n + 1)), 0.0);
  auto at = [&](int r, int c) -> double& {
    return a[static_cast<std::size_t>(r * (n + 1) + c)];
  };
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) at(r, c) += std::pow(xs[i], r + c);
      at(r, n) += std::pow(xs[i], r) * ys[i];
    }
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(at(r, col)) > std::fabs(at(pivot, col))) pivot = r;
    }
    for (int c = 0; c <= n; ++c) std::swap(at(col, c), at(pivot, c));
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = at(r, col) / at(col, col);
      for (int c = col; c <= n; ++c) at(r, c) -= f * at(col, c);
    }
  }
  double value = 0.0;
  for (int r = 0; r < n; ++r) value += at(r, n) / at(r, r) * std::pow(x, r);
  return value;
}

}  // namespace

void PrivacyTarget::Validate() const {
  if (!(epsilon > 0.0)) throw ParameterError("target epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("target delta must lie in (0, 1)");
  }
  if (!(tolerance > 0.0)) throw ParameterError("tolerance must be > 0");
  if (compositions < 1) throw ParameterError("compositions must be >= 1");
  if (sample_rate && !(*sample_rate > 0.0 && *sample_rate <= 1.0)) {
    throw ParameterError("sample rate must lie in (0, 1]");
  }
  if (!(sensitivity > 0.0)) throw ParameterError("sensitivity must be > 0");
}

double EpsilonForSigma(double beta, double sigma, const PrivacyTarget& target,
                       const AccountOptions& options, std::uint64_t seed) {
  MechanismSpec spec{GGParams(beta, sigma), target.sensitivity,
                     target.sample_rate, target.compositions};
  // Every sigma probe of one beta reuses the same random stream, so the
  // estimated curve varies smoothly with sigma instead of jittering.
  const std::uint64_t probe_seed = DeriveSeed(seed, {RealTag(beta)});
  const MechanismPrvs prvs = DiscretizeMechanism(spec, options, probe_seed);
  const std::vector<DiscretePRV> composed = prvs.Composed(spec.compositions);
  return EpsilonOfDelta(composed, target.delta);
}

SigmaSolution SolveSigma(double beta, const PrivacyTarget& target,
                         const AccountOptions& options, Rng& rng) {
  target.Validate();
  GGParams(beta, 1.0);  // validates beta
  const std::uint64_t seed = rng();
  const double tol = target.tolerance;

  SigmaSolution out;
  std::map<double, double> seen;  // sigma -> epsilon
  auto eps = [&](double sigma) {
    if (auto it = seen.find(sigma); it != seen.end()) return it->second;
    const double e = EpsilonForSigma(beta, sigma, target, options, seed);
    ++out.probes;
    // Larger sigma must not cost noticeably more privacy.
    for (const auto& [s, other] : seen) {
      if ((s < sigma && e > other + 0.5 * tol) ||
          (s > sigma && other > e + 0.5 * tol)) {
        throw SolverError(
            "accountant observations are not monotone in sigma: eps(" +
            std::to_string(std::min(s, sigma)) + ") < eps(" +
            std::to_string(std::max(s, sigma)) + ")");
      }
    }
    seen.emplace(sigma, e);
    return e;
  };

  double sigma_min = 1.0;
  double sigma_max = 1.0;
  int steps = 0;
  while (eps(sigma_min) <= target.epsilon) {
    sigma_min /= 2.0;
    if (++steps > kMaxBracketSteps || sigma_min < 1e-300) {
      throw SolverError("could not find a sigma with epsilon above target");
    }
  }
  steps = 0;
  while (eps(sigma_max) > target.epsilon) {
    sigma_max *= 2.0;
    if (++steps > kMaxBracketSteps || sigma_max > kMaxSigma) {
      throw SolverError("could not find a sigma with epsilon below target");
    }
  }
  steps = 0;
  while (target.epsilon - eps(sigma_max) > tol) {
    const double mid = 0.5 * (sigma_min + sigma_max);
    if (mid <= sigma_min || mid >= sigma_max || ++steps > kMaxBisections) {
      throw SolverError("bisection stalled before reaching the tolerance");
    }
    if (eps(mid) > target.epsilon) {
      sigma_min = mid;
    } else {
      sigma_max = mid;
    }
  }
  out.sigma = sigma_max;
  out.epsilon = eps(sigma_max);
  out.bracket_low = sigma_min;
  return out;
}

Family EquivalentFamily(std::vector<double> betas, const PrivacyTarget& target,
                        const AccountOptions& options, Rng& rng) {
  target.Validate();
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
  const std::uint64_t seed = rng();
  Family family;
  family.target = target;
  for (double beta : betas) {
    if (!(beta >= 1.0 && beta <= kMaxBeta)) {
      throw ParameterError("family betas must lie in [1, 64]");
    }
    Rng local = MakeRng(seed, {RealTag(beta)});
    const SigmaSolution s = SolveSigma(beta, target, options, local);
    family.rows.push_back({beta, s.sigma, s.epsilon, s.bracket_low});
  }
  for (std::size_t i = 1; i < family.rows.size(); ++i) {
    if (!(family.rows[i].sigma > family.rows[i - 1].sigma)) {
      family.sigma_increasing = false;
    }
  }
  return family;
}

std::vector<TailRow> TailWeights(const Family& family,
                                 const std::vector<double>& cutoffs,
                                 bool smooth) {
  std::vector<TailRow> out;
  for (double cutoff : cutoffs) {
    if (!(cutoff >= 0.0)) throw ParameterError("tail cutoff must be >= 0");
    std::vector<double> series;
    const std::size_t first = out.size();
    for (const FamilyRow& row : family.rows) {
      const double w = GGTwoSidedTail(GGParams(row.beta, row.sigma), cutoff);
      out.push_back({row.beta, row.sigma, cutoff, w, std::nullopt});
      series.push_back(w);
    }
    if (smooth) {
      const std::vector<double> s = SavitzkyGolay(series);
      for (std::size_t i = 0; i < s.size(); ++i) out[first + i].smoothed = s[i];
    }
  }
  return out;
}

std::vector<TailRow> TailWeight(const TailQuery& query,
                                const AccountOptions& options, Rng& rng) {
  const Family family =
      EquivalentFamily(query.betas, query.target, options, rng);
  return TailWeights(family, query.cutoffs, query.smooth);
}

std::vector<double> SavitzkyGolay(const std::vector<double>& values,
                                  int window, int order) {
  if (window < 1 || window % 2 == 0 || order >= window) {
    throw ParameterError("Savitzky-Golay needs an odd window > order");
  }
  const std::size_t n = values.size();
  const std::size_t w = static_cast<std::size_t>(window);
  if (n < w) return values;
  const std::size_t half = w / 2;
  std::vector<double> out(n);
  std::vector<double> xs(w);
  std::vector<double> ys(w);
  for (std::size_t i = 0; i < w; ++i) {
    xs[i] = static_cast<double>(i) - static_cast<double>(half);
  }
  for (std::size_t c = 0; c < n; ++c) {
    // Window start, pinned at the series edges.
    const std::size_t start = std::min(c < half ? 0 : c - half, n - w);
    for (std::size_t i = 0; i < w; ++i) ys[i] = values[start + i];
    const double x = static_cast<double>(c) -
                     static_cast<double>(start) - static_cast<double>(half);
    out[c] = PolyFitEval(xs, ys, order, x);
  }
  return out;
}

}  // namespace ggdp
