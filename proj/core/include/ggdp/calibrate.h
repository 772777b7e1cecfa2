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

#ifndef GGDP_CALIBRATE_H_
#define GGDP_CALIBRATE_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "ggdp/accountant.h"
#include "ggdp/random.h"

namespace ggdp {

struct PrivacyTarget {
  double epsilon = 1.0;
  double delta = 1e-5;
  double tolerance = 0.05;  // accepted |eps(sigma) - epsilon|
  std::int64_t compositions = 1;
  std::optional<double> sample_rate;
  double sensitivity = 1.0;

  void Validate() const;
};

// Point estimate of epsilon at `target.delta` for N_beta(0, sigma) under the
// target's composition/sampling. The discretization seed is derived from
// (seed, beta) only: probes at different sigma share their random stream.
double EpsilonForSigma(double beta, double sigma, const PrivacyTarget& target,
                       const AccountOptions& options, std::uint64_t seed);

struct SigmaSolution {
  double sigma = 0.0;          // conservative end of the final bracket
  double epsilon = 0.0;        // accountant epsilon at sigma
  double bracket_low = 0.0;    // final bracket [low, sigma]
  int probes = 0;
};

// Binary-search sigma solver. Halves sigma_min until eps(sigma_min) exceeds
// the target, doubles sigma_max until eps(sigma_max) <= target, then bisects
// until target - eps(sigma_max) <= tolerance. Throws SolverError when the
// target cannot be bracketed within 200 steps or when observations violate
// monotonicity by more than tolerance / 2.
SigmaSolution SolveSigma(double beta, const PrivacyTarget& target,
                         const AccountOptions& options, Rng& rng);

struct FamilyRow {
  double beta = 0.0;
  double sigma = 0.0;
  double epsilon = 0.0;
  double bracket_low = 0.0;
};

struct Family {
  PrivacyTarget target;
  std::vector<FamilyRow> rows;  // sorted by beta
  bool sigma_increasing = true;  // report flag only
};

// Solves sigma for every beta (1 <= beta <= 64) at a common target.
Family EquivalentFamily(std::vector<double> betas, const PrivacyTarget& target,
                        const AccountOptions& options, Rng& rng);

struct TailRow {
  double beta = 0.0;
  double sigma = 0.0;
  double cutoff = 0.0;
  double weight = 0.0;
  std::optional<double> smoothed;
};

// w = Pr[|Z| >= cutoff] for each family row and cutoff. With smooth = true
// each cutoff's beta-series also gets a Savitzky-Golay (order 2, window 5)
// smoothed copy; raw weights are always present.
std::vector<TailRow> TailWeights(const Family& family,
                                 const std::vector<double>& cutoffs,
                                 bool smooth);

struct TailQuery {
  std::vector<double> cutoffs;
  PrivacyTarget target;
  std::vector<double> betas;
  bool smooth = false;
};

std::vector<TailRow> TailWeight(const TailQuery& query,
                                const AccountOptions& options, Rng& rng);

// Savitzky-Golay smoothing with a least-squares polynomial fit; the first
// and last window/2 points are taken from the fit of the edge window.
std::vector<double> SavitzkyGolay(const std::vector<double>& values,
                                  int window = 5, int order = 2);

}  // namespace ggdp

#endif  // GGDP_CALIBRATE_H_
