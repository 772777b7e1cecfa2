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

#ifndef GGDP_ACCOUNTANT_H_
#define GGDP_ACCOUNTANT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlohmann/json.hpp"
#include "ggdp/prv.h"
#include "ggdp/random.h"

namespace ggdp {

// Grid and sampling parameters of the sampled PRV accountant.
//
// The grid has bins() = 2L/h cells addressed cyclically (sums are taken
// mod 2L). A single discretized PRV only occupies grid indices
// i in [-m, m] with m = L/h - 1; index -L/h is reserved for wrapped mass.
struct AccountantConfig {
  double mesh_h = 0.0;
  double trunc_L = 0.0;
  std::int64_t samples_n = 0;  // per PRV; the sampler draws 2n accepted
  // Free parameters of the error bound. Unset means the defaults
  // s = 10 h sqrt(k) and t = 10 L / sqrt(n).
  std::optional<double> hoeffding_s;
  std::optional<double> sampling_t;

  // h = 2L / bins.
  static AccountantConfig FromBins(double trunc_L, std::size_t bins,
                                   std::int64_t samples_n);

  std::size_t bins() const;
  std::int64_t half_width() const { return static_cast<std::int64_t>(bins() / 2) - 1; }
  double s(std::int64_t k) const;
  double t() const;

  // Throws ConfigError unless h > 0, L > 0, L/h is an integer >= 2 and
  // n >= 10^4.
  void Validate() const;

  nlohmann::json ToJson() const;
};

// A truncated, discretized PRV: mass probs[j] sits at
//   (j - bins/2) * h + offset.
struct DiscretePRV {
  double mesh_h = 0.0;
  double trunc_L = 0.0;
  double offset = 0.0;
  std::vector<double> probs;
  std::string source;
  // Sampling diagnostics (exact discretizations leave these at defaults).
  std::uint64_t draws = 0;
  std::uint64_t rejected = 0;
  double acceptance_rate = 1.0;

  std::size_t bins() const { return probs.size(); }
  double Point(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(bins() / 2)) * mesh_h +
           offset;
  }
  double Mean() const;
  double TotalMass() const;
};

// Builds a DiscretePRV from 2n draws of `sampler` that fall in [-L, L]
// (rejection sampling). The first n draws give the bin masses, the second n
// the mean correction offset, clamped to [0, h/2]. Deterministic in the Rng
// state and independent of the thread count. Throws TruncationError when
// fewer than 10% of draws are accepted.
DiscretePRV DiscretizeFromSamples(const PrvSampler& sampler,
                                  const AccountantConfig& config, Rng& rng);

// Exact discretization from a CDF: bin masses are CDF differences
// conditioned on [-L, L]; the offset comes from the exact conditional mean.
// Throws TruncationError if less than half the mass lies in [-L, L].
DiscretePRV DiscretizeFromCdf(const std::function<double(double)>& cdf,
                              const AccountantConfig& config);

// Sum of independent PRVs, each taken `multiplicity` times, via FFT with
// wraparound modulo 2L. All inputs must share the same grid.
DiscretePRV Compose(
    std::span<const std::pair<DiscretePRV, std::int64_t>> prvs);
DiscretePRV ComposeSelf(const DiscretePRV& prv, std::int64_t k);

// delta(eps) = sum_y q(y) max(0, 1 - e^{eps - y}).
double DeltaOfEpsilon(const DiscretePRV& prv, double epsilon);

// Pointwise max over several PRVs (the directions of one mechanism).
double DeltaOfEpsilon(std::span<const DiscretePRV> prvs, double epsilon);

// Smallest epsilon >= 0 with delta(epsilon) <= delta (bisection to 1e-12).
// Throws RangeError if delta is not reachable.
double EpsilonOfDelta(const DiscretePRV& prv, double delta);
double EpsilonOfDelta(std::span<const DiscretePRV> prvs, double delta);

struct ErrorBounds {
  double eta = 0.0;  // probability slack
  double tau = 0.0;  // epsilon shift
};

// Error bounds of the sampled accountant for k compositions:
//   eta = 2k p1 + 4 e^{-2s^2/(k h^2)} + 4k e^{-n t^2/(2L^2)} + 8k e^{-n t^2/2}
//         + p_sum + 2k (t + sqrt(L/(n h)))
//   tau = s + k (t + 2L (t/2 + sqrt(L/(n h)))) + 2k (t/2 + sqrt(L/(n h)))
// where p1 = Pr[|Y_i| >= L] and p_sum = Pr[|sum Y_i| >= L - t].
ErrorBounds ComputeErrorBounds(const AccountantConfig& config, std::int64_t k,
                               double tail_single, double tail_sum);

// One-sided Clopper-Pearson upper confidence bound on a binomial rate.
double ClopperPearsonUpper(std::uint64_t successes, std::uint64_t trials,
                           double confidence);

// Tabulated privacy curve with its error bounds.
struct PrivacyCurve {
  std::vector<double> epsilon;
  std::vector<double> delta;
  ErrorBounds bounds;
  nlohmann::json config;
  nlohmann::json mechanism;

  // {"epsilon": [...], "delta": [...], "eta": x, "tau": y,
  //  "config": {...}, "mechanism": {...}}
  nlohmann::json ToJson() const;
};

struct AccountOptions {
  std::size_t bins = std::size_t{1} << 19;
  std::int64_t samples_n = 5'000'000;
  std::int64_t pilot_samples = 10'000;
  double sigma_rule = 12.0;
  std::optional<double> trunc_L;  // overrides the pilot rule
  std::optional<double> hoeffding_s;
  std::optional<double> sampling_t;
  std::size_t curve_points = 201;
  bool error_bounds = true;
  std::int64_t tail_replicates = 2000;
};

// Both directions (for Poisson-subsampled specs) or just kAdd, discretized
// on a shared grid sized for spec.compositions.
struct MechanismPrvs {
  AccountantConfig config;
  std::vector<LossDirection> directions;
  std::vector<DiscretePRV> single;  // one per direction, uncomposed

  // Composes each direction k times.
  std::vector<DiscretePRV> Composed(std::int64_t k) const;
};

// Chooses L = max(k mean + rule sqrt(k) sd, 2 max|y|) from pilot draws of
// every direction.
double AutoTruncation(const MechanismSpec& spec, const AccountOptions& options,
                      std::uint64_t seed);

MechanismPrvs DiscretizeMechanism(const MechanismSpec& spec,
                                  const AccountOptions& options,
                                  std::uint64_t seed);

nlohmann::json MechanismToJson(const MechanismSpec& spec);

struct AccountingTarget {
  enum class Kind { kEpsilonForDelta, kDeltaForEpsilon };
  Kind kind;
  double value;

  static AccountingTarget EpsilonFor(double delta) {
    return {Kind::kEpsilonForDelta, delta};
  }
  static AccountingTarget DeltaFor(double epsilon) {
    return {Kind::kDeltaForEpsilon, epsilon};
  }
};

struct AccountingResult {
  double epsilon = 0.0;  // point estimate on the composed grid
  double delta = 0.0;
  ErrorBounds bounds;
  // Conservative ends: epsilon + tau and delta + eta.
  double epsilon_reported = 0.0;
  double delta_reported = 0.0;
  AccountantConfig config;
  PrivacyCurve curve;
};

// The sampled PRV accountant end to end for one (possibly subsampled,
// k-fold composed) GG mechanism.
AccountingResult Account(const MechanismSpec& spec,
                         const AccountOptions& options,
                         AccountingTarget target, Rng& rng);

// Accounts a homogeneous sequence of up to `max_compositions` runs of one
// mechanism. The PRVs are discretized once on a grid sized for the longest
// run; each query composes them for the requested number of runs.
class CompositionAccountant {
 public:
  CompositionAccountant(MechanismSpec step, std::int64_t max_compositions,
                        const AccountOptions& options, std::uint64_t seed);

  // Point estimate of epsilon after `steps` runs (0 for steps == 0).
  double Epsilon(std::int64_t steps, double delta) const;
  double Delta(std::int64_t steps, double epsilon) const;

  // Largest step count in [0, max_compositions] whose epsilon is at most
  // `epsilon`.
  std::int64_t MaxSteps(double epsilon, double delta) const;

  std::int64_t max_compositions() const { return max_compositions_; }
  const MechanismPrvs& prvs() const { return prvs_; }

 private:
  MechanismSpec step_;
  std::int64_t max_compositions_;
  MechanismPrvs prvs_;
};

}  // namespace ggdp

#endif  // GGDP_ACCOUNTANT_H_
