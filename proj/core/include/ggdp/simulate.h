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

#ifndef GGDP_SIMULATE_H_
#define GGDP_SIMULATE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ggdp/accountant.h"
#include "ggdp/calibrate.h"
#include "ggdp/gg_distribution.h"
#include "ggdp/mechanisms.h"
#include "ggdp/random.h"

namespace ggdp {

// Hardmax-utility sweep settings.
struct SimConfig {
  int num_classes = 2;
  std::int64_t total_votes = 1000;
  std::vector<double> gaps;  // runner-up parameters r in (0, 1)
  std::int64_t histograms_per_gap = 500;
  std::int64_t trials = 50;
  double epsilon = 1.0;
  double delta = 1e-5;
  std::vector<double> betas;

  // Throws ParameterError on N < 2, V < N, r outside (0, 1), empty grids or
  // non-positive counts.
  void Validate() const;

  // r = 0.001 followed by 0.005, 0.01, ..., 0.2.
  static std::vector<double> DefaultGaps();
};

// Vote histograms with total V and runner-up parameter r; class 0 always
// holds the most votes.
//   N = 2: x0 = round(V / (2 - r)), x1 = V - x0 (deterministic).
//   N > 2: x1 = floor(x0 (1 - r)), x2 = floor(0.95 x1) with
//          x0 = round(V / (1 + (1 - r) + 0.95 (N - 3)(1 - r) / 2));
//          classes 3..N-2 uniform on {0..x2}; the last class takes the
//          remainder. Draws whose remainder is negative or above x1 are
//          redrawn; after 10^4 failures ConstructionError is thrown.
// For N = 3 there are no uniform classes and class 2 is the remainder.
std::vector<VoteHistogram> MakeHistograms(int num_classes,
                                          std::int64_t total_votes, double r,
                                          std::int64_t count, Rng& rng);

struct UtilityEstimate {
  double value = 0.0;
  double std_error = 0.0;  // binomial standard error of the frequency
};

// Frequency with which GGNMax returns each histogram's unnoised argmax,
// pooled over `trials` runs per histogram.
UtilityEstimate HardmaxUtility(const std::vector<VoteHistogram>& histograms,
                               const GGParams& noise, std::int64_t trials,
                               Rng& rng);

struct UtilityCurve {
  double beta = 0.0;
  double sigma = 0.0;
  std::vector<double> gaps;
  std::vector<UtilityEstimate> utility;
};

// Utility at every gap of cfg. Histograms depend only on (seed, r), so
// curves for different noise settings are evaluated on the same data.
UtilityCurve HardmaxCurve(const SimConfig& cfg, const GGParams& noise,
                          std::uint64_t seed);

// Trapezoidal area of each curve over r in [0, 0.1] (points outside are
// ignored), divided by the largest area. All curves must share the gaps.
std::vector<double> AucOverGap(const std::vector<UtilityCurve>& curves);

struct HardmaxSweep {
  Family family;
  std::vector<UtilityCurve> curves;  // one per family row
  std::vector<double> auc;
};

// Solves sigma for every beta at (epsilon, delta) and simulates each.
HardmaxSweep RunHardmaxSweep(const SimConfig& cfg,
                             const AccountOptions& options, Rng& rng);

// Histogram CSV with header class_0,...,class_{N-1},true_label. Throws
// InputError naming the row on schema violations.
std::vector<VoteHistogram> LoadHistogramCsv(const std::string& path);
std::vector<VoteHistogram> ParseHistogramCsv(std::istream& in,
                                             const std::string& name);

struct LabelAccuracy {
  double mean = 0.0;
  double stddev = 0.0;  // across trials
};

// Per trial: the fraction of histograms whose GGNMax output equals the
// true label. Returns mean and sample standard deviation over trials.
LabelAccuracy PateLabelAccuracy(const std::vector<VoteHistogram>& histograms,
                                const GGParams& noise, std::int64_t trials,
                                Rng& rng);

// One line of the tidy metrics CSV
//   beta,sigma,epsilon,delta,metric,value,stderr
struct MetricRow {
  double beta = 0.0;
  double sigma = 0.0;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::string metric;
  double value = 0.0;
  double std_error = 0.0;
};

void WriteMetricsCsv(const std::vector<MetricRow>& rows, std::ostream& out);

}  // namespace ggdp

#endif  // GGDP_SIMULATE_H_
