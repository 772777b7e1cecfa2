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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ggdp/accountant.h"
#include "ggdp/calibrate.h"
#include "ggdp/dataset.h"
#include "ggdp/dpsgd.h"
#include "ggdp/gg_distribution.h"
#include "ggdp/models.h"
#include "ggdp/prv.h"
#include "ggdp/random.h"
#include "ggdp/simulate.h"
#include "oracles.h"

namespace ggdp {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

MechanismSpec Spec(double beta, double sigma, std::int64_t k = 1,
                   std::optional<double> q = std::nullopt) {
  return MechanismSpec{GGParams(beta, sigma), 1.0, q, k};
}

DiscretePRV GaussianCdfPrv(double scale, const AccountantConfig& cfg) {
  return DiscretizeFromCdf(
      [scale](double x) {
        return ReferencePrvCdf(ReferenceMechanism::kGaussian, scale, 1.0, x);
      },
      cfg);
}

void Ac1(Outcome& o) {
  const auto start = Clock::now();
  Rng rng(kDefaultSeed);
  const AccountingResult r = Account(Spec(2.0, std::sqrt(2.0)), AccountOptions(),
                                     AccountingTarget::EpsilonFor(1e-5), rng);
  const double seconds = Seconds(start);
  const double analytic = oracle::GaussianEpsilon(1e-5, 1.0, 1.0);
  o.detail << "eps=" << r.epsilon << " analytic=" << analytic
           << " n=" << r.config.samples_n << " time=" << seconds << "s ";
  o.Check(std::abs(r.epsilon - analytic) <= 0.05, "|eps - analytic| <= 0.05");
  o.Check(seconds < 60.0, "runtime < 60 s");
}

void Ac2(Outcome& o) {
  Rng rng(kDefaultSeed);
  const AccountingResult r = Account(Spec(2.0, std::sqrt(2.0), 100), AccountOptions(),
                                     AccountingTarget::EpsilonFor(1e-5), rng);
  const DiscretePRV cdf_single = GaussianCdfPrv(1.0, r.config);
  const DiscretePRV cdf_composed = ComposeSelf(cdf_single, 100);
  const double cdf_eps = EpsilonOfDelta(cdf_composed, 1e-5);
  // Normal(50, 100) is the PRV of a Gaussian mechanism with std 1/10.
  const DiscretePRV normal = GaussianCdfPrv(0.1, r.config);
  const double tv = oracle::TotalVariation(cdf_composed.probs, normal.probs);
  o.detail << "eps=" << r.epsilon << " cdf_route=" << cdf_eps << " tv=" << tv << ' ';
  o.Check(std::abs(r.epsilon - cdf_eps) <= 0.1, "|eps - cdf route| <= 0.1");
  o.Check(tv <= 1e-3, "TV(composed, Normal(50,100)) <= 1e-3");
}

void Ac3(Outcome& o) {
  Rng rng(kDefaultSeed);
  const AccountingResult r = Account(Spec(1.0, 1.0), AccountOptions(),
                                     AccountingTarget::DeltaFor(1.01), rng);
  o.detail << "delta(1.01)=" << r.delta << ' ';
  o.Check(r.delta <= 1e-3, "delta <= 1e-3");
}

void Ac4(Outcome& o) {
  Rng rng(4);
  std::uniform_int_distribution<int> half(2, 32);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t bins = 2 * static_cast<std::size_t>(half(rng));
    auto random_prv = [&] {
      DiscretePRV p;
      p.mesh_h = 0.01;
      p.trunc_L = 0.005 * static_cast<double>(bins);
      for (std::size_t j = 0; j < bins; ++j) p.probs.push_back(unif(rng));
      const double s = std::accumulate(p.probs.begin(), p.probs.end(), 0.0);
      for (double& v : p.probs) v /= s;
      return p;
    };
    const DiscretePRV a = random_prv();
    const DiscretePRV b = random_prv();
    const std::vector<std::pair<DiscretePRV, std::int64_t>> pair = {{a, 1}, {b, 1}};
    const DiscretePRV fft = Compose(pair);
    worst = std::max(worst, oracle::TotalVariation(
                                fft.probs, oracle::CyclicConvolution(a.probs, b.probs)));
  }
  o.detail << "max_tv=" << worst << ' ';
  o.Check(worst <= 1e-8, "TV <= 1e-8");
}

void Ac5(Outcome& o) {
  struct Case {
    double s, t, n, h, L, k, p1, ps;
  };
  const std::vector<Case> cases = {
      {0.05, 1e-4, 1e7, 5e-4, 10.0, 1, 0.0, 0.0},
      {0.01, 1e-3, 5e6, 1e-4, 20.0, 10, 1e-9, 1e-7},
      {0.2, 5e-3, 1e6, 1e-3, 5.0, 100, 1e-6, 1e-4},
      {1.0, 1e-2, 1e5, 1e-2, 50.0, 1000, 0.0, 1e-3},
      {0.003, 2e-4, 2e7, 2e-5, 8.0, 3, 2e-8, 0.0},
  };
  double worst = 0.0;
  for (const Case& c : cases) {
    AccountantConfig cfg;
    cfg.mesh_h = c.h;
    cfg.trunc_L = c.L;
    cfg.samples_n = static_cast<std::int64_t>(c.n);
    cfg.hoeffding_s = c.s;
    cfg.sampling_t = c.t;
    const ErrorBounds b =
        ComputeErrorBounds(cfg, static_cast<std::int64_t>(c.k), c.p1, c.ps);
    const oracle::Bounds mp =
        oracle::ErrorBoundsMp(c.s, c.t, c.n, c.h, c.L, c.k, c.p1, c.ps);
    worst = std::max({worst, std::abs(b.eta / mp.eta - 1.0),
                      std::abs(b.tau / mp.tau - 1.0)});
  }
  o.detail << "max_rel_err=" << worst << ' ';
  o.Check(worst <= 1e-12, "relative error <= 1e-12");
}

// Probability that the Laplace PRV with mean vector mu attains its maximum
// sum_i |mu_i|: enumerate the sign pattern of the noise. A coordinate with
// mu_i != 0 contributes its maximum exactly when its noise lies on the far
// side of zero from mu_i; zero coordinates always contribute 0.
double LaplaceTopAtomByEnumeration(const std::vector<double>& mu) {
  const std::size_t d = mu.size();
  std::size_t hits = 0;
  for (std::size_t pattern = 0; pattern < (std::size_t{1} << d); ++pattern) {
    bool top = true;
    for (std::size_t i = 0; i < d; ++i) {
      const bool negative = (pattern >> i) & 1u;
      if (mu[i] > 0 && !negative) top = false;
      if (mu[i] < 0 && negative) top = false;
    }
    hits += top;
  }
  return static_cast<double>(hits) / static_cast<double>(std::size_t{1} << d);
}

void Ac6(Outcome& o) {
  const std::size_t n = 100000;
  double worst = 0.0;
  for (double beta : {1.0, 1.5, 2.0}) {
    for (std::size_t d : {2u, 8u, 32u}) {
      std::vector<double> mu(d, 0.0);
      mu[0] = 1.0;
      Rng a = MakeRng(kDefaultSeed, {RealTag(beta), d, 1});
      Rng b = MakeRng(kDefaultSeed, {RealTag(beta), d, 2});
      const auto multi = SampleMultidimPrv(GGParams(beta, 1.0), mu, 1.0, a, n);
      const auto single = SamplePrv(Spec(beta, 1.0), LossDirection::kAdd, b, n);
      worst = std::max(worst, oracle::KsTwoSample(multi, single));
    }
  }
  const std::vector<double> split = {0.5, 0.5};
  const std::vector<double> hot = {1.0, 0.0};
  Rng rng(6);
  auto atom = [](const std::vector<double>& ys) {
    return std::count_if(ys.begin(), ys.end(), [](double y) { return y >= 1.0 - 1e-12; }) /
           static_cast<double>(ys.size());
  };
  const double split_atom =
      atom(SampleMultidimPrv(GGParams(1.0, 1.0), split, 1.0, rng, n));
  const double hot_atom = atom(SampleMultidimPrv(GGParams(1.0, 1.0), hot, 1.0, rng, n));
  const double split_exact = LaplaceTopAtomByEnumeration(split);
  const double hot_exact = LaplaceTopAtomByEnumeration(hot);
  o.detail << "max_ks=" << worst << " split_atom=" << split_atom << " (exact "
           << split_exact << ") one_hot_atom=" << hot_atom << " (exact " << hot_exact
           << ") ";
  o.Check(worst < 0.01, "KS < 0.01");
  o.Check(std::abs(split_atom - split_exact) <= 0.02, "split atom within 0.02");
  o.Check(std::abs(hot_atom - hot_exact) <= 0.02, "one-hot atom within 0.02");
  o.Check(split_exact == 0.25 && hot_exact == 0.5, "enumeration gives 0.25 vs 0.5");
}

void Ac7(Outcome& o) {
  struct Tuple {
    double beta, epsilon, delta;
    std::int64_t k;
  };
  const std::vector<Tuple> tuples = {
      {1.0, 1.0, 1e-5, 1},  {2.0, 1.0, 1e-5, 1},  {3.0, 1.0, 1e-5, 1},
      {4.0, 1.0, 1e-5, 1},  {1.25, 2.0, 1e-5, 10}, {1.75, 2.0, 1e-5, 10},
      {2.5, 2.0, 1e-5, 10}, {3.5, 2.0, 1e-5, 10}, {1.5, 4.0, 1e-6, 100},
      {2.0, 4.0, 1e-6, 100}, {3.0, 4.0, 1e-6, 100}, {4.0, 4.0, 1e-6, 100},
  };
  const AccountOptions options;
  double worst = 0.0;
  std::vector<double> single_shot_sigmas;
  for (const Tuple& t : tuples) {
    PrivacyTarget target;
    target.epsilon = t.epsilon;
    target.delta = t.delta;
    target.compositions = t.k;
    Rng rng = MakeRng(kDefaultSeed, {RealTag(t.beta), RealTag(t.epsilon)});
    const SigmaSolution s = SolveSigma(t.beta, target, options, rng);
    // Re-account with an independent discretization seed.
    const double eps = EpsilonForSigma(t.beta, s.sigma, target, options,
                                       DeriveSeed(kDefaultSeed, {0x7265, static_cast<std::uint64_t>(t.k)}));
    worst = std::max(worst, std::abs(eps - t.epsilon));
    if (t.k == 1) single_shot_sigmas.push_back(s.sigma);
    o.detail << "(b=" << t.beta << ",k=" << t.k << ": sigma=" << s.sigma
             << " eps=" << eps << ") ";
  }
  const bool increasing =
      std::is_sorted(single_shot_sigmas.begin(), single_shot_sigmas.end());
  o.detail << "max_dev=" << worst
           << " sigma_increasing_k1=" << (increasing ? "yes" : "no") << ' ';
  o.Check(worst <= 0.05, "round trip within 0.05");
}

void Ac8(Outcome& o) {
  TailQuery query;
  query.cutoffs = {1.0, 2.0, 4.0};
  query.target.epsilon = 1.5;
  query.target.delta = 1e-5;
  query.betas = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  Rng rng(kDefaultSeed);
  const std::vector<TailRow> rows = TailWeight(query, AccountOptions(), rng);
  double erfc_err = 0.0;
  const std::size_t nb = query.betas.size();
  for (std::size_t c = 0; c < query.cutoffs.size(); ++c) {
    std::size_t argmin = 0;
    for (std::size_t b = 0; b < nb; ++b) {
      const TailRow& r = rows[c * nb + b];
      if (r.beta == 2.0) {
        erfc_err = std::max(erfc_err, std::abs(r.weight - std::erfc(r.cutoff / r.sigma)));
      }
      if (r.weight < rows[c * nb + argmin].weight) argmin = b;
    }
    o.detail << "tau=" << query.cutoffs[c] << " argmin_beta=" << query.betas[argmin]
             << " w(1)=" << rows[c * nb].weight << ' ';
    o.Check(argmin == 0, "beta=1 minimizes w at tau=" + std::to_string(query.cutoffs[c]));
  }
  o.detail << "erfc_err=" << erfc_err << ' ';
  o.Check(erfc_err <= 1e-10, "beta=2 erfc within 1e-10");
}

void Ac9(Outcome& o) {
  const auto start = Clock::now();
  SimConfig two;
  two.num_classes = 2;
  two.gaps = SimConfig::DefaultGaps();
  two.betas = {1.0, 2.0};
  two.epsilon = 2.0;
  Rng rng(kDefaultSeed);
  const HardmaxSweep sweep = RunHardmaxSweep(two, AccountOptions(), rng);
  bool monotone = true;
  bool matches = true;
  double worst_z = 0.0;
  std::string worst_point;
  for (const UtilityCurve& c : sweep.curves) {
    for (std::size_t i = 0; i < c.gaps.size(); ++i) {
      Rng h_rng(0);
      const VoteHistogram h = MakeHistograms(2, two.total_votes, c.gaps[i], 1, h_rng)[0];
      const double exact = oracle::TwoClassHardmax(
          c.beta, c.sigma, static_cast<double>(h.counts[0] - h.counts[1]));
      const UtilityEstimate& u = c.utility[i];
      // Binomial standard error under the exact probability, floored at
      // one draw so that p = 1 does not give a zero-width interval.
      const double draws = static_cast<double>(two.histograms_per_gap * two.trials);
      const double se = std::max(std::sqrt(exact * (1.0 - exact) / draws), 1.0 / draws);
      const double z = std::abs(u.value - exact) / se;
      if (z > worst_z) {
        worst_z = z;
        worst_point = "beta=" + std::to_string(c.beta) + ",r=" +
                      std::to_string(c.gaps[i]) + ",mc=" + std::to_string(u.value) +
                      ",exact=" + std::to_string(exact);
      }
      if (z > 4.0) matches = false;
      if (i > 0) {
        const UtilityEstimate& p = c.utility[i - 1];
        if (u.value + 2 * std::hypot(u.std_error, p.std_error) < p.value) monotone = false;
      }
    }
  }
  SimConfig many = two;
  many.num_classes = 25;
  Rng rng25(kDefaultSeed);
  const HardmaxSweep sweep25 = RunHardmaxSweep(many, AccountOptions(), rng25);
  const double auc1 = sweep25.auc[0];
  const double auc2 = sweep25.auc[1];
  const double seconds = Seconds(start);
  o.detail << "two_class_monotone=" << (monotone ? "yes" : "no")
           << " max_z_vs_quadrature=" << worst_z << " (" << worst_point << ")"
           << " sigma(beta=1)=" << sweep.curves[0].sigma
           << " sigma(beta=2)=" << sweep.curves[1].sigma << " auc25(beta=1)=" << auc1
           << " auc25(beta=2)=" << auc2 << " time=" << seconds << "s ";
  o.Check(monotone, "2-class monotone in r within 2 std");
  o.Check(matches, "2-class utility within 4 std of quadrature");
  o.Check(auc2 >= auc1, "AUC(beta=2) >= AUC(beta=1)");
}

void Ac10(Outcome& o) {
  Rng data_rng(kDefaultSeed);
  const Dataset train = MakeGaussianBlobs(2000, 20, 4.0, data_rng);
  const Dataset test = MakeGaussianBlobs(1000, 20, 4.0, data_rng);
  const LogisticModel model(20, 2);
  TrainConfig base_cfg;
  base_cfg.private_mode = false;
  Rng base_rng(1);
  const double baseline =
      BetaDpSgd(model, train, &test, base_cfg, base_rng).log.back().test_acc;
  o.detail << "baseline=" << baseline << ' ';
  for (double beta : {1.0, 2.0}) {
    const auto start = Clock::now();
    TrainConfig cfg;
    cfg.target_epsilon = 8.0;
    cfg.delta = 1e-5;
    cfg.accounting.samples_n = 1'000'000;
    cfg.accounting.bins = std::size_t{1} << 17;
    cfg.accounting.error_bounds = false;
    PrivacyTarget target;
    target.epsilon = 8.0;
    target.delta = 1e-5;
    target.compositions = cfg.StepsPerEpoch(train.size()) * cfg.epochs;
    target.sample_rate = cfg.SampleRate(train.size());
    Rng solve_rng(2);
    const SigmaSolution s = SolveSigma(beta, target, cfg.accounting, solve_rng);
    cfg.noise = GGParams(beta, s.sigma);
    Rng train_rng(1);
    const TrainResult r = BetaDpSgd(model, train, &test, cfg, train_rng);
    const double seconds = Seconds(start);
    const EpochLog& last = r.log.back();
    o.detail << "(beta=" << beta << " sigma=" << s.sigma << " acc=" << last.test_acc
             << " eps=" << last.epsilon << " steps=" << r.steps
             << " time=" << seconds << "s) ";
    o.Check(last.test_acc >= baseline - 0.07, "accuracy within 7 points");
    o.Check(last.epsilon <= 8.0, "final epsilon <= 8");
    o.Check(seconds < 120.0, "run < 2 min");
  }
}

void Ac11(Outcome& o) {
  const std::vector<double> betas = {1.0, 1.33, 1.5, 2.0, 2.5, 4.0};
  const std::vector<double> sigmas = {0.5, 1.0, 3.0};
  double norm_err = 0.0;
  double inv_err = 0.0;
  double reduce_err = 0.0;
  bool ks_ok = true;
  const std::size_t n = 100000;
  const double crit = oracle::KsCritical(n, n, 1e-3);
  for (double beta : betas) {
    for (double sigma : sigmas) {
      const GGParams p(beta, sigma);
      const double mass = 2.0 * oracle::Integrate(
                                    [&](double x) { return GGPdf(p, 0.0, x); }, 0.0,
                                    std::numeric_limits<double>::infinity());
      norm_err = std::max(norm_err, std::abs(mass - 1.0));
      for (double u : {1e-6, 1e-4, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1 - 1e-4,
                       1 - 1e-6}) {
        const double x = GGQuantile(p, u);
        const double back = u < 0.5 ? GGCdf(p, x) : GGSurvival(p, x);
        const double ref = u < 0.5 ? u : 1.0 - u;
        inv_err = std::max(inv_err, std::abs(back / ref - 1.0));
      }
      Rng a = MakeRng(kDefaultSeed, {RealTag(beta), RealTag(sigma), 1});
      Rng b = MakeRng(kDefaultSeed, {RealTag(beta), RealTag(sigma), 2});
      const std::vector<double> draws = SampleGG(p, a, n);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::vector<double> transformed(n);
      for (double& v : transformed) {
        double u = unif(b);
        while (u <= 0.0) u = unif(b);
        v = GGQuantile(p, u);
      }
      if (oracle::KsTwoSample(draws, transformed) > crit) ks_ok = false;
    }
  }
  for (double sigma : sigmas) {
    for (double x : {-5.0, -1.0, -0.1, 0.0, 0.3, 2.0, 7.0}) {
      const double laplace = std::exp(-std::abs(x) / sigma) / (2 * sigma);
      const double sd = sigma / std::sqrt(2.0);
      const double normal =
          std::exp(-x * x / (2 * sd * sd)) / (sd * std::sqrt(2 * M_PI));
      reduce_err = std::max({reduce_err, std::abs(GGPdf(GGParams(1.0, sigma), 0.0, x) - laplace),
                             std::abs(GGPdf(GGParams(2.0, sigma), 0.0, x) - normal)});
    }
  }
  o.detail << "norm_err=" << norm_err << " inverse_rel_err=" << inv_err
           << " ks_ok=" << (ks_ok ? "yes" : "no") << " reduction_err=" << reduce_err << ' ';
  o.Check(norm_err <= 1e-8, "normalization within 1e-8");
  o.Check(inv_err <= 1e-9, "CDF/quantile round trip within 1e-9");
  o.Check(ks_ok, "sampler KS not rejected at 1e-3");
  o.Check(reduce_err <= 1e-12, "Laplace/Normal reduction within 1e-12");
}

}  // namespace
}  // namespace ggdp

int main(int argc, char** argv) {
  // Optional arguments select criteria by name, e.g. "acceptance AC1 AC9".
  const std::vector<std::string> only(argv + 1, argv + argc);
  using ggdp::Outcome;
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"AC1", ggdp::Ac1},   {"AC2", ggdp::Ac2}, {"AC3", ggdp::Ac3}, {"AC4", ggdp::Ac4},
      {"AC5", ggdp::Ac5},   {"AC6", ggdp::Ac6}, {"AC7", ggdp::Ac7}, {"AC8", ggdp::Ac8},
      {"AC9", ggdp::Ac9},   {"AC10", ggdp::Ac10}, {"AC11", ggdp::Ac11},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) {
      continue;
    }
    Outcome o;
    const auto start = ggdp::Clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "] ";
    }
    failures += !o.pass;
    std::printf("%s %s (%.1fs) %s\n", name, o.pass ? "PASS" : "FAIL",
                ggdp::Seconds(start), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
