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

#include "ggdp/accountant.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "boost/math/special_functions/beta.hpp"
#include "ggdp/errors.h"
#include "ggdp/parallel.h"

namespace ggdp {
namespace {

constexpr std::int64_t kMinSamples = 10'000;
constexpr std::size_t kSampleBlock = 4096;
constexpr double kMinAcceptance = 0.1;

// FFTW's planner is not thread-safe.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

template <typename T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwDeleter<T>> FftwAlloc(std::size_t n) {
  T* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwDeleter<T>>(p);
}

// Forward real FFT of one grid, laid out so that grid index 0 sits at
// position 0 (a cyclic rotation by bins/2).
std::vector<std::complex<double>> ForwardSpectrum(const DiscretePRV& prv) {
  const std::size_t n = prv.bins();
  const std::size_t half = n / 2;
  auto in = FftwAlloc<double>(n);
  auto out = FftwAlloc<fftw_complex>(n / 2 + 1);
  for (std::size_t j = 0; j < n; ++j) in[(j + half) % n] = prv.probs[j];
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<std::complex<double>> spectrum(n / 2 + 1);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    spectrum[k] = {out[k][0], out[k][1]};
  }
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  return spectrum;
}

std::vector<double> InverseSpectrum(
    const std::vector<std::complex<double>>& spectrum, std::size_t n) {
  auto in = FftwAlloc<fftw_complex>(n / 2 + 1);
  auto out = FftwAlloc<double>(n);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    in[k][0] = spectrum[k].real();
    in[k][1] = spectrum[k].imag();
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.get(), out.get(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  const std::size_t half = n / 2;
  std::vector<double> probs(n);
  for (std::size_t j = 0; j < n; ++j) {
    probs[j] = out[(j + half) % n] / static_cast<double>(n);
  }
  return probs;
}

std::complex<double> IntegerPower(std::complex<double> base, std::int64_t e) {
  std::complex<double> result = 1.0;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

void CheckSameGrid(const DiscretePRV& a, const DiscretePRV& b) {
  const auto close = [](double x, double y) {
    return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y));
  };
  if (a.bins() != b.bins() || !close(a.mesh_h, b.mesh_h) ||
      !close(a.trunc_L, b.trunc_L)) {
    throw ConfigError("cannot compose PRVs on different grids");
  }
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  double max_abs = 0.0;
};

Moments PilotMoments(const PrvSampler& sampler, std::int64_t count, Rng& rng) {
  std::vector<double> draws(static_cast<std::size_t>(count));
  sampler(rng, draws);
  Moments m;
  double sum = 0.0;
  for (double y : draws) {
    if (!std::isfinite(y)) throw TruncationError("PRV sampler produced a non-finite value");
    sum += y;
    m.max_abs = std::max(m.max_abs, std::fabs(y));
  }
  m.mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (double y : draws) ss += (y - m.mean) * (y - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(std::max<std::int64_t>(1, count - 1)));
  return m;
}

std::vector<LossDirection> DirectionsFor(const MechanismSpec& spec) {
  if (spec.sample_rate && *spec.sample_rate < 1.0) {
    return {LossDirection::kAdd, LossDirection::kRemove};
  }
  return {LossDirection::kAdd};
}

const char* DirectionName(LossDirection d) {
  return d == LossDirection::kAdd ? "add" : "remove";
}

// Monte Carlo upper bound on Pr[|sum of k draws| >= threshold].
double SumTailUpperBound(const PrvSampler& sampler, std::int64_t k,
                         double threshold, std::int64_t replicates,
                         std::uint64_t seed) {
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(replicates), 0);
  ParallelFor(static_cast<std::size_t>(replicates), [&](std::size_t r) {
    Rng rng = MakeRng(seed, {r});
    std::vector<double> block(
        std::min<std::size_t>(kSampleBlock, static_cast<std::size_t>(k)));
    double sum = 0.0;
    std::int64_t left = k;
    while (left > 0) {
      const std::size_t take =
          std::min<std::size_t>(block.size(), static_cast<std::size_t>(left));
      sampler(rng, std::span<double>(block.data(), take));
      for (std::size_t i = 0; i < take; ++i) sum += block[i];
      left -= static_cast<std::int64_t>(take);
    }
    hit[r] = std::fabs(sum) >= threshold ? 1 : 0;
  });
  std::uint64_t hits = 0;
  for (auto h : hit) hits += h;
  return ClopperPearsonUpper(hits, static_cast<std::uint64_t>(replicates), 0.99);
}

}  // namespace

AccountantConfig AccountantConfig::FromBins(double trunc_L, std::size_t bins,
                                            std::int64_t samples_n) {
  if (bins < 4 || bins % 2 != 0) {
    throw ConfigError("grid bin count must be even and >= 4");
  }
  if (!(trunc_L > 0.0) || !std::isfinite(trunc_L)) {
    throw ConfigError("truncation L must be positive and finite");
  }
  AccountantConfig c;
  c.trunc_L = trunc_L;
  c.mesh_h = 2.0 * trunc_L / static_cast<double>(bins);
  c.samples_n = samples_n;
  return c;
}

std::size_t AccountantConfig::bins() const {
  return static_cast<std::size_t>(std::llround(2.0 * trunc_L / mesh_h));
}

double AccountantConfig::s(std::int64_t k) const {
  return hoeffding_s.value_or(10.0 * mesh_h *
                              std::sqrt(static_cast<double>(k)));
}

double AccountantConfig::t() const {
  return sampling_t.value_or(10.0 * trunc_L /
                             std::sqrt(static_cast<double>(samples_n)));
}

void AccountantConfig::Validate() const {
  if (!(mesh_h > 0.0) || !(trunc_L > 0.0) || !std::isfinite(trunc_L)) {
    throw ConfigError("mesh h and truncation L must be positive");
  }
  const double ratio = trunc_L / mesh_h;
  const double rounded = std::round(ratio);
  if (std::fabs(ratio - rounded) > 1e-9 * ratio || rounded < 2.0) {
    throw ConfigError("L must be an integer multiple (>= 2) of h, got L/h = " +
                      std::to_string(ratio));
  }
  if (samples_n < kMinSamples) {
    throw ConfigError("samples_n must be >= 10^4");
  }
  if ((hoeffding_s && !(*hoeffding_s > 0.0)) ||
      (sampling_t && !(*sampling_t > 0.0))) {
    throw ConfigError("error-bound parameters s and t must be positive");
  }
}

nlohmann::json AccountantConfig::ToJson() const {
  nlohmann::json j = {{"mesh_h", mesh_h},
                      {"trunc_L", trunc_L},
                      {"bins", bins()},
                      {"samples_n", samples_n}};
  if (hoeffding_s) j["hoeffding_s"] = *hoeffding_s;
  if (sampling_t) j["sampling_t"] = *sampling_t;
  return j;
}

double DiscretePRV::Mean() const {
  double m = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) m += probs[j] * Point(j);
  return m;
}

double DiscretePRV::TotalMass() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

DiscretePRV DiscretizeFromSamples(const PrvSampler& sampler,
                                  const AccountantConfig& config, Rng& rng) {
  config.Validate();
  const std::uint64_t base = rng();
  const std::int64_t n = config.samples_n;
  const std::size_t bins = config.bins();
  const std::int64_t half = static_cast<std::int64_t>(bins / 2);
  const std::int64_t m = config.half_width();
  const double h = config.mesh_h;
  const double L = config.trunc_L;

  const std::int64_t chunks =
      std::clamp<std::int64_t>(n / 65536, 1, 64);
  struct Chunk {
    std::vector<std::int32_t> bin;  // first half: grid slot per sample
    double sum = 0.0;               // second half: sum of samples
    std::uint64_t attempts = 0;
  };
  std::vector<Chunk> parts(static_cast<std::size_t>(2 * chunks));

  ParallelFor(parts.size(), [&](std::size_t c) {
    const std::int64_t which = static_cast<std::int64_t>(c) / chunks;
    const std::int64_t part = static_cast<std::int64_t>(c) % chunks;
    const std::int64_t quota = n / chunks + (part < n % chunks ? 1 : 0);
    Rng local = MakeRng(base, {static_cast<std::uint64_t>(which),
                               static_cast<std::uint64_t>(part)});
    Chunk& out = parts[c];
    if (which == 0) out.bin.reserve(static_cast<std::size_t>(quota));
    std::vector<double> block(kSampleBlock);
    std::int64_t accepted = 0;
    while (accepted < quota) {
      sampler(local, block);
      for (double y : block) {
        ++out.attempts;
        if (!(std::fabs(y) <= L)) continue;
        if (which == 0) {
          const std::int64_t i =
              std::clamp<std::int64_t>(std::llround(y / h), -m, m);
          out.bin.push_back(static_cast<std::int32_t>(i + half));
        } else {
          out.sum += y;
        }
        if (++accepted == quota) break;
      }
      if (out.attempts >= 100'000 &&
          static_cast<double>(accepted) <
              kMinAcceptance * static_cast<double>(out.attempts)) {
        throw TruncationError(
            "fewer than 10% of PRV samples fall inside [-L, L] (L = " +
            std::to_string(L) + "); the truncation is too tight");
      }
    }
  });

  std::vector<std::uint64_t> counts(bins, 0);
  double sum = 0.0;
  std::uint64_t attempts = 0;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    attempts += parts[c].attempts;
    if (static_cast<std::int64_t>(c) < chunks) {
      for (std::int32_t b : parts[c].bin) ++counts[static_cast<std::size_t>(b)];
    } else {
      sum += parts[c].sum;
    }
  }

  DiscretePRV prv;
  prv.mesh_h = h;
  prv.trunc_L = L;
  prv.probs.resize(bins);
  const double inv_n = 1.0 / static_cast<double>(n);
  double grid_mean = 0.0;
  for (std::size_t j = 0; j < bins; ++j) {
    prv.probs[j] = static_cast<double>(counts[j]) * inv_n;
    grid_mean += static_cast<double>(static_cast<std::int64_t>(j) - half) * h *
                 prv.probs[j];
  }
  const double mean_tilde = sum * inv_n - grid_mean;
  prv.offset = std::clamp(mean_tilde, 0.0, h / 2.0);
  prv.draws = attempts;
  prv.rejected = attempts - static_cast<std::uint64_t>(2 * n);
  prv.acceptance_rate =
      static_cast<double>(2 * n) / static_cast<double>(attempts);
  prv.source = "samples";
  if (prv.acceptance_rate < kMinAcceptance) {
    throw TruncationError("PRV acceptance rate " +
                          std::to_string(prv.acceptance_rate) +
                          " is below 10%; the truncation is too tight");
  }
  return prv;
}

DiscretePRV DiscretizeFromCdf(const std::function<double(double)>& cdf,
                              const AccountantConfig& config) {
  config.Validate();
  const std::size_t bins = config.bins();
  const std::int64_t half = static_cast<std::int64_t>(bins / 2);
  const std::int64_t m = config.half_width();
  const double h = config.mesh_h;
  const double L = config.trunc_L;

  // Cell edges for grid indices -m..m; the outer cells extend to -L and L.
  const std::size_t cells = static_cast<std::size_t>(2 * m + 1);
  std::vector<double> edges(cells + 1);
  edges.front() = -L;
  edges.back() = L;
  for (std::size_t k = 1; k < cells; ++k) {
    edges[k] = (static_cast<double>(-m + static_cast<std::int64_t>(k)) - 0.5) * h;
  }
  std::vector<double> f(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) f[k] = cdf(edges[k]);
  const double window = f.back() - f.front();
  if (!(window >= 0.5)) {
    throw TruncationError("only " + std::to_string(window) +
                          " of the PRV mass lies in [-L, L]");
  }

  DiscretePRV prv;
  prv.mesh_h = h;
  prv.trunc_L = L;
  prv.probs.assign(bins, 0.0);
  double integral_f = 0.0;  // Simpson's rule for the integral of F
  double grid_mean = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const double mass = std::max(0.0, f[k + 1] - f[k]) / window;
    const std::int64_t i = -m + static_cast<std::int64_t>(k);
    prv.probs[static_cast<std::size_t>(i + half)] = mass;
    grid_mean += static_cast<double>(i) * h * mass;
    const double a = edges[k];
    const double b = edges[k + 1];
    integral_f += (b - a) / 6.0 * (f[k] + 4.0 * cdf(0.5 * (a + b)) + f[k + 1]);
  }
  // E[Y | -L < Y <= L] from integration by parts.
  const double exact_mean =
      (L * (f.back() + f.front()) - integral_f) / window;
  prv.offset = std::clamp(exact_mean - grid_mean, 0.0, h / 2.0);
  prv.source = "cdf";
  return prv;
}

DiscretePRV Compose(
    std::span<const std::pair<DiscretePRV, std::int64_t>> prvs) {
  if (prvs.empty()) throw ConfigError("nothing to compose");
  for (const auto& [prv, multiplicity] : prvs) {
    if (multiplicity < 1) throw ConfigError("multiplicity must be >= 1");
    CheckSameGrid(prvs.front().first, prv);
  }
  const DiscretePRV& first = prvs.front().first;
  if (prvs.size() == 1 && prvs.front().second == 1) return first;

  const std::size_t n = first.bins();
  std::vector<std::complex<double>> product(n / 2 + 1, 1.0);
  double offset = 0.0;
  std::string source = "compose(";
  for (const auto& [prv, multiplicity] : prvs) {
    const auto spectrum = ForwardSpectrum(prv);
    for (std::size_t k = 0; k < product.size(); ++k) {
      product[k] *= IntegerPower(spectrum[k], multiplicity);
    }
    offset += static_cast<double>(multiplicity) * prv.offset;
    source += prv.source + "^" + std::to_string(multiplicity) + ",";
  }
  source.back() = ')';

  DiscretePRV out;
  out.mesh_h = first.mesh_h;
  out.trunc_L = first.trunc_L;
  out.offset = offset;
  out.probs = InverseSpectrum(product, n);
  // Round-off leaves tiny negative values where the true mass is zero.
  for (double& p : out.probs) p = std::max(p, 0.0);
  out.source = std::move(source);
  return out;
}

DiscretePRV ComposeSelf(const DiscretePRV& prv, std::int64_t k) {
  const std::pair<DiscretePRV, std::int64_t> item{prv, k};
  return Compose(std::span(&item, 1));
}

double DeltaOfEpsilon(const DiscretePRV& prv, double epsilon) {
  double delta = 0.0;
  for (std::size_t j = prv.bins(); j-- > 0;) {
    const double y = prv.Point(j);
    if (y <= epsilon) break;
    if (prv.probs[j] > 0.0) delta -= prv.probs[j] * std::expm1(epsilon - y);
  }
  return std::clamp(delta, 0.0, 1.0);
}

double DeltaOfEpsilon(std::span<const DiscretePRV> prvs, double epsilon) {
  double delta = 0.0;
  for (const auto& prv : prvs) delta = std::max(delta, DeltaOfEpsilon(prv, epsilon));
  return delta;
}

double EpsilonOfDelta(const DiscretePRV& prv, double delta) {
  return EpsilonOfDelta(std::span(&prv, 1), delta);
}

double EpsilonOfDelta(std::span<const DiscretePRV> prvs, double delta) {
  if (prvs.empty()) throw ConfigError("no PRV to invert");
  if (!(delta > 0.0)) {
    throw RangeError("delta must be positive; achievable delta range is (0, " +
                     std::to_string(DeltaOfEpsilon(prvs, 0.0)) + "]");
  }
  if (DeltaOfEpsilon(prvs, 0.0) <= delta) return 0.0;
  double hi = 0.0;
  for (const auto& prv : prvs) {
    for (std::size_t j = prv.bins(); j-- > 0;) {
      if (prv.probs[j] > 0.0) {
        hi = std::max(hi, prv.Point(j));
        break;
      }
    }
  }
  if (DeltaOfEpsilon(prvs, hi) > delta) {
    throw RangeError("delta " + std::to_string(delta) +
                     " is below the smallest value reachable on the grid");
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (DeltaOfEpsilon(prvs, mid) <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

ErrorBounds ComputeErrorBounds(const AccountantConfig& config, std::int64_t k,
                               double tail_single, double tail_sum) {
  const double kk = static_cast<double>(k);
  const double n = static_cast<double>(config.samples_n);
  const double h = config.mesh_h;
  const double L = config.trunc_L;
  const double s = config.s(k);
  const double t = config.t();
  const double root = std::sqrt(L / (n * h));
  ErrorBounds b;
  b.eta = 2.0 * kk * tail_single +
          4.0 * std::exp(-2.0 * s * s / (kk * h * h)) +
          4.0 * kk * std::exp(-n * t * t / (2.0 * L * L)) +
          8.0 * kk * std::exp(-n * t * t / 2.0) + tail_sum +
          2.0 * kk * (t + root);
  b.tau = s + kk * (t + 2.0 * L * (t / 2.0 + root)) +
          2.0 * kk * (t / 2.0 + root);
  return b;
}

double ClopperPearsonUpper(std::uint64_t successes, std::uint64_t trials,
                           double confidence) {
  if (trials == 0 || successes >= trials) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(successes + 1),
                                static_cast<double>(trials - successes),
                                confidence);
}

nlohmann::json PrivacyCurve::ToJson() const {
  return {{"epsilon", epsilon}, {"delta", delta},   {"eta", bounds.eta},
          {"tau", bounds.tau},  {"config", config}, {"mechanism", mechanism}};
}

std::vector<DiscretePRV> MechanismPrvs::Composed(std::int64_t k) const {
  std::vector<DiscretePRV> out;
  out.reserve(single.size());
  for (const auto& prv : single) out.push_back(ComposeSelf(prv, k));
  return out;
}

double AutoTruncation(const MechanismSpec& spec, const AccountOptions& options,
                      std::uint64_t seed) {
  spec.Validate();
  const double k = static_cast<double>(spec.compositions);
  double L = 1e-3;
  for (LossDirection d : DirectionsFor(spec)) {
    Rng rng = MakeRng(seed, {0x70696c6fULL, static_cast<std::uint64_t>(d)});
    const Moments m =
        PilotMoments(MakePrvSampler(spec, d), options.pilot_samples, rng);
    L = std::max({L, k * m.mean + options.sigma_rule * std::sqrt(k) * m.sd,
                  2.0 * m.max_abs});
  }
  return L;
}

MechanismPrvs DiscretizeMechanism(const MechanismSpec& spec,
                                  const AccountOptions& options,
                                  std::uint64_t seed) {
  spec.Validate();
  const double L = options.trunc_L ? *options.trunc_L
                                   : AutoTruncation(spec, options, seed);
  MechanismPrvs out;
  out.config = AccountantConfig::FromBins(L, options.bins, options.samples_n);
  out.config.hoeffding_s = options.hoeffding_s;
  out.config.sampling_t = options.sampling_t;
  out.config.Validate();
  out.directions = DirectionsFor(spec);
  for (LossDirection d : out.directions) {
    Rng rng = MakeRng(seed, {0x64697363ULL, static_cast<std::uint64_t>(d)});
    DiscretePRV prv =
        DiscretizeFromSamples(MakePrvSampler(spec, d), out.config, rng);
    prv.source = std::string("samples:") + DirectionName(d);
    out.single.push_back(std::move(prv));
  }
  return out;
}

nlohmann::json MechanismToJson(const MechanismSpec& spec) {
  nlohmann::json j = {{"beta", spec.noise.beta()},
                      {"sigma", spec.noise.sigma()},
                      {"sensitivity", spec.sensitivity},
                      {"compositions", spec.compositions}};
  if (spec.sample_rate) {
    j["sample_rate"] = *spec.sample_rate;
  } else {
    j["sample_rate"] = nullptr;
  }
  return j;
}

AccountingResult Account(const MechanismSpec& spec,
                         const AccountOptions& options,
                         AccountingTarget target, Rng& rng) {
  spec.Validate();
  const std::uint64_t seed = rng();
  const MechanismPrvs prvs = DiscretizeMechanism(spec, options, seed);
  const std::int64_t k = spec.compositions;
  const std::vector<DiscretePRV> composed = prvs.Composed(k);

  AccountingResult result;
  result.config = prvs.config;
  if (target.kind == AccountingTarget::Kind::kEpsilonForDelta) {
    result.delta = target.value;
    result.epsilon = EpsilonOfDelta(composed, target.value);
  } else {
    if (!(target.value >= 0.0)) throw ParameterError("epsilon must be >= 0");
    result.epsilon = target.value;
    result.delta = DeltaOfEpsilon(composed, target.value);
  }

  if (options.error_bounds) {
    double tail_single = 0.0;
    double tail_sum = 0.0;
    for (std::size_t d = 0; d < prvs.directions.size(); ++d) {
      const DiscretePRV& single = prvs.single[d];
      tail_single = std::max(
          tail_single,
          ClopperPearsonUpper(single.rejected, single.draws, 0.99));
      tail_sum = std::max(
          tail_sum,
          SumTailUpperBound(MakePrvSampler(spec, prvs.directions[d]), k,
                            prvs.config.trunc_L - prvs.config.t(),
                            options.tail_replicates,
                            DeriveSeed(seed, {0x7461696cULL, d})));
    }
    result.bounds = ComputeErrorBounds(prvs.config, k, tail_single, tail_sum);
  }
  result.epsilon_reported = result.epsilon + result.bounds.tau;
  result.delta_reported = std::min(1.0, result.delta + result.bounds.eta);

  PrivacyCurve& curve = result.curve;
  const std::size_t points = std::max<std::size_t>(2, options.curve_points);
  for (std::size_t i = 0; i < points; ++i) {
    const double eps = prvs.config.trunc_L * static_cast<double>(i) /
                       static_cast<double>(points - 1);
    curve.epsilon.push_back(eps);
    curve.delta.push_back(DeltaOfEpsilon(composed, eps));
  }
  // Enforce monotonicity against last-ulp noise in the summation.
  for (std::size_t i = 1; i < points; ++i) {
    curve.delta[i] = std::min(curve.delta[i], curve.delta[i - 1]);
  }
  curve.bounds = result.bounds;
  curve.config = prvs.config.ToJson();
  curve.config["compositions"] = k;
  nlohmann::json dirs = nlohmann::json::array();
  for (LossDirection d : prvs.directions) dirs.push_back(DirectionName(d));
  curve.config["directions"] = dirs;
  curve.config["acceptance_rate"] = prvs.single.front().acceptance_rate;
  curve.mechanism = MechanismToJson(spec);
  return result;
}

CompositionAccountant::CompositionAccountant(MechanismSpec step,
                                             std::int64_t max_compositions,
                                             const AccountOptions& options,
                                             std::uint64_t seed)
    : step_(std::move(step)), max_compositions_(max_compositions) {
  if (max_compositions < 1) {
    throw ParameterError("max_compositions must be >= 1");
  }
  step_.compositions = max_compositions;
  prvs_ = DiscretizeMechanism(step_, options, seed);
}

double CompositionAccountant::Epsilon(std::int64_t steps, double delta) const {
  if (steps < 0 || steps > max_compositions_) {
    throw ParameterError("step count outside [0, " +
                         std::to_string(max_compositions_) + "]");
  }
  if (steps == 0) return 0.0;
  return EpsilonOfDelta(prvs_.Composed(steps), delta);
}

double CompositionAccountant::Delta(std::int64_t steps, double epsilon) const {
  if (steps < 0 || steps > max_compositions_) {
    throw ParameterError("step count outside [0, " +
                         std::to_string(max_compositions_) + "]");
  }
  if (steps == 0) return 0.0;
  return DeltaOfEpsilon(prvs_.Composed(steps), epsilon);
}

std::int64_t CompositionAccountant::MaxSteps(double epsilon,
                                             double delta) const {
  if (Epsilon(max_compositions_, delta) <= epsilon) return max_compositions_;
  std::int64_t lo = 0;
  std::int64_t hi = max_compositions_;
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (Epsilon(mid, delta) <= epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace ggdp
