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

#include "ggdp/simulate.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ggdp/errors.h"
#include "ggdp/parallel.h"

namespace ggdp {
namespace {

constexpr int kMaxConstructionAttempts = 10'000;

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t");
    out.push_back(first == std::string::npos
                      ? std::string()
                      : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool ParseCount(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stoll(s, &used);
  } catch (...) {
    return false;
  }
  return used == s.size();
}

std::string FormatReal(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void SimConfig::Validate() const {
  if (num_classes < 2) throw ParameterError("need at least 2 classes");
  if (total_votes < num_classes) {
    throw ParameterError("total votes must be >= the number of classes");
  }
  if (gaps.empty()) throw ParameterError("empty runner-up grid");
  for (double r : gaps) {
    if (!(r > 0.0 && r < 1.0)) {
      throw ParameterError("runner-up parameter must lie in (0, 1)");
    }
  }
  if (histograms_per_gap < 1 || trials < 1) {
    throw ParameterError("histogram and trial counts must be >= 1");
  }
  if (betas.empty()) throw ParameterError("empty beta grid");
}

std::vector<double> SimConfig::DefaultGaps() {
  std::vector<double> gaps = {0.001};
  for (int i = 1; i <= 40; ++i) gaps.push_back(0.005 * i);
  return gaps;
}

std::vector<VoteHistogram> MakeHistograms(int num_classes,
                                          std::int64_t total_votes, double r,
                                          std::int64_t count, Rng& rng) {
  if (num_classes < 2 || total_votes < num_classes) {
    throw ParameterError("need N >= 2 classes and V >= N votes");
  }
  if (!(r > 0.0 && r < 1.0)) throw ParameterError("r must lie in (0, 1)");
  const double V = static_cast<double>(total_votes);
  std::vector<VoteHistogram> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));

  if (num_classes == 2) {
    const auto x0 = static_cast<std::int64_t>(std::llround(V / (2.0 - r)));
    VoteHistogram h{{x0, total_votes - x0}, 0};
    for (std::int64_t i = 0; i < count; ++i) out.push_back(h);
    return out;
  }

  const double n = static_cast<double>(num_classes);
  const auto x0 = static_cast<std::int64_t>(
      std::llround(V / (1.0 + (1.0 - r) + 0.95 * (n - 3.0) * (1.0 - r) / 2.0)));
  const auto x1 = static_cast<std::int64_t>(
      std::floor(static_cast<double>(x0) * (1.0 - r)));
  const auto x2 = static_cast<std::int64_t>(
      std::floor(0.95 * static_cast<double>(x1)));
  std::uniform_int_distribution<std::int64_t> middle(0, x2);
  for (std::int64_t i = 0; i < count; ++i) {
    VoteHistogram h;
    h.true_label = 0;
    bool built = false;
    for (int attempt = 0; attempt < kMaxConstructionAttempts; ++attempt) {
      h.counts.assign(static_cast<std::size_t>(num_classes), 0);
      h.counts[0] = x0;
      h.counts[1] = x1;
      std::int64_t used = x0 + x1;
      if (num_classes > 3) {
        h.counts[2] = x2;
        used += x2;
        for (int c = 3; c < num_classes - 1; ++c) {
          h.counts[static_cast<std::size_t>(c)] = middle(rng);
          used += h.counts[static_cast<std::size_t>(c)];
        }
      }
      const std::int64_t rest = total_votes - used;
      if (rest >= 0 && rest <= x1) {
        h.counts.back() = rest;
        built = true;
        break;
      }
    }
    if (!built) {
      throw ConstructionError(
          "no valid " + std::to_string(num_classes) + "-class histogram with V=" +
          std::to_string(total_votes) + ", r=" + FormatReal(r) + " after " +
          std::to_string(kMaxConstructionAttempts) + " attempts");
    }
    out.push_back(std::move(h));
  }
  return out;
}

UtilityEstimate HardmaxUtility(const std::vector<VoteHistogram>& histograms,
                               const GGParams& noise, std::int64_t trials,
                               Rng& rng) {
  if (histograms.empty() || trials < 1) {
    throw ParameterError("need histograms and >= 1 trial");
  }
  GGSampler sampler(noise);
  std::vector<double> counts;
  std::int64_t hits = 0;
  for (const auto& h : histograms) {
    h.Validate();
    const int truth = h.Argmax();
    for (std::int64_t t = 0; t < trials; ++t) {
      int best = 0;
      double best_value = 0.0;
      for (std::size_t c = 0; c < h.counts.size(); ++c) {
        const double v = static_cast<double>(h.counts[c]) + sampler(rng);
        if (c == 0 || v > best_value) {
          best_value = v;
          best = static_cast<int>(c);
        }
      }
      if (best == truth) ++hits;
    }
  }
  const double total =
      static_cast<double>(trials) * static_cast<double>(histograms.size());
  const double p = static_cast<double>(hits) / total;
  return {p, std::sqrt(p * (1.0 - p) / total)};
}

UtilityCurve HardmaxCurve(const SimConfig& cfg, const GGParams& noise,
                          std::uint64_t seed) {
  cfg.Validate();
  UtilityCurve curve;
  curve.beta = noise.beta();
  curve.sigma = noise.sigma();
  curve.gaps = cfg.gaps;
  curve.utility.resize(cfg.gaps.size());
  ParallelFor(cfg.gaps.size(), [&](std::size_t i) {
    const double r = cfg.gaps[i];
    Rng hist_rng = MakeRng(seed, {0x68697374ULL, RealTag(r)});
    const auto hists = MakeHistograms(cfg.num_classes, cfg.total_votes, r,
                                      cfg.histograms_per_gap, hist_rng);
    Rng trial_rng = MakeRng(
        seed, {RealTag(noise.beta()), RealTag(noise.sigma()), RealTag(r)});
    curve.utility[i] = HardmaxUtility(hists, noise, cfg.trials, trial_rng);
  });
  return curve;
}

std::vector<double> AucOverGap(const std::vector<UtilityCurve>& curves) {
  std::vector<double> auc;
  if (curves.empty()) return auc;
  const auto& gaps = curves.front().gaps;
  for (const auto& c : curves) {
    if (c.gaps != gaps || c.utility.size() != gaps.size()) {
      throw ParameterError("utility curves must share the runner-up grid");
    }
    double area = 0.0;
    for (std::size_t i = 1; i < gaps.size(); ++i) {
      if (gaps[i - 1] < 0.0 || gaps[i] > 0.1 + 1e-12) continue;
      area += 0.5 * (gaps[i] - gaps[i - 1]) *
              (c.utility[i].value + c.utility[i - 1].value);
    }
    auc.push_back(area);
  }
  const double top = *std::max_element(auc.begin(), auc.end());
  if (top > 0.0) {
    for (double& a : auc) a /= top;
  }
  return auc;
}

HardmaxSweep RunHardmaxSweep(const SimConfig& cfg,
                             const AccountOptions& options, Rng& rng) {
  cfg.Validate();
  PrivacyTarget target;
  target.epsilon = cfg.epsilon;
  target.delta = cfg.delta;
  HardmaxSweep sweep;
  sweep.family = EquivalentFamily(cfg.betas, target, options, rng);
  const std::uint64_t seed = rng();
  for (const auto& row : sweep.family.rows) {
    sweep.curves.push_back(
        HardmaxCurve(cfg, GGParams(row.beta, row.sigma), seed));
  }
  sweep.auc = AucOverGap(sweep.curves);
  return sweep;
}

std::vector<VoteHistogram> ParseHistogramCsv(std::istream& in,
                                             const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw InputError(name + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitFields(line);
  if (header.size() < 3 || header.back() != "true_label") {
    throw InputError(name + ": header must be class_0,...,class_{N-1},true_label");
  }
  const std::size_t classes = header.size() - 1;
  for (std::size_t c = 0; c < classes; ++c) {
    if (header[c] != "class_" + std::to_string(c)) {
      throw InputError(name + ": header column " + std::to_string(c + 1) +
                       " should be class_" + std::to_string(c));
    }
  }
  std::vector<VoteHistogram> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitFields(line);
    const std::string where = name + ": row " + std::to_string(row);
    if (fields.size() != classes + 1) {
      throw InputError(where + ": expected " + std::to_string(classes + 1) +
                       " fields, got " + std::to_string(fields.size()));
    }
    VoteHistogram h;
    for (std::size_t c = 0; c < classes; ++c) {
      std::int64_t v = 0;
      if (!ParseCount(fields[c], v) || v < 0) {
        throw InputError(where + ": bad vote count '" + fields[c] + "'");
      }
      h.counts.push_back(v);
    }
    std::int64_t label = 0;
    if (!ParseCount(fields.back(), label) || label < 0 ||
        label >= static_cast<std::int64_t>(classes)) {
      throw InputError(where + ": bad true_label '" + fields.back() + "'");
    }
    h.true_label = static_cast<int>(label);
    out.push_back(std::move(h));
  }
  if (out.empty()) throw InputError(name + ": no data rows");
  return out;
}

std::vector<VoteHistogram> LoadHistogramCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open histogram file " + path);
  return ParseHistogramCsv(in, path);
}

LabelAccuracy PateLabelAccuracy(const std::vector<VoteHistogram>& histograms,
                                const GGParams& noise, std::int64_t trials,
                                Rng& rng) {
  if (histograms.empty() || trials < 1) {
    throw ParameterError("need histograms and >= 1 trial");
  }
  for (const auto& h : histograms) {
    h.Validate();
    if (!h.true_label) throw InputError("histogram without a true label");
  }
  std::vector<double> acc;
  for (std::int64_t t = 0; t < trials; ++t) {
    std::int64_t correct = 0;
    for (const auto& h : histograms) {
      if (GGNMax(h, noise, rng) == *h.true_label) ++correct;
    }
    acc.push_back(static_cast<double>(correct) /
                  static_cast<double>(histograms.size()));
  }
  LabelAccuracy out;
  for (double a : acc) out.mean += a;
  out.mean /= static_cast<double>(acc.size());
  if (acc.size() > 1) {
    double ss = 0.0;
    for (double a : acc) ss += (a - out.mean) * (a - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(acc.size() - 1));
  }
  return out;
}

void WriteMetricsCsv(const std::vector<MetricRow>& rows, std::ostream& out) {
  out << "beta,sigma,epsilon,delta,metric,value,stderr\n";
  for (const auto& r : rows) {
    out << FormatReal(r.beta) << ',' << FormatReal(r.sigma) << ','
        << (r.epsilon ? FormatReal(*r.epsilon) : std::string()) << ','
        << (r.delta ? FormatReal(*r.delta) : std::string()) << ','
        << r.metric << ',' << FormatReal(r.value) << ','
        << FormatReal(r.std_error) << '\n';
  }
}

}  // namespace ggdp
