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

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "ggdp/accountant.h"
#include "ggdp/calibrate.h"
#include "ggdp/dataset.h"
#include "ggdp/dpsgd.h"
#include "ggdp/errors.h"
#include "ggdp/gg_distribution.h"
#include "ggdp/models.h"
#include "ggdp/parallel.h"
#include "ggdp/random.h"
#include "ggdp/simulate.h"

namespace ggdp::cli {
namespace {

using nlohmann::json;

constexpr const char* kVersion = GGDP_VERSION;
constexpr const char* kSeedEnv = "GG_PRIVACY_SEED";

// Shortest representation that round-trips.
std::string Real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t DefaultSeed() {
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw CLI::ValidationError(std::string(kSeedEnv) +
                                 " must be a non-negative integer");
    }
  }
  return kDefaultSeed;
}

// Flat "key = value" config file; '#' starts a comment. Keys are flag names
// with or without the leading dashes.
std::vector<std::pair<std::string, std::string>> ReadConfigFile(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ConversionError(path + ":" + std::to_string(line_no) +
                                 ": expected key = value");
    }
    std::string key = Trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    std::string value = Trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    entries.emplace_back(key, value);
  }
  return entries;
}

bool HasFlag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Expands --config into explicit flags; values given on the command line
// win over values from the file.
std::vector<std::string> MergeConfig(std::vector<std::string> args) {
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else if (args[i] == "-n") {
      // Spell the only short alias out so file keys can be matched.
      rest.push_back("--count");
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path) return args;
  std::vector<std::string> extra;
  for (const auto& [key, value] : ReadConfigFile(*path)) {
    if (HasFlag(rest, key)) continue;
    if (value == "false") continue;
    extra.push_back(value == "true" ? "--" + key : "--" + key + "=" + value);
  }
  rest.insert(rest.end(), extra.begin(), extra.end());
  return rest;
}

// Settings shared by all subcommands.
struct Common {
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  std::string config;  // consumed by MergeConfig; declared for --help
};

void AddCommon(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed,
                  "Random seed (default overridable via GG_PRIVACY_SEED)");
  sub->add_option("--threads", c.threads,
                  "Worker threads, 0 = one per logical core")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--config", c.config,
                  "Flat key = value file of flag values; flags win");
}

struct AccountFlags {
  std::int64_t samples = 5'000'000;
  std::size_t mesh_bins = std::size_t{1} << 19;
  std::optional<double> trunc;
  std::int64_t tail_replicates = 2000;

  AccountOptions Options() const {
    AccountOptions o;
    o.samples_n = samples;
    o.bins = mesh_bins;
    o.trunc_L = trunc;
    o.tail_replicates = tail_replicates;
    return o;
  }
};

void AddAccountFlags(CLI::App* sub, AccountFlags& a) {
  sub->add_option("--samples", a.samples,
                  "PRV samples n per discretization");
  sub->add_option("--mesh-bins", a.mesh_bins,
                  "Grid cells 2L/h (even, >= 4)");
  sub->add_option("--trunc", a.trunc,
                  "Truncation L (default: chosen from pilot samples)");
  sub->add_option("--tail-replicates", a.tail_replicates,
                  "Monte Carlo replicates for the composed tail bound");
}

struct TargetFlags {
  double epsilon = 1.0;
  double delta = 1e-5;
  double tolerance = 0.05;
  std::int64_t compositions = 1;
  std::optional<double> sample_rate;
  double sensitivity = 1.0;

  PrivacyTarget Target() const {
    PrivacyTarget t;
    t.epsilon = epsilon;
    t.delta = delta;
    t.tolerance = tolerance;
    t.compositions = compositions;
    t.sample_rate = sample_rate;
    t.sensitivity = sensitivity;
    return t;
  }
};

void AddTargetFlags(CLI::App* sub, TargetFlags& t, bool epsilon_required) {
  auto* eps = sub->add_option("--epsilon", t.epsilon, "Target epsilon");
  if (epsilon_required) eps->required();
  sub->add_option("--delta", t.delta, "Target delta");
  sub->add_option("--tolerance", t.tolerance,
                  "Accepted gap between target and achieved epsilon");
  sub->add_option("--compositions", t.compositions, "Number of compositions k");
  sub->add_option("--sample-rate", t.sample_rate, "Poisson sampling rate q");
  sub->add_option("--sensitivity", t.sensitivity, "l_beta sensitivity");
}

// Everything a subcommand produced, for the manifest.
struct RunRecord {
  std::string subcommand;
  std::vector<std::string> args;  // replayable argument list
  json config = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
};

void WriteManifests(const RunRecord& record) {
  if (record.outputs.empty()) return;
  json m = {{"subcommand", record.subcommand},
            {"config", record.config},
            {"args", record.args},
            {"seed", record.seed},
            {"version", kVersion},
            {"outputs", record.outputs}};
  for (const auto& path : record.outputs) {
    std::ofstream f(path + ".manifest.json");
    if (!f) throw InputError("cannot write manifest for " + path);
    f << m.dump(2) << "\n";
  }
}

// Opens `path` for writing or falls back to `out` when path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, RunRecord& record) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw InputError("cannot write " + path);
    stream_ = file_.get();
    record.outputs.push_back(path);
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

void ResolveConfig(const CLI::App* sub, RunRecord& record) {
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->get_expected_min() == 0) {
      record.config[name] = opt->count() > 0 && opt->as<bool>();
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      std::string joined;
      for (std::size_t i = 0; i < r.size(); ++i) {
        joined += (i ? "," : "") + r[i];
      }
      record.config[name] = joined;
    } else if (!opt->get_default_str().empty()) {
      record.config[name] = opt->get_default_str();
    } else {
      record.config[name] = nullptr;
    }
  }
}

// ---------------------------------------------------------------- commands

struct EpsilonCmd {
  Common common;
  AccountFlags account;
  double beta = 2.0;
  double sigma = 1.0;
  std::optional<double> delta;
  std::optional<double> at_epsilon;
  double sensitivity = 1.0;
  std::int64_t compositions = 1;
  std::optional<double> sample_rate;
  std::string out_path;

  void Add(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "epsilon", "Account a GG mechanism: epsilon at delta (or delta at "
                   "epsilon) with error bounds");
    sub->add_option("--beta", beta, "Shape beta in [1, 64]")->required();
    sub->add_option("--sigma", sigma, "Scale sigma > 0")->required();
    auto* d = sub->add_option("--delta", delta, "Report epsilon at this delta (default 1e-5)");
    auto* e = sub->add_option("--at-epsilon", at_epsilon,
                              "Report delta at this epsilon instead");
    d->excludes(e);
    sub->add_option("--sensitivity", sensitivity, "l_beta sensitivity");
    sub->add_option("--compositions", compositions, "Number of compositions k");
    sub->add_option("--sample-rate", sample_rate, "Poisson sampling rate q");
    sub->add_option("--out", out_path, "Write the privacy curve JSON here");
    AddAccountFlags(sub, account);
    AddCommon(sub, common);
  }

  void Run(std::ostream& out, RunRecord& record) {
    MechanismSpec spec{GGParams(beta, sigma), sensitivity, sample_rate,
                       compositions};
    const AccountingTarget target =
        at_epsilon ? AccountingTarget::DeltaFor(*at_epsilon)
                   : AccountingTarget::EpsilonFor(delta.value_or(1e-5));
    Rng rng(common.seed);
    const AccountingResult r = Account(spec, account.Options(), target, rng);
    out << "epsilon=" << Real(r.epsilon) << "\n"
        << "delta=" << Real(r.delta) << "\n"
        << "eta=" << Real(r.bounds.eta) << "\n"
        << "tau=" << Real(r.bounds.tau) << "\n"
        << "epsilon_reported=" << Real(r.epsilon_reported) << "\n"
        << "delta_reported=" << Real(r.delta_reported) << "\n"
        << "trunc_L=" << Real(r.config.trunc_L) << "\n"
        << "mesh_h=" << Real(r.config.mesh_h) << "\n";
    if (!out_path.empty()) {
      Sink sink(out_path, out, record);
      json j = r.curve.ToJson();
      j["epsilon_at_target"] = r.epsilon;
      j["delta_at_target"] = r.delta;
      *sink << j.dump(2) << "\n";
    }
  }
};

struct SolveSigmaCmd {
  Common common;
  AccountFlags account;
  TargetFlags target;
  double beta = 2.0;
  std::string out_path;

  void Add(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "solve-sigma", "Find the smallest sigma meeting an (epsilon, delta) target");
    sub->add_option("--beta", beta, "Shape beta in [1, 64]")->required();
    AddTargetFlags(sub, target, true);
    sub->add_option("--out", out_path, "Write the solution JSON here");
    AddAccountFlags(sub, account);
    AddCommon(sub, common);
  }

  void Run(std::ostream& out, RunRecord& record) {
    Rng rng(common.seed);
    const SigmaSolution s =
        SolveSigma(beta, target.Target(), account.Options(), rng);
    out << "sigma=" << Real(s.sigma) << "\n"
        << "bracket_low=" << Real(s.bracket_low) << "\n"
        << "bracket_high=" << Real(s.sigma) << "\n"
        << "epsilon=" << Real(s.epsilon) << "\n"
        << "probes=" << s.probes << "\n";
    if (!out_path.empty()) {
      Sink sink(out_path, out, record);
      *sink << json{{"beta", beta},
                    {"sigma", s.sigma},
                    {"bracket_low", s.bracket_low},
                    {"bracket_high", s.sigma},
                    {"epsilon", s.epsilon},
                    {"target_epsilon", target.epsilon},
                    {"delta", target.delta},
                    {"probes", s.probes}}
                   .dump(2)
            << "\n";
    }
  }
};

struct FamilyCmd {
  Common common;
  AccountFlags account;
  TargetFlags target;
  std::string betas = "1:4:0.5";
  std::string format = "csv";
  std::string out_path;

  void Add(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "family", "Solve sigma for each beta at a common privacy target");
    AddTargetFlags(sub, target, true);
    sub->add_option("--betas", betas, "Beta grid, start:stop:step or a,b,c");
    sub->add_option("--format", format, "csv (beta,sigma) or json (with solver detail)")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Write the table here (default stdout)");
    AddAccountFlags(sub, account);
    AddCommon(sub, common);
  }

  void Run(std::ostream& out, std::ostream& err, RunRecord& record) {
    Rng rng(common.seed);
    const Family f =
        EquivalentFamily(ParseGrid(betas), target.Target(), account.Options(), rng);
    Sink sink(out_path, out, record);
    if (format == "json") {
      json rows = json::array();
      for (const auto& row : f.rows) {
        rows.push_back({{"beta", row.beta},
                        {"sigma", row.sigma},
                        {"epsilon", row.epsilon},
                        {"bracket_low", row.bracket_low}});
      }
      *sink << json{{"epsilon", target.epsilon},
                    {"delta", target.delta},
                    {"compositions", target.compositions},
                    {"sigma_increasing", f.sigma_increasing},
                    {"rows", rows}}
                   .dump(2)
            << "\n";
    } else {
      *sink << "beta,sigma\n";
      for (const auto& row : f.rows) {
        *sink << Real(row.beta) << ',' << Real(row.sigma) << '\n';
      }
    }
    err << "sigma increasing in beta: " << (f.sigma_increasing ? "yes" : "no")
        << "\n";
  }
};

struct TailWeightCmd {
  Common common;
  AccountFlags account;
  TargetFlags target;
  std::string betas = "1:4:0.25";
  std::string cutoffs = "1,2,4";
  bool smooth = false;
  std::string out_path;

  void Add(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "tail-weight", "Tail mass Pr[|Z| >= cutoff] across an equal-privacy family");
    AddTargetFlags(sub, target, true);
    sub->add_option("--betas", betas, "Beta grid, start:stop:step or a,b,c");
    sub->add_option("--cutoffs", cutoffs, "Tail thresholds tau, start:stop:step or a,b,c");
    sub->add_flag("--smooth", smooth,
                  "Add a Savitzky-Golay smoothed column (order 2, window 5)");
    sub->add_option("--out", out_path, "Write the CSV here (default stdout)");
    AddAccountFlags(sub, account);
    AddCommon(sub, common);
  }

  void Run(std::ostream& out, RunRecord& record) {
    TailQuery q;
    q.cutoffs = ParseGrid(cutoffs);
    q.target = target.Target();
    q.betas = ParseGrid(betas);
    q.smooth = smooth;
    Rng rng(common.seed);
    const auto rows = TailWeight(q, account.Options(), rng);
    Sink sink(out_path, out, record);
    *sink << "beta,tau,weight" << (smooth ? ",smoothed" : "") << "\n";
    for (const auto& r : rows) {
      *sink << Real(r.beta) << ',' << Real(r.cutoff) << ',' << Real(r.weight);
      if (smooth) *sink << ',' << Real(r.smoothed.value_or(r.weight));
      *sink << '\n';
    }
  }
};

struct SimulateArgmaxCmd {
  Common common;
  AccountFlags account;
  int classes = 2;
  std::int64_t votes = 1000;
  std::string gaps;
  std::int64_t histograms = 500;
  std::int64_t trials = 50;
  double epsilon = 1.0;
  double delta = 1e-5;
  std::string betas = "1:4:0.5";
  std::string out_path;

  void Add(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "simulate-argmax",
        "Hardmax utility of GGNMax on constructed vote histograms");
    sub->add_option("--classes", classes, "Number of classes N");
    sub->add_option("--votes", votes, "Total votes V");
    sub->add_option("--gaps", gaps,
                    "Runner-up grid r (default 0.001 then 0.005:0.2:0.005)");
    sub->add_option("--histograms", histograms, "Histograms per r");
    sub->add_option("--trials", trials, "GGNMax runs per histogram");
    sub->add_option("--epsilon", epsilon, "Common privacy target epsilon");
    sub->add_option("--delta", delta, "Common privacy target delta");
    sub->add_option("--betas", betas, "Beta grid, start:stop:step or a,b,c");
    sub->add_option("--out", out_path, "Write the metrics CSV here (default stdout)");
    AddAccountFlags(sub, account);
    AddCommon(sub, common);
  }

  void Run(std::ostream& out, RunRecord& record) {
    SimConfig cfg;
    cfg.num_classes = classes;
    cfg.total_votes = votes;
    cfg.gaps = gaps.empty() ? SimConfig::DefaultGaps() : ParseGrid(gaps);
    cfg.histograms_per_gap = histograms;
    cfg.trials = trials;
    cfg.epsilon = epsilon;
    cfg.delta = delta;
    cfg.betas = ParseGrid(betas);
    Rng rng(common.seed);
    const HardmaxSweep sweep = RunHardmaxSweep(cfg, account.Options(), rng);
    std::vector<MetricRow> rows;
    for (std::size_t i = 0; i < sweep.curves.size(); ++i) {
      const auto& c = sweep.curves[i];
      for (std::size_t g = 0; g < c.gaps.size(); ++g) {
        rows.push_back({c.beta, c.sigma, epsilon, delta,
                        "hardmax_utility:r=" + Real(c.gaps[g]),
                        c.utility[g].value, c.utility[g].std_error});
      }
      rows.push_back({c.beta, c.sigma, epsilon, delta, "auc", sweep.auc[i], 0.0});
    }
    Sink sink(out_path, out, record);
    WriteMetricsCsv(rows, *sink);
  }
};

struct PateLabelCmd {
  Common common;
  AccountFlags account;
  std::string histograms;
  std::string betas = "1:4:0.5";
  std::string sigmas;
  std::optional<double> epsilon;
  double delta = 1e-5;
  std::int64_t trials = 25;
  std::string out_path;

  void Add(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "pate-label", "GGNMax label accuracy on teacher vote histograms");
    sub->add_option("--histograms", histograms,
                    "CSV with class_0..class_{N-1},true_label")
        ->required();
    sub->add_option("--betas", betas, "Beta grid, start:stop:step or a,b,c");
    auto* s = sub->add_option("--sigmas", sigmas,
                              "Sigma grid evaluated for every beta");
    auto* e = sub->add_option("--epsilon", epsilon,
                              "Solve sigma per beta for this epsilon instead");
    s->excludes(e);
    sub->add_option("--delta", delta, "Delta used with --epsilon");
    sub->add_option("--trials", trials, "Trials per noise setting");
    sub->add_option("--out", out_path, "Write the metrics CSV here (default stdout)");
    AddAccountFlags(sub, account);
    AddCommon(sub, common);
  }

  void Run(std::ostream& out, RunRecord& record) {
    const auto hists = LoadHistogramCsv(histograms);
    struct Setting {
      double beta;
      double sigma;
    };
    std::vector<Setting> settings;
    Rng rng(common.seed);
    if (epsilon) {
      PrivacyTarget target;
      target.epsilon = *epsilon;
      target.delta = delta;
      const Family f =
          EquivalentFamily(ParseGrid(betas), target, account.Options(), rng);
      for (const auto& row : f.rows) settings.push_back({row.beta, row.sigma});
    } else {
      if (sigmas.empty()) {
        throw ParameterError("pate-label needs --sigmas or --epsilon");
      }
      for (double b : ParseGrid(betas)) {
        for (double s : ParseGrid(sigmas)) settings.push_back({b, s});
      }
    }
    const std::uint64_t seed = rng();
    std::vector<MetricRow> rows;
    for (const auto& st : settings) {
      Rng trial_rng = MakeRng(seed, {RealTag(st.beta), RealTag(st.sigma)});
      const LabelAccuracy acc = PateLabelAccuracy(
          hists, GGParams(st.beta, st.sigma), trials, trial_rng);
      std::optional<double> eps_col;
      std::optional<double> delta_col;
      if (epsilon) {
        eps_col = *epsilon;
        delta_col = delta;
      }
      rows.push_back({st.beta, st.sigma, eps_col, delta_col, "label_accuracy",
                      acc.mean,
                      acc.stddev / std::sqrt(static_cast<double>(trials))});
      rows.push_back({st.beta, st.sigma, eps_col, delta_col,
                      "label_accuracy_stddev", acc.stddev, 0.0});
    }
    Sink sink(out_path, out, record);
    WriteMetricsCsv(rows, *sink);
  }
};

struct TrainCmd {
  Common common;
  AccountFlags account;
  std::string dataset = "synthetic";
  std::string test_dataset;
  std::string model = "logistic";
  double beta = 2.0;
  std::optional<double> sigma;
  double clip = 1.0;
  double learning_rate = 0.5;
  double batch = 64.0;
  std::int64_t epochs = 10;
  std::optional<double> target_epsilon;
  double delta = 1e-5;
  bool non_private = false;
  std::size_t synthetic_size = 2000;
  std::size_t synthetic_dim = 20;
  double separation = 4.0;
  std::string out_path;

  void Add(CLI::App& app) {
    auto* sub = app.add_subcommand(
        "train", "beta-DP-SGD on a CSV dataset or synthetic Gaussian blobs");
    sub->add_option("--dataset", dataset,
                    "'synthetic' or a CSV path (features..., label)");
    sub->add_option("--test-dataset", test_dataset,
                    "Held-out CSV (synthetic runs draw their own)");
    sub->add_option("--model", model, "logistic or mlp");
    sub->add_option("--beta", beta, "Noise shape and clipping norm beta");
    sub->add_option("--sigma", sigma,
                    "Noise scale multiplier (default: solved for "
                    "--target-epsilon over the full run)");
    sub->add_option("--clip", clip, "Clipping norm C");
    sub->add_option("--learning-rate", learning_rate, "Step size");
    sub->add_option("--batch", batch, "Expected batch size");
    sub->add_option("--epochs", epochs, "Epochs");
    sub->add_option("--target-epsilon", target_epsilon,
                    "Stop before exceeding this epsilon");
    sub->add_option("--delta", delta, "Delta for accounting");
    sub->add_flag("--non-private", non_private,
                  "Train the baseline without clipping, noise or accounting");
    sub->add_option("--synthetic-size", synthetic_size,
                    "Training points for --dataset synthetic");
    sub->add_option("--synthetic-dim", synthetic_dim,
                    "Features for --dataset synthetic");
    sub->add_option("--separation", separation,
                    "Distance between synthetic class means");
    sub->add_option("--out", out_path, "Write the JSON-lines log here (default stdout)");
    AddAccountFlags(sub, account);
    AddCommon(sub, common);
  }

  void Run(std::ostream& out, std::ostream& err, RunRecord& record) {
    Dataset train;
    Dataset test;
    bool have_test = false;
    if (dataset == "synthetic") {
      Rng data_rng = MakeRng(common.seed, {0x64617461ULL});
      train = MakeGaussianBlobs(synthetic_size, synthetic_dim, separation,
                                data_rng);
      test = MakeGaussianBlobs(std::max<std::size_t>(synthetic_size / 2, 2),
                               synthetic_dim, separation, data_rng);
      have_test = true;
    } else {
      train = LoadDatasetCsv(dataset);
    }
    if (!test_dataset.empty()) {
      test = LoadDatasetCsv(test_dataset);
      have_test = true;
    }
    if (have_test) {
      if (test.num_features != train.num_features) {
        throw InputError("test set has a different number of features");
      }
      train.num_classes = test.num_classes =
          std::max(train.num_classes, test.num_classes);
    }
    const auto m = MakeModel(model, train.num_features, train.num_classes);

    TrainConfig cfg;
    cfg.clip_norm = clip;
    cfg.learning_rate = learning_rate;
    cfg.expected_batch = batch;
    cfg.epochs = epochs;
    cfg.target_epsilon = target_epsilon;
    cfg.delta = delta;
    cfg.private_mode = !non_private;
    cfg.accounting = account.Options();
    cfg.Validate();

    double noise_sigma = sigma.value_or(1.0);
    if (cfg.private_mode && !sigma) {
      if (!target_epsilon) {
        throw ParameterError("train needs --sigma or --target-epsilon");
      }
      PrivacyTarget t;
      t.epsilon = *target_epsilon;
      t.delta = delta;
      t.compositions = cfg.StepsPerEpoch(train.size()) * epochs;
      t.sample_rate = cfg.SampleRate(train.size());
      Rng solve_rng = MakeRng(common.seed, {0x736f6c76ULL});
      const SigmaSolution s = SolveSigma(beta, t, cfg.accounting, solve_rng);
      noise_sigma = s.sigma;
      err << "solved sigma=" << Real(noise_sigma) << " for "
          << t.compositions << " steps at q=" << Real(*t.sample_rate) << "\n";
    }
    cfg.noise = GGParams(beta, noise_sigma);

    Rng rng = MakeRng(common.seed, {0x747261696eULL});
    const TrainResult result =
        BetaDpSgd(*m, train, have_test ? &test : nullptr, cfg, rng);
    Sink sink(out_path, out, record);
    for (const auto& e : result.log) *sink << e.ToJson().dump() << "\n";
    err << "steps=" << result.steps << " sigma=" << Real(noise_sigma)
        << (result.halted_by_budget ? " (halted by privacy budget)" : "")
        << "\n";
  }
};

struct SampleCmd {
  Common common;
  double beta = 2.0;
  double sigma = 1.0;
  std::int64_t count = 10;
  std::string out_path;

  void Add(CLI::App& app) {
    auto* sub = app.add_subcommand("sample", "Draw N_beta(0, sigma) samples");
    sub->add_option("--beta", beta, "Shape beta in [1, 64]")->required();
    sub->add_option("--sigma", sigma, "Scale sigma > 0")->required();
    sub->add_option("-n,--count", count, "Number of samples")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_path, "Write one sample per line here (default stdout)");
    AddCommon(sub, common);
  }

  void Run(std::ostream& out, RunRecord& record) {
    Rng rng(common.seed);
    const auto xs = SampleGG(GGParams(beta, sigma), rng,
                             static_cast<std::size_t>(count));
    Sink sink(out_path, out, record);
    for (double x : xs) *sink << Real(x) << "\n";
  }
};

int Execute(const std::vector<std::string>& raw_args, std::ostream& out,
            std::ostream& err, int depth);

int Replay(const std::string& manifest_path, std::ostream& out,
           std::ostream& err, int depth) {
  std::ifstream in(manifest_path);
  if (!in) throw InputError("cannot read manifest " + manifest_path);
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw InputError(manifest_path + ": " + e.what());
  }
  if (!m.contains("args") || !m["args"].is_array()) {
    throw InputError(manifest_path + ": missing args");
  }
  std::vector<std::string> args = {"ggdp"};
  for (const auto& a : m["args"]) args.push_back(a.get<std::string>());
  return Execute(args, out, err, depth + 1);
}

int Execute(const std::vector<std::string>& raw_args, std::ostream& out,
            std::ostream& err, int depth) {
  CLI::App app{"Generalized Gaussian differential privacy toolkit", "ggdp"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  EpsilonCmd epsilon_cmd;
  SolveSigmaCmd solve_cmd;
  FamilyCmd family_cmd;
  TailWeightCmd tail_cmd;
  SimulateArgmaxCmd sim_cmd;
  PateLabelCmd pate_cmd;
  TrainCmd train_cmd;
  SampleCmd sample_cmd;
  std::string replay_path;

  std::uint64_t default_seed = kDefaultSeed;
  try {
    default_seed = DefaultSeed();
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (Common* c : {&epsilon_cmd.common, &solve_cmd.common, &family_cmd.common,
                    &tail_cmd.common, &sim_cmd.common, &pate_cmd.common,
                    &train_cmd.common, &sample_cmd.common}) {
    c->seed = default_seed;
  }

  epsilon_cmd.Add(app);
  solve_cmd.Add(app);
  family_cmd.Add(app);
  tail_cmd.Add(app);
  sim_cmd.Add(app);
  pate_cmd.Add(app);
  train_cmd.Add(app);
  sample_cmd.Add(app);
  auto* replay = app.add_subcommand(
      "replay", "Re-run the command recorded in a manifest file");
  replay->add_option("manifest", replay_path, "Path to a .manifest.json")
      ->required();

  std::vector<std::string> args;
  try {
    args = MergeConfig(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (replay->parsed()) {
      if (depth > 0) throw InputError("a manifest cannot replay another manifest");
      return Replay(replay_path, out, err, depth);
    }
    CLI::App* sub = app.get_subcommands().front();
    Common* common = nullptr;
    for (auto [name, c] :
         std::initializer_list<std::pair<const char*, Common*>>{
             {"epsilon", &epsilon_cmd.common},
             {"solve-sigma", &solve_cmd.common},
             {"family", &family_cmd.common},
             {"tail-weight", &tail_cmd.common},
             {"simulate-argmax", &sim_cmd.common},
             {"pate-label", &pate_cmd.common},
             {"train", &train_cmd.common},
             {"sample", &sample_cmd.common}}) {
      if (sub->get_name() == name) common = c;
    }
    SetThreadCount(common->threads);

    RunRecord record;
    record.subcommand = sub->get_name();
    record.seed = common->seed;
    record.args.assign(args.begin() + 1, args.end());
    if (!HasFlag(record.args, "seed")) {
      record.args.push_back("--seed=" + std::to_string(common->seed));
    }
    ResolveConfig(sub, record);
    record.config["seed"] = std::to_string(common->seed);

    const std::string& name = record.subcommand;
    if (name == "epsilon") epsilon_cmd.Run(out, record);
    if (name == "solve-sigma") solve_cmd.Run(out, record);
    if (name == "family") family_cmd.Run(out, err, record);
    if (name == "tail-weight") tail_cmd.Run(out, record);
    if (name == "simulate-argmax") sim_cmd.Run(out, record);
    if (name == "pate-label") pate_cmd.Run(out, record);
    if (name == "train") train_cmd.Run(out, err, record);
    if (name == "sample") sample_cmd.Run(out, record);
    WriteManifests(record);
  } catch (const ggdp::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace

std::vector<double> ParseGrid(const std::string& text) {
  const std::string t = Trim(text);
  if (t.empty()) throw CLI::ValidationError("empty grid");
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(Trim(s), &used);
    } catch (...) {
      used = std::string::npos;
    }
    if (used != Trim(s).size() || !std::isfinite(v)) {
      throw CLI::ValidationError("bad number '" + s + "' in grid '" + text + "'");
    }
    return v;
  };
  std::vector<double> out;
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) {
      throw CLI::ValidationError("range grid must be start:stop:step");
    }
    const double a = number(parts[0]);
    const double b = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || b < a) {
      throw CLI::ValidationError("range grid needs start <= stop and step > 0");
    }
    const auto count =
        static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw CLI::ValidationError("grid too large");
    for (std::int64_t i = 0; i < count; ++i) {
      out.push_back(a + static_cast<double>(i) * step);
    }
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item));
  return out;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  if (args.empty()) return kExitUsage;
  return Execute(args, out, err, 0);
}

}  // namespace ggdp::cli
