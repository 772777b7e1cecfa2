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

#include "ggdp/dpsgd.h"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "ggdp/accountant.h"
#include "ggdp/dataset.h"
#include "ggdp/errors.h"
#include "ggdp/models.h"
#include "gtest/gtest.h"

namespace ggdp {
namespace {

AccountOptions FastOptions() {
  AccountOptions o;
  o.bins = std::size_t{1} << 16;
  o.samples_n = 1'000'000;
  o.error_bounds = false;
  return o;
}

double SoftmaxLoss(const std::vector<double>& logits, int label) {
  double mx = logits[0];
  for (double z : logits) mx = std::max(mx, z);
  double s = 0.0;
  for (double z : logits) s += std::exp(z - mx);
  return std::log(s) + mx - logits[static_cast<std::size_t>(label)];
}

// Cross-entropy of the logistic model, W (classes x features) then b.
double LogisticLoss(const std::vector<double>& p, const std::vector<double>& x,
                    int classes, int label) {
  const std::size_t d = x.size();
  std::vector<double> logits(static_cast<std::size_t>(classes));
  for (std::size_t c = 0; c < logits.size(); ++c) {
    double z = p[classes * d + c];
    for (std::size_t j = 0; j < d; ++j) z += p[c * d + j] * x[j];
    logits[c] = z;
  }
  return SoftmaxLoss(logits, label);
}

// Cross-entropy of the tanh network: W1 (h x d), b1, W2 (classes x h), b2.
double MlpLoss(const std::vector<double>& p, const std::vector<double>& x,
               int classes, std::size_t h, int label) {
  const std::size_t d = x.size();
  std::vector<double> a(h);
  for (std::size_t k = 0; k < h; ++k) {
    double z = p[h * d + k];
    for (std::size_t j = 0; j < d; ++j) z += p[k * d + j] * x[j];
    a[k] = std::tanh(z);
  }
  const std::size_t w2 = h * d + h;
  const std::size_t b2 = w2 + static_cast<std::size_t>(classes) * h;
  std::vector<double> logits(static_cast<std::size_t>(classes));
  for (std::size_t c = 0; c < logits.size(); ++c) {
    double z = p[b2 + c];
    for (std::size_t k = 0; k < h; ++k) z += p[w2 + c * h + k] * a[k];
    logits[c] = z;
  }
  return SoftmaxLoss(logits, label);
}

void ExpectGradientMatches(const Model& model, std::vector<double> params,
                           const std::vector<double>& x, int label,
                           const std::function<double(const std::vector<double>&)>& loss) {
  std::vector<double> grad(params.size());
  model.Gradient(params, x, label, grad);
  const double eps = 1e-6;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = params[i];
    params[i] = keep + eps;
    const double up = loss(params);
    params[i] = keep - eps;
    const double down = loss(params);
    params[i] = keep;
    EXPECT_NEAR(grad[i], (up - down) / (2 * eps), 1e-6) << "param " << i;
  }
}

TEST(ModelTest, LogisticGradientMatchesFiniteDifferences) {
  const LogisticModel model(4, 3);
  ASSERT_EQ(model.num_params(), 15u);
  Rng rng(1);
  std::normal_distribution<double> normal;
  std::vector<double> params(model.num_params());
  for (double& v : params) v = normal(rng);
  const std::vector<double> x = {0.5, -1.0, 2.0, 0.1};
  for (int label = 0; label < 3; ++label) {
    ExpectGradientMatches(model, params, x, label, [&](const std::vector<double>& p) {
      return LogisticLoss(p, x, 3, label);
    });
  }
}

TEST(ModelTest, MlpGradientMatchesFiniteDifferences) {
  const MlpModel model(3, 2, 5);
  ASSERT_EQ(model.num_params(), 5u * 3 + 5 + 2 * 5 + 2);
  Rng rng(2);
  const std::vector<double> params = model.Init(rng);
  const std::vector<double> x = {1.0, -0.3, 0.7};
  for (int label = 0; label < 2; ++label) {
    ExpectGradientMatches(model, params, x, label, [&](const std::vector<double>& p) {
      return MlpLoss(p, x, 2, 5, label);
    });
  }
}

TEST(ModelTest, FactoryAndAccuracy) {
  EXPECT_EQ(MakeModel("logistic", 3, 2)->name(), "logistic");
  EXPECT_EQ(MakeModel("mlp", 3, 2)->num_params(), 32u * 3 + 32 + 2 * 32 + 2);
  EXPECT_THROW(MakeModel("resnet", 3, 2), ParameterError);
  Dataset data;
  data.num_features = 1;
  data.num_classes = 2;
  data.features = {-1.0, -2.0, 3.0, 4.0};
  data.labels = {0, 0, 1, 0};
  const LogisticModel model(1, 2);
  // Logit of class 1 is x, class 0 is 0: predicts 1 for positive x.
  const std::vector<double> params = {0.0, 1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(Accuracy(model, params, data), 0.75);
  EXPECT_DOUBLE_EQ(data.MajorityRate(), 0.75);
}

TEST(DatasetTest, GaussianBlobsShape) {
  Rng rng(3);
  const Dataset d = MakeGaussianBlobs(2000, 20, 4.0, rng);
  ASSERT_EQ(d.size(), 2000u);
  EXPECT_EQ(d.num_features, 20u);
  EXPECT_EQ(d.num_classes, 2);
  EXPECT_DOUBLE_EQ(d.MajorityRate(), 0.5);
  // Class means sit at +-2 along (1,...,1)/sqrt(20).
  double proj[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < d.size(); ++i) {
    double s = 0.0;
    for (double v : d.row(i)) s += v;
    proj[d.labels[i]] += s / std::sqrt(20.0) / 1000.0;
  }
  EXPECT_NEAR(proj[1] - proj[0], 4.0, 0.15);
}

TEST(DatasetTest, CsvRoundTripAndErrors) {
  Rng rng(4);
  const Dataset d = MakeGaussianBlobs(10, 3, 2.0, rng);
  const std::string path = ::testing::TempDir() + "/ggdp_blobs.csv";
  SaveDatasetCsv(d, path);
  const Dataset back = LoadDatasetCsv(path);
  EXPECT_EQ(back.labels, d.labels);
  ASSERT_EQ(back.features.size(), d.features.size());
  for (std::size_t i = 0; i < d.features.size(); ++i) {
    EXPECT_NEAR(back.features[i], d.features[i], 1e-12);
  }
  const std::string bad = ::testing::TempDir() + "/ggdp_bad.csv";
  {
    std::ofstream out(bad);
    out << "x0,label\n1.0,0\n2.0,1\nfoo,1\n";
  }
  try {
    LoadDatasetCsv(bad);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find(":4:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(LoadDatasetCsv(::testing::TempDir() + "/missing.csv"), InputError);
}

TEST(TrainConfigTest, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  EXPECT_EQ(cfg.StepsPerEpoch(2000), 31);
  EXPECT_DOUBLE_EQ(cfg.SampleRate(2000), 64.0 / 2000.0);
  EXPECT_THROW(cfg.SampleRate(10), ParameterError);
  cfg.clip_norm = 0.0;
  EXPECT_THROW(cfg.Validate(), ParameterError);
  cfg = TrainConfig();
  cfg.epochs = 0;
  EXPECT_THROW(cfg.Validate(), ParameterError);
  cfg = TrainConfig();
  cfg.expected_batch = 0.5;
  EXPECT_THROW(cfg.Validate(), ParameterError);
}

struct Blobs {
  Dataset train;
  Dataset test;
};

Blobs MakeBlobs() {
  Rng rng(5);
  return {MakeGaussianBlobs(2000, 20, 4.0, rng), MakeGaussianBlobs(1000, 20, 4.0, rng)};
}

TEST(BetaDpSgdTest, PureNoiseGivesChanceAccuracy) {
  // Features carry no information about the labels.
  Rng rng(6);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution coin(0.5);
  auto noise_data = [&](std::size_t n) {
    Dataset d;
    d.num_features = 5;
    d.num_classes = 2;
    for (std::size_t i = 0; i < n * 5; ++i) d.features.push_back(normal(rng));
    for (std::size_t i = 0; i < n; ++i) d.labels.push_back(coin(rng) ? 1 : 0);
    return d;
  };
  const Dataset train = noise_data(500);
  const Dataset test = noise_data(4000);
  TrainConfig cfg;
  cfg.noise = GGParams(2.0, 1e6);
  cfg.epochs = 3;
  cfg.accounting = FastOptions();
  const LogisticModel model(5, 2);
  const TrainResult r = BetaDpSgd(model, train, &test, cfg, rng);
  EXPECT_NEAR(r.log.back().test_acc, test.MajorityRate(), 0.05);
}

TEST(BetaDpSgdTest, PrivateTrainingTracksBaseline) {
  const Blobs b = MakeBlobs();
  const LogisticModel model(20, 2);
  TrainConfig cfg;
  cfg.noise = GGParams(2.0, 1.5);
  cfg.epochs = 5;
  cfg.accounting = FastOptions();
  Rng r1(7);
  const TrainResult priv = BetaDpSgd(model, b.train, &b.test, cfg, r1);
  cfg.private_mode = false;
  Rng r2(7);
  const TrainResult base = BetaDpSgd(model, b.train, &b.test, cfg, r2);
  EXPECT_GE(base.log.back().test_acc, 0.9);
  EXPECT_GE(priv.log.back().test_acc, base.log.back().test_acc - 0.07);
  EXPECT_EQ(base.log.back().epsilon, 0.0);
}

TEST(BetaDpSgdTest, EpsilonIncreasesEveryEpoch) {
  const Blobs b = MakeBlobs();
  const LogisticModel model(20, 2);
  TrainConfig cfg;
  cfg.noise = GGParams(1.5, 2.0);
  cfg.epochs = 6;
  cfg.accounting = FastOptions();
  Rng rng(8);
  const TrainResult r = BetaDpSgd(model, b.train, &b.test, cfg, rng);
  ASSERT_EQ(r.log.size(), 6u);
  EXPECT_EQ(r.steps, 6 * 31);
  EXPECT_FALSE(r.halted_by_budget);
  for (std::size_t i = 1; i < r.log.size(); ++i) {
    EXPECT_GT(r.log[i].epsilon, r.log[i - 1].epsilon);
    EXPECT_EQ(r.log[i].steps, r.log[i - 1].steps + 31);
  }
  const auto j = r.log.front().ToJson();
  for (const char* key : {"epoch", "epsilon", "delta", "train_acc", "test_acc"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(BetaDpSgdTest, BitwiseDeterministic) {
  const Blobs b = MakeBlobs();
  const MlpModel model(20, 2, 8);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.accounting = FastOptions();
  Rng r1(9);
  Rng r2(9);
  const TrainResult a = BetaDpSgd(model, b.train, &b.test, cfg, r1);
  const TrainResult c = BetaDpSgd(model, b.train, &b.test, cfg, r2);
  EXPECT_EQ(a.params, c.params);
  ASSERT_EQ(a.log.size(), c.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].epsilon, c.log[i].epsilon);
    EXPECT_EQ(a.log[i].test_acc, c.log[i].test_acc);
  }
}

TEST(BetaDpSgdTest, HaltsWithinBudget) {
  const Blobs b = MakeBlobs();
  const LogisticModel model(20, 2);
  TrainConfig cfg;
  cfg.noise = GGParams(2.0, 3.0);
  cfg.epochs = 20;
  cfg.target_epsilon = 1.0;
  cfg.accounting = FastOptions();
  Rng rng(10);
  const TrainResult r = BetaDpSgd(model, b.train, &b.test, cfg, rng);
  EXPECT_TRUE(r.halted_by_budget);
  EXPECT_LT(r.steps, 20 * 31);
  EXPECT_LE(r.log.back().epsilon, 1.0);
  EXPECT_EQ(r.log.back().steps, r.steps);
}

TEST(BetaDpSgdTest, BudgetErrorNamesSingleStepCost) {
  const Blobs b = MakeBlobs();
  const LogisticModel model(20, 2);
  TrainConfig cfg;
  cfg.noise = GGParams(2.0, 0.5);
  cfg.epochs = 1;
  cfg.target_epsilon = 1e-3;
  cfg.accounting = FastOptions();
  Rng rng(11);
  try {
    BetaDpSgd(model, b.train, &b.test, cfg, rng);
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    EXPECT_NE(std::string(e.what()).find("one step costs epsilon"), std::string::npos);
  }
}

TEST(BetaDpSgdTest, FullBatchSingleStepMatchesPlainAccountant) {
  Rng data_rng(12);
  const Dataset train = MakeGaussianBlobs(64, 5, 4.0, data_rng);
  const LogisticModel model(5, 2);
  TrainConfig cfg;
  cfg.noise = GGParams(1.5, 1.2);
  cfg.epochs = 1;
  cfg.expected_batch = 64.0;
  cfg.accounting = FastOptions();
  ASSERT_EQ(cfg.SampleRate(train.size()), 1.0);
  Rng rng(13);
  const TrainResult r = BetaDpSgd(model, train, nullptr, cfg, rng);
  ASSERT_EQ(r.steps, 1);
  AccountOptions options = FastOptions();
  options.error_bounds = true;
  options.tail_replicates = 200;
  Rng acc_rng(14);
  const AccountingResult plain =
      Account(MechanismSpec{cfg.noise, 1.0, std::nullopt, 1}, options,
              AccountingTarget::EpsilonFor(cfg.delta), acc_rng);
  EXPECT_NEAR(r.log.back().epsilon, plain.epsilon, 0.05);
  EXPECT_LE(std::abs(r.log.back().epsilon - plain.epsilon), plain.bounds.tau);
}

}  // namespace
}  // namespace ggdp
