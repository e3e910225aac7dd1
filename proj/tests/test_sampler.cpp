// Copyright 2026 The tssa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tssa/sampler.hpp"

namespace tssa {
namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

RewardWindow window_of(std::initializer_list<double> xs, std::size_t cap) {
  RewardWindow w(cap);
  for (double x : xs) w.push(x);
  return w;
}

TEST(Schedule, TunedDefaultsFirstStep) {
  SaSchedule s;
  EXPECT_NEAR(sa_step_size(s, 1), 144.07 / 717.90, 1e-12);
  EXPECT_NEAR(sa_step_size(s, 1), 0.20068, 5e-6);
}

TEST(Schedule, MatchesOracleAndDecreases) {
  SaSchedule s;
  double prev = 2.0;
  for (std::size_t n : {1, 2, 5, 19, 100, 1000, 100000}) {
    double g = sa_step_size(s, n);
    EXPECT_NEAR(g, oracle::sa_gamma(s.c1, s.c2, s.c3, s.alpha, static_cast<double>(n)), 1e-15);
    EXPECT_LT(g, prev);
    EXPECT_GT(g, 0.0);
    prev = g;
  }
}

TEST(Schedule, ConstantCases) {
  SaSchedule one{5.0, 0.0, 5.0, 0.999};
  for (std::size_t n : {1, 10, 1000}) EXPECT_EQ(sa_step_size(one, n), 1.0);
  SaSchedule flat{1.0, 2.0, 1.0, 0.0};
  EXPECT_EQ(sa_step_size(flat, 1), sa_step_size(flat, 777));
}

TEST(Schedule, ClampedAtOne) {
  SaSchedule s{100.0, 1.0, 0.0, 1.0};
  EXPECT_EQ(sa_step_size(s, 1), 1.0);
  EXPECT_EQ(sa_step_size(s, 1000), 0.1);
}

TEST(Schedule, ValidateRejects) {
  EXPECT_THROW((SaSchedule{0.0, 1.0, 1.0, 1.0}).validate(), ConfigError);
  EXPECT_THROW((SaSchedule{1.0, -1.0, 1.0, 1.0}).validate(), ConfigError);
  EXPECT_THROW((SaSchedule{1.0, 0.0, 0.0, 1.0}).validate(), ConfigError);
}

TEST(Window, KeepsNewestUpToCapacity) {
  RewardWindow w = window_of({1, 2, 3, 4, 5}, 3);
  EXPECT_EQ(w.size(), 3u);
  EXPECT_EQ(w.to_vector(), (std::vector<double>{3, 4, 5}));
  EXPECT_EQ(w.recent(0), 5.0);
  EXPECT_EQ(w[0], 3.0);
}

TEST(Gradient, WindowExample) {
  RewardWindow w = window_of({1.0, 2.0, 3.0}, 3);
  auto model = LinearGaussianModel::scalar(1.0);
  EXPECT_DOUBLE_EQ(minibatch_gradient(model, w, scalar(0.0), 2)[0], 2.5);
  EXPECT_DOUBLE_EQ(window_gradient(model, w, scalar(0.0), 2, WindowReduction::sum)[0], 5.0);
}

TEST(Gradient, CapOneUsesNewestReward) {
  RewardWindow w = window_of({1.0, 2.0, 7.0}, 5);
  auto model = LinearGaussianModel::scalar(1.0);
  EXPECT_DOUBLE_EQ(minibatch_gradient(model, w, scalar(1.0), 1)[0], 6.0);
}

TEST(Gradient, ZeroResiduals) {
  RewardWindow w = window_of({2.0, 2.0, 2.0}, 3);
  LinearGaussianModel model(Vector::Constant(1, 2.0), 1.0);
  EXPECT_EQ(minibatch_gradient(model, w, scalar(1.0), 3)[0], 0.0);
}

TEST(Gradient, EmptyWindowIsLogicError) {
  RewardWindow w(3);
  EXPECT_THROW(minibatch_gradient(LinearGaussianModel::scalar(1.0), w, scalar(0.0), 3),
               LogicError);
}

TEST(Lmc, ZeroStepIsIdentity) {
  RandomStream rng(1);
  Vector theta = Vector::Constant(3, 1.25);
  EXPECT_EQ(lmc_step(theta, Vector::Constant(3, 9.0), 0.0, rng), theta);
}

TEST(Lmc, TinyStepStaysClose) {
  RandomStream rng(1);
  Vector w = lmc_step(scalar(2.0), scalar(0.0), 1e-12, rng);
  EXPECT_NEAR(w[0], 2.0, 1e-5);
}

TEST(Lmc, NoiseVarianceIsTwoH) {
  RandomStream rng(3);
  const int n = 200000;
  double h = 0.3, sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = lmc_step(scalar(1.0), scalar(0.5), h, rng)[0];
    sum += w;
    sq += w * w;
  }
  double mean = sum / n;
  EXPECT_NEAR(mean, 1.0 + h * 0.5, 0.01);
  EXPECT_NEAR((sq / n - mean * mean) / (2.0 * h), 1.0, 0.02);
}

TEST(SaAverage, Examples) {
  Vector omega = scalar(2.0);
  EXPECT_EQ(sa_average(scalar(0.0), omega, 1.0), omega);
  EXPECT_EQ(sa_average(scalar(0.0), omega, 0.5)[0], 1.0);
  EXPECT_EQ(sa_average(scalar(-3.5), scalar(-3.5), 0.37)[0], -3.5);
  EXPECT_THROW(sa_average(scalar(0.0), omega, 0.0), LogicError);
  EXPECT_THROW(sa_average(scalar(0.0), omega, 1.5), LogicError);
}

TEST(Update, ZeroStepLeavesThetaUnchanged) {
  RewardWindow w = window_of({1.0, 5.0}, 4);
  LangevinConfig cfg;
  cfg.step_size = 0.0;
  cfg.inner_iters = 3;
  RandomStream rng(1);
  Vector theta = scalar(0.75);
  EXPECT_EQ(ts_sa_update(theta, w, LinearGaussianModel::scalar(1.0), cfg, 0.2, rng), theta);
}

// Two-line and one-line forms of the update, identical streams.
double composition_gap(double gamma, std::size_t steps, double h, std::size_t cap) {
  LangevinConfig cfg;
  cfg.step_size = h;
  cfg.batch_cap = cap;
  auto model = LinearGaussianModel::scalar(1.0);
  RandomStream data(99), a(5), b(5);
  RewardWindow w(cap);
  Vector ta = scalar(0.0), tb = scalar(0.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    w.push(3.0 + data.normal());
    ta = ts_sa_update(ta, w, model, cfg, gamma, a);
    tb = joint_update(tb, w, model, cfg, gamma, b);
    worst = std::max(worst, std::abs(ta[0] - tb[0]));
  }
  return worst;
}

TEST(Composition, BitwiseWithFullReplacement) {
  EXPECT_EQ(composition_gap(1.0, 10000, 0.532, 27), 0.0);
}

TEST(Composition, RoundingLevelForPartialAveraging) {
  EXPECT_LT(composition_gap(0.2, 10000, 0.532, 27), 1e-12);
}

TEST(DecisionSample, VarianceIsInverseTauN) {
  RandomStream rng(6);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = decision_sample(scalar(1.0), 8, 2.0, rng)[0];
    sum += x;
    sq += x * x;
  }
  double mean = sum / n;
  EXPECT_NEAR(mean, 1.0, 0.005);
  EXPECT_NEAR((sq / n - mean * mean) * 16.0, 1.0, 0.02);
}

TEST(DecisionSample, LargeCountCollapsesToTheta) {
  RandomStream rng(6);
  EXPECT_NEAR(decision_sample(scalar(4.0), 1000000000000ULL, 1e6, rng)[0], 4.0, 1e-7);
}

}  // namespace
}  // namespace tssa
