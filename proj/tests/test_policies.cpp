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
#include "tssa/harness.hpp"
#include "tssa/policies.hpp"

namespace tssa {
namespace {

TEST(Defaults, TsSaTunedValues) {
  PolicyConfig c = PolicyConfig::defaults(PolicyKind::ts_sa);
  EXPECT_EQ(c.langevin.inner_iters, 1u);
  EXPECT_EQ(c.langevin.step_size, 0.532);
  EXPECT_EQ(c.schedule.c1, 144.07);
  EXPECT_EQ(c.schedule.c2, 677.88);
  EXPECT_EQ(c.schedule.c3, 40.02);
  EXPECT_EQ(c.schedule.alpha, 0.999);
  EXPECT_EQ(c.langevin.batch_cap, 27u);
  EXPECT_EQ(c.warmup, 19u);
}

TEST(Defaults, ParseKindRoundTrips) {
  for (auto k : {PolicyKind::ts_sa, PolicyKind::ts_sgld, PolicyKind::ts, PolicyKind::eps_ts,
                 PolicyKind::ucb, PolicyKind::uniform})
    EXPECT_EQ(parse_policy_kind(to_string(k)), k);
  EXPECT_FALSE(parse_policy_kind("thompson"));
}

TEST(Conjugate, IncrementalEqualsBatch) {
  RandomStream rng(17);
  PolicyConfig cfg = PolicyConfig::defaults(PolicyKind::ts);
  Policy p(cfg, 1, 100);
  std::vector<double> data;
  for (int i = 0; i < 200; ++i) {
    double x = 2.0 + rng.normal();
    data.push_back(x);
    p.update(0, x, rng);
  }
  double sum = 0.0;
  for (double x : data) sum += x;
  GaussianPosterior inc = p.posterior(p.arms()[0]);
  GaussianPosterior batch = conjugate_ts_posterior(0.0, 100.0, 1.0, data.size(), sum);
  EXPECT_EQ(inc.mean, batch.mean);
  EXPECT_EQ(inc.variance, batch.variance);

  oracle::Normal o = oracle::sequential_posterior(0.0, 100.0, data, 1.0);
  EXPECT_NEAR(inc.mean, o.mean, 1e-12);
  EXPECT_NEAR(inc.variance, o.variance, 1e-15);
}

TEST(Conjugate, NoDataIsPrior) {
  GaussianPosterior p = conjugate_ts_posterior(0.5, 4.0, 2.0, 0, 0.0);
  EXPECT_DOUBLE_EQ(p.mean, 0.5);
  EXPECT_DOUBLE_EQ(p.variance, 8.0);
}

TEST(Conjugate, FlatPriorLimitIsEmpiricalMean) {
  GaussianPosterior p = conjugate_ts_posterior(0.0, 1e15, 1.0, 4, 10.0);
  EXPECT_NEAR(p.mean, 2.5, 1e-12);
  EXPECT_NEAR(p.variance, 0.25, 1e-12);
}

TEST(Conjugate, OneDatumExample) {
  GaussianPosterior p = conjugate_ts_posterior(0.0, 1.0, 1.0, 1, 2.0);
  EXPECT_DOUBLE_EQ(p.mean, 1.0);
  EXPECT_DOUBLE_EQ(p.variance, 0.5);
}

TEST(Ucb, IndexExample) {
  // Bonus of 2 when 2 ln t / n = 4.
  EXPECT_NEAR(oracle::ucb(0.5, 1.0, std::exp(2.0), 1.0), 2.5, 1e-12);
  double tau = 2.0 / std::sqrt(2.0 * std::log(100.0));
  EXPECT_NEAR(ucb_index(0.5, tau, 100, 1), 2.5, 1e-12);
}

TEST(Ucb, IndexGridAgainstOracle) {
  RandomStream rng(23);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double mu = 10.0 * rng.uniform() - 5.0;
    double tau = 0.1 + 3.0 * rng.uniform();
    std::size_t t = 1 + rng.index(100000);
    std::size_t n = 1 + rng.index(t);
    double got = ucb_index(mu, tau, t, n);
    double want = oracle::ucb(mu, tau, static_cast<double>(t), static_cast<double>(n));
    worst = std::max(worst, std::abs(got - want) / (1.0 + std::abs(want)));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Ucb, RoundOneHasNoBonus) {
  EXPECT_EQ(ucb_index(0.7, 1.0, 1, 3), 0.7);
}

TEST(Argmax, TiesGoToLowestIndex) {
  EXPECT_EQ(argmax_lowest({1.0, 3.0, 3.0, 2.0}), 1u);
  EXPECT_EQ(argmax_lowest({0.0, 0.0}), 0u);
}

// Plays both policies on cloned streams and records the arms chosen.
std::vector<std::size_t> play(const PolicyConfig& cfg, std::uint64_t seed, std::size_t rounds) {
  BanditInstance env = make_sgr(5, 0.5, 3.0, 1.0);
  Policy p(cfg, env.num_arms(), rounds);
  RandomStream prng(seed), erng(seed + 1);
  p.warm_start(env, prng, erng);
  std::vector<std::size_t> arms;
  for (std::size_t t = 1; t <= rounds; ++t) {
    std::size_t a = p.select_arm(t, prng);
    arms.push_back(a);
    p.update(a, env.pull(a, erng).reward, prng);
  }
  return arms;
}

TEST(EpsTs, ZeroEpsilonIsPlainTs) {
  PolicyConfig eps = PolicyConfig::defaults(PolicyKind::eps_ts);
  eps.epsilon = 0.0;
  EXPECT_EQ(play(eps, 3, 2000), play(PolicyConfig::defaults(PolicyKind::ts), 3, 2000));
}

TEST(EpsTs, PositiveEpsilonDiffers) {
  PolicyConfig eps = PolicyConfig::defaults(PolicyKind::eps_ts);
  EXPECT_NE(play(eps, 3, 2000), play(PolicyConfig::defaults(PolicyKind::ts), 3, 2000));
}

TEST(Policy, SelectBeforeWarmupIsLogicError) {
  Policy p(PolicyConfig::defaults(PolicyKind::ts), 3, 10);
  RandomStream rng(1);
  EXPECT_THROW(p.select_arm(1, rng), LogicError);
  BanditInstance env = make_sgr(3, 0.5, 3.0, 1.0);
  p.warm_start(env, rng, rng);
  EXPECT_THROW(p.select_arm(0, rng), LogicError);
  EXPECT_NO_THROW(p.select_arm(1, rng));
}

TEST(Policy, WarmupCountsAndRegret) {
  BanditInstance env = make_sgr(10, 0.5, 3.0, 1.0);
  RandomStream prng(1), erng(2);

  PolicyConfig one = PolicyConfig::defaults(PolicyKind::ts_sa);
  one.warmup = 1;
  Policy p1(one, 10, 100);
  EXPECT_DOUBLE_EQ(p1.warm_start(env, prng, erng), 4.5);
  for (const auto& s : p1.arms()) EXPECT_EQ(s.pulls, 1u);

  Policy p19(PolicyConfig::defaults(PolicyKind::ts_sa), 10, 100);
  p19.warm_start(env, prng, erng);
  std::size_t total = 0;
  for (const auto& s : p19.arms()) total += s.pulls;
  EXPECT_EQ(total, 190u);
}

TEST(Policy, TsSaKeepsOnlyTheWindow) {
  PolicyConfig cfg = PolicyConfig::defaults(PolicyKind::ts_sa);
  Policy p(cfg, 2, 1000);
  RandomStream rng(1);
  for (int i = 0; i < 1000; ++i) p.update(0, 1.0 * i, rng);
  const ArmState& s = p.arms()[0];
  EXPECT_EQ(s.pulls, 1000u);
  EXPECT_EQ(s.recent.size(), 27u);
  EXPECT_EQ(s.recent.capacity(), 27u);
  EXPECT_FALSE(s.full_history.has_value());
  EXPECT_EQ(s.recent.recent(0), 999.0);
}

TEST(Policy, SgldKeepsFullHistory) {
  Policy p(PolicyConfig::defaults(PolicyKind::ts_sgld), 2, 1000);
  RandomStream rng(1);
  for (int i = 0; i < 300; ++i) p.update(1, 0.5, rng);
  ASSERT_TRUE(p.arms()[1].full_history.has_value());
  EXPECT_EQ(p.arms()[1].full_history->size(), 300u);
}

TEST(Policy, TsSaFirstRewardOnlyFillsTheWindow) {
  PolicyConfig cfg = PolicyConfig::defaults(PolicyKind::ts_sa);
  Policy p(cfg, 1, 10);
  RandomStream rng(1);
  Vector before = p.arms()[0].theta;
  p.update(0, 5.0, rng);
  EXPECT_EQ(p.arms()[0].theta, before);
  p.update(0, 5.0, rng);
  EXPECT_NE(p.arms()[0].theta, before);
}

TEST(Policy, TsSaUpdateMatchesSamplerCall) {
  PolicyConfig cfg = PolicyConfig::defaults(PolicyKind::ts_sa);
  Policy p(cfg, 1, 10);
  RandomStream a(4), b(4);
  p.update(0, 2.0, a);
  p.update(0, 3.0, a);

  RewardWindow w(cfg.langevin.batch_cap);
  w.push(2.0);
  Vector theta = ts_sa_update(Vector::Zero(1), w, LinearGaussianModel::scalar(1.0), cfg.langevin,
                              sa_step_size(cfg.schedule, 1), b, {cfg.window_reduction, 1.0});
  EXPECT_EQ(p.arms()[0].theta, theta);
}

TEST(Policy, UniformSpreadsPulls) {
  Policy p(PolicyConfig::defaults(PolicyKind::uniform), 4, 1000);
  RandomStream rng(9);
  BanditInstance env = make_sgr(4, 0.5, 3.0, 1.0);
  p.warm_start(env, rng, rng);
  std::vector<int> hits(4, 0);
  for (std::size_t t = 1; t <= 40000; ++t) ++hits[p.select_arm(t, rng)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}

TEST(Policy, ConfigValidation) {
  PolicyConfig c = PolicyConfig::defaults(PolicyKind::ts_sa);
  c.warmup = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = PolicyConfig::defaults(PolicyKind::eps_ts);
  c.epsilon = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = PolicyConfig::defaults(PolicyKind::ts);
  c.prior_variance = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace tssa
