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

// Independent checks of the sampling machinery: closed-form Gaussian
// posteriors, finite-difference gradients, chain moment checks and the
// empirical posterior-concentration probe.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "tssa/environment.hpp"
#include "tssa/errors.hpp"
#include "tssa/harness.hpp"
#include "tssa/policies.hpp"
#include "tssa/random.hpp"
#include "tssa/reward_models.hpp"
#include "tssa/sampler.hpp"

namespace tssa {

/// Gaussian prior N(prior_mean, prior_variance) on the mean of
/// N(theta, noise_variance) data.
struct ConjugateOracle {
  double prior_mean = 0.0;
  double prior_variance = 1.0;
  std::vector<double> data;
  double noise_variance = 1.0;
};

/// Streaming form of the same posterior; add() one datum at a time.
class ConjugateAccumulator {
 public:
  ConjugateAccumulator(double prior_mean, double prior_variance, double noise_variance)
      : prior_mean_(prior_mean), prior_variance_(prior_variance), noise_variance_(noise_variance) {}

  void add(double x) {
    sum_ += x;
    ++n_;
  }

  GaussianPosterior posterior() const {
    double precision = 1.0 / prior_variance_ + static_cast<double>(n_) / noise_variance_;
    double mean = (prior_mean_ / prior_variance_ + sum_ / noise_variance_) / precision;
    return {mean, 1.0 / precision};
  }

 private:
  double prior_mean_, prior_variance_, noise_variance_;
  double sum_ = 0.0;
  std::size_t n_ = 0;
};

inline GaussianPosterior conjugate_posterior(const ConjugateOracle& o) {
  TSSA_REQUIRE(o.prior_variance > 0.0, "conjugate_posterior: prior_variance must be > 0");
  TSSA_REQUIRE(o.noise_variance > 0.0, "conjugate_posterior: noise_variance must be > 0");
  ConjugateAccumulator acc(o.prior_mean, o.prior_variance, o.noise_variance);
  for (double x : o.data) acc.add(x);
  return acc.posterior();
}

/// Central differences, one coordinate at a time.
inline Vector finite_difference_gradient(const std::function<double(const Vector&)>& f,
                                         const Vector& theta, double step) {
  TSSA_REQUIRE(step > 0.0, "finite_difference_gradient: step must be > 0");
  Vector g(theta.size());
  Vector probe = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + step;
    double up = f(probe);
    probe[i] = theta[i] - step;
    double down = f(probe);
    probe[i] = theta[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

/// One transition theta -> theta' of a Markov chain.
using ChainStep = std::function<Vector(const Vector&, RandomStream&)>;

struct ChainMoments {
  double mean_error = 0.0;  // |empirical mean - posterior mean|
  double var_error = 0.0;   // |empirical variance - posterior variance|
  double empirical_mean = 0.0;
  double empirical_variance = 0.0;
  GaussianPosterior target{0.0, 0.0};
  bool diverged = false;
};

/// Iterates beyond this norm mean the step size is unstable for the target.
inline constexpr double kDivergenceGuard = 1e6;

/// Runs `chain` from `init` for burn_in + samples steps and compares the
/// first coordinate's sample moments against the oracle posterior.
inline ChainMoments chain_moment_check(const ChainStep& chain, const ConjugateOracle& oracle,
                                       std::size_t burn_in, std::size_t samples, Vector init,
                                       RandomStream& rng) {
  TSSA_REQUIRE(burn_in >= 1 && samples >= 1, "chain_moment_check: burn_in, samples must be >= 1");
  ChainMoments out;
  out.target = conjugate_posterior(oracle);
  Vector theta = std::move(init);
  for (std::size_t i = 0; i < burn_in; ++i) {
    theta = chain(theta, rng);
    if (!(theta.norm() <= kDivergenceGuard)) {
      out.diverged = true;
      return out;
    }
  }
  // Welford.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    theta = chain(theta, rng);
    if (!(theta.norm() <= kDivergenceGuard)) {
      out.diverged = true;
      return out;
    }
    double x = theta[0];
    double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  out.empirical_mean = mean;
  out.empirical_variance = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  out.mean_error = std::abs(out.empirical_mean - out.target.mean);
  out.var_error = std::abs(out.empirical_variance - out.target.variance);
  return out;
}

/// Independent draws from the oracle posterior, ignoring the current state.
inline ChainStep exact_posterior_chain(const ConjugateOracle& oracle) {
  GaussianPosterior p = conjugate_posterior(oracle);
  return [p](const Vector& theta, RandomStream& rng) {
    Vector out(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      out[i] = p.mean + std::sqrt(p.variance) * rng.normal();
    return out;
  };
}

/// The TS-SA parameter update run on a fixed dataset: window holding all n
/// rewards, gamma = 1, mean score, noise scaled by 1/sqrt(n tau). Its
/// stationary law is the tempered posterior exp(tau sum_i log p(x_i | theta))
/// up to O(h) discretization error.
inline ChainStep ts_sa_fixed_data_chain(const std::vector<double>& data, double h,
                                        double tau = 1.0, double noise_variance = 1.0) {
  TSSA_REQUIRE(!data.empty(), "ts_sa_fixed_data_chain: empty dataset");
  RewardWindow window(data.size());
  for (double x : data) window.push(x);
  LangevinConfig cfg;
  cfg.step_size = h;
  cfg.inner_iters = 1;
  cfg.batch_cap = data.size();
  cfg.temperature = tau;
  UpdateOptions opts{WindowReduction::mean,
                     1.0 / std::sqrt(static_cast<double>(data.size()) * tau)};
  LinearGaussianModel model = LinearGaussianModel::scalar(noise_variance);
  return [window, cfg, opts, model](const Vector& theta, RandomStream& rng) {
    return ts_sa_update(theta, window, model, cfg, 1.0, rng, opts);
  };
}

/// Linear-interpolated quantile of an unsorted sample (q in [0, 1]).
inline double quantile(std::vector<double> v, double q) {
  TSSA_ASSERT(!v.empty(), "quantile: empty sample");
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

struct ConcentrationRow {
  std::size_t pulls;
  double q10;
  double median;
  double q90;
  double mean;
  double median_stderr;
};

/// Canonical configuration for concentration checks: gamma_n = 1/n
/// (c1 = c2 = 1, c3 = 0, alpha = 1), window of one reward, h = 1.
inline PolicyConfig canonical_concentration_config() {
  PolicyConfig c = PolicyConfig::defaults(PolicyKind::ts_sa);
  c.schedule = {1.0, 1.0, 0.0, 1.0};
  c.langevin.step_size = 1.0;
  c.langevin.batch_cap = 1;
  c.langevin.inner_iters = 1;
  c.warmup = 1;
  return c;
}

/// Pulls a single arm repeatedly under a TS-SA update rule and records
/// ||theta(n) - theta*|| at each n in `pulls_grid`, over independent trials.
inline std::vector<ConcentrationRow> concentration_probe(const PolicyConfig& cfg,
                                                         const LinearArm& arm,
                                                         const std::vector<std::size_t>& pulls_grid,
                                                         std::size_t trials,
                                                         std::uint64_t base_seed = 0,
                                                         std::size_t threads = default_thread_count()) {
  TSSA_REQUIRE(cfg.kind == PolicyKind::ts_sa, "concentration_probe: policy must be ts_sa");
  TSSA_REQUIRE(!pulls_grid.empty() && trials >= 1, "concentration_probe: empty grid or no trials");
  for (std::size_t i = 0; i < pulls_grid.size(); ++i) {
    TSSA_REQUIRE(pulls_grid[i] >= 1, "concentration_probe: pulls must be >= 1");
    if (i > 0)
      TSSA_REQUIRE(pulls_grid[i] > pulls_grid[i - 1],
                   "concentration_probe: pulls_grid must be increasing");
  }
  const std::size_t max_n = pulls_grid.back();
  std::vector<std::vector<double>> errors(pulls_grid.size(), std::vector<double>(trials));

  parallel_for(trials, threads, [&](std::size_t trial) {
    RandomStream rng = provision_stream(base_seed, "concentration", trial);
    RandomStream env_rng = provision_stream(base_seed, "concentration#environment", trial);
    Policy policy(cfg, 1, max_n, arm.model);
    ArmState& s = policy.arms()[0];
    for (Eigen::Index i = 0; i < s.theta.size(); ++i) s.theta[i] = rng.normal();
    std::size_t g = 0;
    for (std::size_t n = 1; n <= max_n; ++n) {
      policy.update(0, sample_reward(arm.model, arm.theta, env_rng), rng);
      if (n == pulls_grid[g]) {
        errors[g][trial] = (policy.arms()[0].theta - arm.theta).norm();
        ++g;
      }
    }
  });

  std::vector<ConcentrationRow> rows;
  for (std::size_t g = 0; g < pulls_grid.size(); ++g) {
    const auto& e = errors[g];
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= static_cast<double>(e.size());
    // Normal-theory sd of a sample median, 1.2533 sigma / sqrt(n), with
    // sigma estimated as IQR / 1.349.
    double iqr = quantile(e, 0.75) - quantile(e, 0.25);
    double se = 1.2533 * 0.7413 * iqr / std::sqrt(static_cast<double>(e.size()));
    rows.push_back({pulls_grid[g], quantile(e, 0.1), quantile(e, 0.5), quantile(e, 0.9), mean, se});
  }
  return rows;
}

struct GradCheckRow {
  double x;
  double noise_variance;
  Vector feature;
  Vector theta;
  Vector analytic;
  Vector numeric;
  double rel_error;  // max_i |analytic_i - numeric_i| / (1 + |analytic_i|)
};

struct GradCheckResult {
  std::vector<GradCheckRow> rows;
  double max_rel_error = 0.0;
};

/// Analytic Gaussian score against central differences of log_density on
/// random (x, theta, feature, sigma^2) tuples with dimension 1..3.
inline GradCheckResult gradient_check(std::size_t tuples, std::uint64_t seed, double step = 1e-5) {
  RandomStream rng = provision_stream(seed, "gradcheck", 0);
  GradCheckResult out;
  out.rows.reserve(tuples);
  for (std::size_t k = 0; k < tuples; ++k) {
    auto dim = static_cast<Eigen::Index>(1 + rng.index(3));
    Vector feature(dim), theta(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      feature[i] = -2.0 + 4.0 * rng.uniform();
      theta[i] = -5.0 + 10.0 * rng.uniform();
    }
    if (feature.norm() < 1e-3) feature[0] = 1.0;
    double sigma2 = 0.1 + 3.9 * rng.uniform();
    double x = -10.0 + 20.0 * rng.uniform();
    LinearGaussianModel model(feature, sigma2);
    Vector analytic = grad_log_density(model, x, theta);
    Vector numeric = finite_difference_gradient(
        [&](const Vector& th) { return log_density(model, x, th); }, theta, step);
    double err = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i)
      err = std::max(err, std::abs(analytic[i] - numeric[i]) / (1.0 + std::abs(analytic[i])));
    out.max_rel_error = std::max(out.max_rel_error, err);
    out.rows.push_back({x, sigma2, feature, theta, analytic, numeric, err});
  }
  return out;
}

struct ConjugateChainResult {
  std::vector<double> data;
  ChainMoments moments;
  double relative_var_error = 0.0;
};

/// n rewards from N(data_mean, 1), prior N(prior_mean, prior_variance); runs
/// the fixed-data TS-SA chain and compares its moments to the posterior.
inline ConjugateChainResult conjugate_chain_check(std::size_t n, double data_mean, double h,
                                                  std::size_t burn_in, std::size_t samples,
                                                  std::uint64_t seed, double prior_mean = 0.0,
                                                  double prior_variance = 100.0) {
  RandomStream data_rng = provision_stream(seed, "conjugate#data", 0);
  RandomStream chain_rng = provision_stream(seed, "conjugate#chain", 0);
  ConjugateChainResult out;
  for (std::size_t i = 0; i < n; ++i) out.data.push_back(data_mean + data_rng.normal());
  ConjugateOracle oracle{prior_mean, prior_variance, out.data, 1.0};
  out.moments = chain_moment_check(ts_sa_fixed_data_chain(out.data, h), oracle, burn_in, samples,
                                   Vector::Zero(1), chain_rng);
  out.relative_var_error = out.moments.var_error / out.moments.target.variance;
  return out;
}

}  // namespace tssa
