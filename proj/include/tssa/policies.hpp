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

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tssa/environment.hpp"
#include "tssa/errors.hpp"
#include "tssa/random.hpp"
#include "tssa/reward_models.hpp"
#include "tssa/sampler.hpp"

namespace tssa {

enum class PolicyKind { ts_sa, ts_sgld, ts, eps_ts, ucb, uniform };

inline std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::ts_sa: return "ts_sa";
    case PolicyKind::ts_sgld: return "ts_sgld";
    case PolicyKind::ts: return "ts";
    case PolicyKind::eps_ts: return "eps_ts";
    case PolicyKind::ucb: return "ucb";
    case PolicyKind::uniform: return "uniform";
  }
  return "?";
}

inline std::optional<PolicyKind> parse_policy_kind(std::string_view s) {
  for (auto k : {PolicyKind::ts_sa, PolicyKind::ts_sgld, PolicyKind::ts, PolicyKind::eps_ts,
                 PolicyKind::ucb, PolicyKind::uniform})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

/// SA weight source: the c1/c2/c3/alpha schedule, or the constant 1/T.
enum class GammaMode { schedule, inverse_horizon };

/// Inner iteration count: constant N, or ceil(T / n) for the n-th pull.
enum class InnerItersMode { fixed, theory };

/// Hyperparameters for every policy kind. Only the fields relevant to `kind`
/// are meaningful; the config parser rejects the others.
struct PolicyConfig {
  PolicyKind kind = PolicyKind::ts_sa;
  LangevinConfig langevin;  // ts_sa, ts_sgld (step_size, temperature)
  SaSchedule schedule;      // ts_sa
  GammaMode gamma_mode = GammaMode::schedule;
  InnerItersMode inner_iters_mode = InnerItersMode::fixed;
  WindowReduction window_reduction = WindowReduction::sum;
  std::size_t warmup = 19;      // Omega
  double epsilon = 0.0;         // eps_ts
  double prior_mean = 0.0;      // ts, eps_ts
  double prior_variance = 100.0;
  std::size_t sgld_batch = 32;  // ts_sgld

  double temperature() const { return langevin.temperature; }

  /// Defaults for `kind`. TS-SA takes the tuned configuration
  /// (N=1, h=0.532, c=(144.07, 677.88, 40.02), alpha=0.999, B=27, Omega=19).
  static PolicyConfig defaults(PolicyKind kind) {
    PolicyConfig c;
    c.kind = kind;
    if (kind != PolicyKind::ts_sa) c.warmup = 1;
    if (kind == PolicyKind::ts_sgld) c.langevin.step_size = 0.5;
    if (kind == PolicyKind::eps_ts) c.epsilon = 0.1;
    return c;
  }

  void validate() const {
    TSSA_REQUIRE(warmup >= 1, "policy: warmup must be >= 1");
    TSSA_REQUIRE(langevin.temperature > 0.0 && std::isfinite(langevin.temperature),
                 "policy: temperature must be > 0");
    switch (kind) {
      case PolicyKind::ts_sa:
        langevin.validate();
        schedule.validate();
        break;
      case PolicyKind::ts_sgld:
        langevin.validate();
        TSSA_REQUIRE(sgld_batch >= 1, "policy: sgld_batch must be >= 1");
        break;
      case PolicyKind::eps_ts:
        TSSA_REQUIRE(epsilon >= 0.0 && epsilon < 1.0, "policy: epsilon must be in [0, 1)");
        [[fallthrough]];
      case PolicyKind::ts:
        TSSA_REQUIRE(std::isfinite(prior_mean), "policy: prior_mean must be finite");
        TSSA_REQUIRE(prior_variance > 0.0, "policy: prior_variance must be > 0");
        break;
      case PolicyKind::ucb:
      case PolicyKind::uniform:
        break;
    }
  }

  friend bool operator==(const PolicyConfig&, const PolicyConfig&) = default;
};

/// Per-arm learner state.
struct ArmState {
  ArmState(std::size_t dim, std::size_t window_cap, bool keep_history)
      : theta(Vector::Zero(static_cast<Eigen::Index>(dim))), recent(window_cap) {
    if (keep_history) full_history.emplace();
  }

  Vector theta;
  std::size_t pulls = 0;
  RewardWindow recent;
  double running_sum = 0.0;
  std::size_t running_count = 0;
  std::optional<std::vector<double>> full_history;  // ts_sgld only

  double empirical_mean() const {
    return running_count == 0 ? 0.0 : running_sum / static_cast<double>(running_count);
  }
};

struct GaussianPosterior {
  double mean;
  double variance;
};

/// N((mu0/s0^2 + n mu_hat) / (1/s0^2 + n), tau / (1/s0^2 + n)).
inline GaussianPosterior conjugate_ts_posterior(double prior_mean, double prior_variance,
                                                double tau, std::size_t n, double sum) {
  double precision = 1.0 / prior_variance + static_cast<double>(n);
  return {(prior_mean / prior_variance + sum) / precision, tau / precision};
}

inline double ucb_index(double empirical_mean, double tau, std::size_t t, std::size_t pulls) {
  return empirical_mean +
         tau * std::sqrt(2.0 * std::log(static_cast<double>(t)) / static_cast<double>(pulls));
}

/// Index of the largest value; ties go to the lowest index.
inline std::size_t argmax_lowest(const std::vector<double>& v) {
  TSSA_ASSERT(!v.empty(), "argmax_lowest: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

/// One bandit agent of a given kind together with its per-arm state.
///
/// Usage per round t >= 1: `a = select_arm(t, rng)`, pull `a`, then
/// `update(a, reward, rng)`. warm_start() must run first.
///
/// All policies model rewards with a scalar unit-variance Gaussian
/// likelihood, whatever the environment's true reward law.
class Policy {
 public:
  Policy(PolicyConfig cfg, std::size_t num_arms, std::size_t horizon,
         LinearGaussianModel model = LinearGaussianModel::scalar(1.0))
      : cfg_(cfg), model_(std::move(model)), horizon_(horizon) {
    cfg_.validate();
    TSSA_REQUIRE(num_arms >= 1, "Policy: need at least one arm");
    std::size_t cap = cfg_.kind == PolicyKind::ts_sa ? cfg_.langevin.batch_cap : 1;
    bool history = cfg_.kind == PolicyKind::ts_sgld;
    arms_.assign(num_arms, ArmState(static_cast<std::size_t>(model_.dim()), cap, history));
  }

  const PolicyConfig& config() const { return cfg_; }
  const LinearGaussianModel& model() const { return model_; }
  const std::vector<ArmState>& arms() const { return arms_; }
  std::vector<ArmState>& arms() { return arms_; }
  std::size_t num_arms() const { return arms_.size(); }

  /// Initial pulls: every arm `warmup` times, round-robin. Returns the total
  /// pseudo-regret of those pulls.
  double warm_start(const BanditInstance& env, RandomStream& policy_rng, RandomStream& env_rng) {
    TSSA_ASSERT(env.num_arms() == arms_.size(), "warm_start: arm count mismatch");
    // theta_a ~ N(0, I) prior draw for the Langevin policies.
    if (cfg_.kind == PolicyKind::ts_sa || cfg_.kind == PolicyKind::ts_sgld) {
      for (auto& s : arms_)
        for (Eigen::Index i = 0; i < s.theta.size(); ++i) s.theta[i] = policy_rng.normal();
    }
    double regret = 0.0;
    for (std::size_t r = 0; r < cfg_.warmup; ++r) {
      for (std::size_t a = 0; a < arms_.size(); ++a) {
        PullResult p = env.pull(a, env_rng);
        regret += p.regret;
        update(a, p.reward, policy_rng);
      }
    }
    return regret;
  }

  /// Per-arm decision values <phi_a, theta_{a,t}> for round t.
  std::vector<double> decision_values(std::size_t t, RandomStream& rng) const {
    TSSA_ASSERT(t >= 1, "select_arm: round index must be >= 1");
    for (const auto& s : arms_)
      TSSA_ASSERT(s.pulls >= 1, "select_arm: every arm must be pulled before selection");

    std::vector<double> values(arms_.size());
    switch (cfg_.kind) {
      case PolicyKind::ts_sa:
        for (std::size_t a = 0; a < arms_.size(); ++a) {
          const auto& s = arms_[a];
          values[a] = model_.mean(decision_sample(s.theta, s.pulls, cfg_.temperature(), rng));
        }
        break;
      case PolicyKind::ts_sgld:
        for (std::size_t a = 0; a < arms_.size(); ++a)
          values[a] = model_.mean(sgld_step(arms_[a], arms_[a].pulls, rng));
        break;
      case PolicyKind::ts:
        for (std::size_t a = 0; a < arms_.size(); ++a) values[a] = ts_draw(arms_[a], rng);
        break;
      case PolicyKind::eps_ts:
        // No coin is drawn at epsilon = 0, so the stream matches plain TS.
        if (cfg_.epsilon > 0.0 && rng.uniform() <= cfg_.epsilon) {
          for (std::size_t a = 0; a < arms_.size(); ++a) values[a] = posterior(arms_[a]).mean;
        } else {
          for (std::size_t a = 0; a < arms_.size(); ++a) values[a] = ts_draw(arms_[a], rng);
        }
        break;
      case PolicyKind::ucb:
        for (std::size_t a = 0; a < arms_.size(); ++a)
          values[a] = ucb_index(arms_[a].empirical_mean(), cfg_.temperature(), t, arms_[a].pulls);
        break;
      case PolicyKind::uniform:
        values.assign(arms_.size(), 0.0);
        values[rng.index(arms_.size())] = 1.0;
        break;
    }
    return values;
  }

  std::size_t select_arm(std::size_t t, RandomStream& rng) const {
    return argmax_lowest(decision_values(t, rng));
  }

  void update(std::size_t chosen, double reward, RandomStream& rng) {
    TSSA_ASSERT(chosen < arms_.size(), "update: arm index out of range");
    ArmState& s = arms_[chosen];
    switch (cfg_.kind) {
      case PolicyKind::ts_sa:
        // Gradient from the window as it stood before this reward.
        if (!s.recent.empty()) {
          double gamma = cfg_.gamma_mode == GammaMode::schedule
                             ? sa_step_size(cfg_.schedule, s.pulls)
                             : 1.0 / static_cast<double>(horizon_);
          std::size_t iters = cfg_.inner_iters_mode == InnerItersMode::fixed
                                  ? cfg_.langevin.inner_iters
                                  : (horizon_ + s.pulls - 1) / s.pulls;
          s.theta = ts_sa_update(s.theta, s.recent, model_, cfg_.langevin, gamma, rng,
                                 {cfg_.window_reduction, 1.0}, iters);
        }
        s.recent.push(reward);
        break;
      case PolicyKind::ts_sgld:
        s.full_history->push_back(reward);
        s.theta = sgld_step(s, s.pulls + 1, rng);
        break;
      default:
        break;
    }
    s.running_sum += reward;
    ++s.running_count;
    ++s.pulls;
  }

  GaussianPosterior posterior(const ArmState& s) const {
    return conjugate_ts_posterior(cfg_.prior_mean, cfg_.prior_variance, cfg_.temperature(),
                                  s.running_count, s.running_sum);
  }

 private:
  double ts_draw(const ArmState& s, RandomStream& rng) const {
    GaussianPosterior p = posterior(s);
    return p.mean + std::sqrt(p.variance) * rng.normal();
  }

  // One Euler-Maruyama step on the mean log-likelihood of a uniform
  // minibatch (with replacement) from the full history, noise scaled by
  // 1/sqrt(n tau).
  Vector sgld_step(const ArmState& s, std::size_t n, RandomStream& rng) const {
    const auto& hist = *s.full_history;
    std::size_t m = std::min(cfg_.sgld_batch, hist.size());
    Vector g = Vector::Zero(s.theta.size());
    for (std::size_t i = 0; i < m; ++i)
      g += model_.grad_log_density(hist[rng.index(hist.size())], s.theta);
    g /= static_cast<double>(m);
    return lmc_step(s.theta, g, cfg_.langevin.step_size, rng,
                    1.0 / std::sqrt(static_cast<double>(n) * cfg_.temperature()));
  }

  PolicyConfig cfg_;
  LinearGaussianModel model_;
  std::size_t horizon_;
  std::vector<ArmState> arms_;
};

}  // namespace tssa
