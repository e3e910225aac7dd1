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

// Langevin / stochastic-approximation building blocks for TS-SA.
//
// One TS-SA parameter update for the pulled arm is, per inner iteration,
//
//   g     = score of the recent-reward window at theta
//   omega = theta + h g + N(0, 2h I)              (Langevin proposal)
//   theta = (1 - gamma) theta + gamma omega       (SA averaging)
//
// which is algebraically theta + h gamma g + gamma N(0, 2h I); see
// joint_update().

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tssa/errors.hpp"
#include "tssa/random.hpp"
#include "tssa/reward_models.hpp"

namespace tssa {

/// gamma(n) = c1 / (c2 n^alpha + c3), clamped to (0, 1].
struct SaSchedule {
  double c1 = 144.07;
  double c2 = 677.88;
  double c3 = 40.02;
  double alpha = 0.999;

  void validate() const {
    TSSA_REQUIRE(c1 > 0.0 && std::isfinite(c1), "schedule: c1 must be > 0");
    TSSA_REQUIRE(c2 >= 0.0 && std::isfinite(c2), "schedule: c2 must be >= 0");
    TSSA_REQUIRE(c3 >= 0.0 && std::isfinite(c3), "schedule: c3 must be >= 0");
    TSSA_REQUIRE(alpha >= 0.0 && alpha <= 1.0, "schedule: alpha must be in [0, 1]");
    // c2 n^alpha + c3 is nondecreasing in n, so n = 1 is the binding case.
    TSSA_REQUIRE(c2 + c3 > 0.0, "schedule: c2 * n^alpha + c3 must be > 0");
  }

  friend bool operator==(const SaSchedule&, const SaSchedule&) = default;
};

inline double sa_step_size(const SaSchedule& s, std::size_t n) {
  TSSA_ASSERT(n >= 1, "sa_step_size: n must be >= 1");
  double gamma = s.c1 / (s.c2 * std::pow(static_cast<double>(n), s.alpha) + s.c3);
  return std::min(gamma, 1.0);
}

struct LangevinConfig {
  double step_size = 0.532;    // h
  std::size_t inner_iters = 1; // N
  std::size_t batch_cap = 27;  // recent-reward window size
  double temperature = 1.0;    // tau

  void validate() const {
    TSSA_REQUIRE(step_size > 0.0 && std::isfinite(step_size), "langevin: step_size must be > 0");
    TSSA_REQUIRE(inner_iters >= 1, "langevin: inner_iters must be >= 1");
    TSSA_REQUIRE(batch_cap >= 1, "langevin: batch_cap must be >= 1");
    TSSA_REQUIRE(temperature > 0.0 && std::isfinite(temperature),
                 "langevin: temperature must be > 0");
  }

  friend bool operator==(const LangevinConfig&, const LangevinConfig&) = default;
};

/// Bounded FIFO of the most recent rewards. Index 0 is the oldest retained
/// reward, size()-1 the newest.
class RewardWindow {
 public:
  explicit RewardWindow(std::size_t capacity) : buf_(capacity) {
    TSSA_REQUIRE(capacity >= 1, "RewardWindow: capacity must be >= 1");
  }

  void push(double x) {
    buf_[head_] = x;
    head_ = (head_ + 1) % buf_.size();
    size_ = std::min(size_ + 1, buf_.size());
  }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return buf_.size(); }
  bool empty() const { return size_ == 0; }

  double operator[](std::size_t i) const {
    return buf_[(head_ + buf_.size() - size_ + i) % buf_.size()];
  }

  /// i = 0 is the newest reward.
  double recent(std::size_t i) const { return (*this)[size_ - 1 - i]; }

  std::vector<double> to_vector() const {
    std::vector<double> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i) out.push_back((*this)[i]);
    return out;
  }

 private:
  std::vector<double> buf_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

/// How per-reward scores in the window are combined.
///   mean: (1/m) sum_i grad log p(X_i | theta)
///   sum:  sum_i grad log p(X_i | theta), the score of the window likelihood
enum class WindowReduction { mean, sum };

/// Mean score over the m = min(window size, cap) newest rewards.
inline Vector minibatch_gradient(const LinearGaussianModel& model, const RewardWindow& window,
                                 const Vector& theta, std::size_t cap) {
  TSSA_ASSERT(!window.empty(), "minibatch_gradient: empty reward window");
  TSSA_ASSERT(cap >= 1, "minibatch_gradient: cap must be >= 1");
  std::size_t m = std::min(window.size(), cap);
  Vector g = Vector::Zero(theta.size());
  for (std::size_t i = 0; i < m; ++i) g += model.grad_log_density(window.recent(i), theta);
  return g / static_cast<double>(m);
}

inline Vector window_gradient(const LinearGaussianModel& model, const RewardWindow& window,
                              const Vector& theta, std::size_t cap, WindowReduction reduction) {
  Vector g = minibatch_gradient(model, window, theta, cap);
  if (reduction == WindowReduction::sum)
    g *= static_cast<double>(std::min(window.size(), cap));
  return g;
}

/// omega = theta + h * gradient + noise_scale * N(0, 2h I). Draws exactly
/// theta.size() normals. noise_scale = 1 is the TS-SA proposal; 1/sqrt(n tau)
/// gives the TS-SGLD Euler-Maruyama step.
inline Vector lmc_step(const Vector& theta, const Vector& gradient, double h, RandomStream& rng,
                       double noise_scale = 1.0) {
  TSSA_ASSERT(h >= 0.0, "lmc_step: step size must be >= 0");
  TSSA_ASSERT(theta.size() == gradient.size(), "lmc_step: dimension mismatch");
  double sd = noise_scale * std::sqrt(2.0 * h);
  Vector omega(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    omega[i] = theta[i] + h * gradient[i] + sd * rng.normal();
  return omega;
}

/// (1 - gamma) theta + gamma omega, evaluated as theta + gamma (omega - theta)
/// so that omega == theta and gamma == 1 are exact.
inline Vector sa_average(const Vector& theta, const Vector& omega, double gamma) {
  TSSA_ASSERT(gamma > 0.0 && gamma <= 1.0, "sa_average: gamma must be in (0, 1]");
  if (gamma == 1.0) return omega;
  return theta + gamma * (omega - theta);
}

struct UpdateOptions {
  WindowReduction reduction = WindowReduction::mean;
  double noise_scale = 1.0;
};

/// N rounds of {gradient, Langevin proposal, SA average}, starting from theta.
inline Vector ts_sa_update(Vector theta, const RewardWindow& window,
                           const LinearGaussianModel& model, const LangevinConfig& cfg,
                           double gamma, RandomStream& rng, const UpdateOptions& opts = {},
                           std::size_t inner_iters = 0) {
  std::size_t iters = inner_iters == 0 ? cfg.inner_iters : inner_iters;
  for (std::size_t j = 0; j < iters; ++j) {
    Vector g = window_gradient(model, window, theta, cfg.batch_cap, opts.reduction);
    Vector omega = lmc_step(theta, g, cfg.step_size, rng, opts.noise_scale);
    theta = sa_average(theta, omega, gamma);
  }
  return theta;
}

/// The same update written in one line:
/// theta + h gamma g + gamma * noise_scale * N(0, 2h I).
inline Vector joint_update(Vector theta, const RewardWindow& window,
                           const LinearGaussianModel& model, const LangevinConfig& cfg,
                           double gamma, RandomStream& rng, const UpdateOptions& opts = {}) {
  for (std::size_t j = 0; j < cfg.inner_iters; ++j) {
    Vector g = window_gradient(model, window, theta, cfg.batch_cap, opts.reduction);
    double h = cfg.step_size;
    double sd = opts.noise_scale * std::sqrt(2.0 * h);
    Vector next(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i)
      next[i] = theta[i] + h * gamma * g[i] + gamma * (sd * rng.normal());
    theta = std::move(next);
  }
  return theta;
}

/// theta + N(0, I / (tau n)).
inline Vector decision_sample(const Vector& theta, std::size_t n, double tau,
                              RandomStream& rng) {
  TSSA_ASSERT(n >= 1, "decision_sample: n must be >= 1");
  TSSA_ASSERT(tau > 0.0, "decision_sample: tau must be > 0");
  double sd = 1.0 / std::sqrt(tau * static_cast<double>(n));
  Vector out(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) out[i] = theta[i] + sd * rng.normal();
  return out;
}

}  // namespace tssa
