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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "tssa/errors.hpp"
#include "tssa/random.hpp"
#include "tssa/reward_models.hpp"

namespace tssa {

enum class EnvironmentKind { sgr, mgr, custom };

inline std::string to_string(EnvironmentKind k) {
  switch (k) {
    case EnvironmentKind::sgr: return "sgr";
    case EnvironmentKind::mgr: return "mgr";
    case EnvironmentKind::custom: return "custom";
  }
  return "?";
}

/// A Gaussian arm with a fixed true parameter.
struct LinearArm {
  LinearGaussianModel model;
  Vector theta;
};

using ArmGenerator = std::variant<LinearArm, MixtureGaussianReward>;

struct PullResult {
  double reward;
  double regret;  // pseudo-regret of the chosen arm
};

/// A stationary K-armed bandit. Arms are indexed 0..K-1; the optimal arm is
/// the lowest index attaining the maximum mean.
class BanditInstance {
 public:
  /// Gaps are taken from `gaps` when given (so that SGR/MGR increments are
  /// exactly the configured Delta), otherwise computed as max_mean - mean.
  BanditInstance(EnvironmentKind kind, std::vector<ArmGenerator> arms,
                 std::vector<double> true_means, std::vector<double> gaps = {})
      : kind_(kind),
        arms_(std::move(arms)),
        true_means_(std::move(true_means)),
        gaps_(std::move(gaps)) {
    TSSA_REQUIRE(arms_.size() >= 2, "BanditInstance: need at least 2 arms");
    TSSA_REQUIRE(arms_.size() == true_means_.size(),
                 "BanditInstance: arms and true_means differ in length");
    for (double m : true_means_)
      TSSA_REQUIRE(std::isfinite(m), "BanditInstance: true means must be finite");
    optimal_ = static_cast<std::size_t>(
        std::max_element(true_means_.begin(), true_means_.end()) - true_means_.begin());
    if (gaps_.empty()) {
      gaps_.reserve(true_means_.size());
      for (double m : true_means_) gaps_.push_back(true_means_[optimal_] - m);
    }
    TSSA_REQUIRE(gaps_.size() == true_means_.size(), "BanditInstance: gaps length mismatch");
    max_gap_ = *std::max_element(gaps_.begin(), gaps_.end());
  }

  static BanditInstance gaussian(std::vector<double> means, double sigma2) {
    std::vector<ArmGenerator> arms;
    for (double m : means) {
      arms.push_back(LinearArm{LinearGaussianModel::scalar(sigma2), Vector::Constant(1, m)});
    }
    return BanditInstance(EnvironmentKind::custom, std::move(arms), std::move(means));
  }

  EnvironmentKind kind() const { return kind_; }
  std::size_t num_arms() const { return arms_.size(); }
  std::size_t optimal_arm() const { return optimal_; }
  const std::vector<double>& true_means() const { return true_means_; }
  const std::vector<double>& gaps() const { return gaps_; }
  double max_gap() const { return max_gap_; }
  const ArmGenerator& arm(std::size_t a) const { return arms_.at(a); }

  PullResult pull(std::size_t arm, RandomStream& rng) const {
    TSSA_ASSERT(arm < arms_.size(), "BanditInstance::pull: arm index " + std::to_string(arm) +
                                        " out of range");
    double reward = std::visit(
        [&](const auto& gen) -> double {
          using T = std::decay_t<decltype(gen)>;
          if constexpr (std::is_same_v<T, LinearArm>) {
            return sample_reward(gen.model, gen.theta, rng);
          } else {
            return sample_reward(gen, rng);
          }
        },
        arms_[arm]);
    return {reward, gaps_[arm]};
  }

 private:
  EnvironmentKind kind_;
  std::vector<ArmGenerator> arms_;
  std::vector<double> true_means_;
  std::vector<double> gaps_;
  std::size_t optimal_ = 0;
  double max_gap_ = 0.0;
};

inline void check_instance_params(std::size_t k, double delta, double mu1, double sigma2) {
  TSSA_REQUIRE(k >= 2, "environment: arms must be >= 2");
  TSSA_REQUIRE(delta > 0.0 && std::isfinite(delta), "environment: gap must be > 0");
  TSSA_REQUIRE(std::isfinite(mu1), "environment: mu1 must be finite");
  TSSA_REQUIRE(sigma2 > 0.0 && std::isfinite(sigma2), "environment: sigma2 must be > 0");
}

/// Single Gaussian rewards: arm 0 ~ N(mu1, sigma2), the rest ~ N(mu1 - delta, sigma2).
inline BanditInstance make_sgr(std::size_t k, double delta, double mu1, double sigma2) {
  check_instance_params(k, delta, mu1, sigma2);
  std::vector<ArmGenerator> arms;
  std::vector<double> means, gaps;
  for (std::size_t a = 0; a < k; ++a) {
    double m = a == 0 ? mu1 : mu1 - delta;
    arms.push_back(LinearArm{LinearGaussianModel::scalar(sigma2), Vector::Constant(1, m)});
    means.push_back(m);
    gaps.push_back(a == 0 ? 0.0 : delta);
  }
  return BanditInstance(EnvironmentKind::sgr, std::move(arms), std::move(means),
                        std::move(gaps));
}

/// Mixture Gaussian rewards: arm 0 ~ 1/2 N(mu1, s2) + 1/2 N(mu1 + delta, s2),
/// the rest ~ 1/2 N(mu1 - delta, s2) + 1/2 N(mu1, s2).
inline BanditInstance make_mgr(std::size_t k, double delta, double mu1, double sigma2) {
  check_instance_params(k, delta, mu1, sigma2);
  std::vector<ArmGenerator> arms;
  std::vector<double> means, gaps;
  for (std::size_t a = 0; a < k; ++a) {
    MixtureGaussianReward mix = a == 0 ? MixtureGaussianReward(mu1, mu1 + delta, sigma2)
                                       : MixtureGaussianReward(mu1 - delta, mu1, sigma2);
    means.push_back(mix.mean());
    gaps.push_back(a == 0 ? 0.0 : delta);
    arms.emplace_back(mix);
  }
  return BanditInstance(EnvironmentKind::mgr, std::move(arms), std::move(means),
                        std::move(gaps));
}

}  // namespace tssa
