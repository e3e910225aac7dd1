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
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "tssa/errors.hpp"
#include "tssa/random.hpp"

namespace tssa {

using Vector = Eigen::VectorXd;

/// Scalar-output linear Gaussian likelihood: X ~ N(<feature, theta>, noise_variance).
///
/// Environments use it to draw rewards for a known theta*; policies use its
/// score in theta to drive Langevin updates.
class LinearGaussianModel {
 public:
  LinearGaussianModel(Vector feature, double noise_variance)
      : feature_(std::move(feature)), noise_variance_(noise_variance) {
    TSSA_REQUIRE(noise_variance_ > 0.0 && std::isfinite(noise_variance_),
                 "LinearGaussianModel: noise_variance must be positive and finite");
    TSSA_REQUIRE(feature_.size() >= 1, "LinearGaussianModel: feature must be nonempty");
    double norm = feature_.norm();
    TSSA_REQUIRE(std::isfinite(norm) && norm > 0.0,
                 "LinearGaussianModel: feature norm must be finite and nonzero");
  }

  /// The unit scalar model used by all shipped configurations.
  static LinearGaussianModel scalar(double noise_variance = 1.0) {
    return LinearGaussianModel(Vector::Ones(1), noise_variance);
  }

  const Vector& feature() const { return feature_; }
  double noise_variance() const { return noise_variance_; }
  Eigen::Index dim() const { return feature_.size(); }
  double feature_norm() const { return feature_.norm(); }

  double mean(const Vector& theta) const {
    check_dim(theta);
    return feature_.dot(theta);
  }

  double sample(const Vector& theta, RandomStream& rng) const {
    return mean(theta) + std::sqrt(noise_variance_) * rng.normal();
  }

  double log_density(double x, const Vector& theta) const {
    double r = x - mean(theta);
    return -r * r / (2.0 * noise_variance_) -
           0.5 * std::log(2.0 * std::numbers::pi * noise_variance_);
  }

  /// d/dtheta log p(x | theta) = feature * (x - <feature, theta>) / sigma^2.
  Vector grad_log_density(double x, const Vector& theta) const {
    return feature_ * ((x - mean(theta)) / noise_variance_);
  }

 private:
  void check_dim(const Vector& theta) const {
    TSSA_REQUIRE(theta.size() == feature_.size(),
                 "LinearGaussianModel: theta has dimension " + std::to_string(theta.size()) +
                     ", feature has dimension " + std::to_string(feature_.size()));
  }

  Vector feature_;
  double noise_variance_;
};

/// Equal-weight mixture 1/2 N(mu_lo, s2) + 1/2 N(mu_hi, s2).
class MixtureGaussianReward {
 public:
  MixtureGaussianReward(double mu_lo, double mu_hi, double component_variance)
      : mu_lo_(mu_lo), mu_hi_(mu_hi), component_variance_(component_variance) {
    TSSA_REQUIRE(std::isfinite(mu_lo) && std::isfinite(mu_hi),
                 "MixtureGaussianReward: component means must be finite");
    TSSA_REQUIRE(component_variance > 0.0 && std::isfinite(component_variance),
                 "MixtureGaussianReward: component_variance must be positive and finite");
  }

  double mu_lo() const { return mu_lo_; }
  double mu_hi() const { return mu_hi_; }
  double component_variance() const { return component_variance_; }
  double mean() const { return 0.5 * (mu_lo_ + mu_hi_); }
  double variance() const {
    double half_gap = 0.5 * (mu_hi_ - mu_lo_);
    return component_variance_ + half_gap * half_gap;
  }

  // Component choice first, then the Gaussian draw.
  double sample(RandomStream& rng) const {
    double mu = rng.uniform() <= 0.5 ? mu_lo_ : mu_hi_;
    return mu + std::sqrt(component_variance_) * rng.normal();
  }

 private:
  double mu_lo_;
  double mu_hi_;
  double component_variance_;
};

inline double sample_reward(const LinearGaussianModel& model, const Vector& theta,
                            RandomStream& rng) {
  return model.sample(theta, rng);
}

inline double sample_reward(const MixtureGaussianReward& model, RandomStream& rng) {
  return model.sample(rng);
}

inline double log_density(const LinearGaussianModel& model, double x, const Vector& theta) {
  return model.log_density(x, theta);
}

inline Vector grad_log_density(const LinearGaussianModel& model, double x, const Vector& theta) {
  return model.grad_log_density(x, theta);
}

}  // namespace tssa
