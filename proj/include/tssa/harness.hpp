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
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tssa/environment.hpp"
#include "tssa/errors.hpp"
#include "tssa/policies.hpp"
#include "tssa/random.hpp"

namespace tssa {

struct EnvironmentSpec {
  EnvironmentKind kind = EnvironmentKind::sgr;
  std::size_t arms = 10;
  double gap = 0.5;
  double mu1 = 3.0;
  double sigma2 = 1.0;
  std::vector<double> means;  // custom only: Gaussian arms with these means

  std::size_t num_arms() const { return kind == EnvironmentKind::custom ? means.size() : arms; }

  BanditInstance build() const {
    switch (kind) {
      case EnvironmentKind::sgr: return make_sgr(arms, gap, mu1, sigma2);
      case EnvironmentKind::mgr: return make_mgr(arms, gap, mu1, sigma2);
      case EnvironmentKind::custom:
        TSSA_REQUIRE(sigma2 > 0.0, "environment: sigma2 must be > 0");
        return BanditInstance::gaussian(means, sigma2);
    }
    throw ConfigError("environment: unknown kind");
  }

  friend bool operator==(const EnvironmentSpec&, const EnvironmentSpec&) = default;
};

struct NamedPolicy {
  std::string name;
  PolicyConfig config;

  friend bool operator==(const NamedPolicy&, const NamedPolicy&) = default;
};

struct OutputSpec {
  std::string directory = ".";
  std::string csv = "regret.csv";

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ExperimentSpec {
  EnvironmentSpec environment;
  std::vector<NamedPolicy> policies;
  std::size_t horizon = 10000;
  std::size_t trials = 50;
  std::uint64_t base_seed = 0;
  std::size_t record_stride = 10;
  bool crn = false;
  OutputSpec output;

  const NamedPolicy& policy(const std::string& name) const {
    for (const auto& p : policies)
      if (p.name == name) return p;
    throw ConfigError("no policy named '" + name + "'");
  }

  void validate() const {
    TSSA_REQUIRE(horizon >= 1, "run.horizon must be >= 1");
    TSSA_REQUIRE(horizon >= environment.num_arms(), "run.horizon must be >= environment.arms");
    TSSA_REQUIRE(trials >= 1, "run.trials must be >= 1");
    TSSA_REQUIRE(record_stride >= 1, "run.record_stride must be >= 1");
    TSSA_REQUIRE(!policies.empty(), "at least one [policy.<name>] section is required");
    for (std::size_t i = 0; i < policies.size(); ++i) {
      for (std::size_t j = i + 1; j < policies.size(); ++j)
        TSSA_REQUIRE(policies[i].name != policies[j].name,
                     "duplicate policy name '" + policies[i].name + "'");
      policies[i].config.validate();
    }
    (void)environment.build();
  }

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Cumulative pseudo-regret of one trial at the recorded adaptive rounds.
/// Warm-up regret is already included in every value; the warm-up pulls
/// themselves occupy rounds -warmup_rounds+1 .. 0.
struct RegretTrace {
  std::vector<std::size_t> rounds;
  std::vector<double> cumulative_regret;
  std::size_t warmup_rounds = 0;
  double warmup_regret = 0.0;

  double final_regret() const { return cumulative_regret.empty() ? 0.0 : cumulative_regret.back(); }
  friend bool operator==(const RegretTrace&, const RegretTrace&) = default;
};

struct AggregateTrace {
  std::vector<std::size_t> rounds;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t trials = 0;

  double final_mean() const { return mean.empty() ? 0.0 : mean.back(); }
};

/// {stride, 2 stride, ...} plus the horizon itself.
inline std::vector<std::size_t> recorded_rounds(std::size_t horizon, std::size_t stride) {
  std::vector<std::size_t> out;
  for (std::size_t t = stride; t <= horizon; t += stride) out.push_back(t);
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

template <class A>
concept BanditAgent = requires(A a, const BanditInstance& env, RandomStream& rng, std::size_t t,
                               double x) {
  { a.warm_start(env, rng, rng) } -> std::convertible_to<double>;
  { a.select_arm(t, rng) } -> std::convertible_to<std::size_t>;
  a.update(t, x, rng);
};

/// Warm-up followed by `horizon` adaptive rounds.
template <BanditAgent Agent>
RegretTrace simulate(const BanditInstance& env, Agent& agent, std::size_t horizon,
                     std::size_t stride, RandomStream& policy_rng, RandomStream& env_rng,
                     std::size_t warmup_rounds = 0) {
  RegretTrace trace;
  trace.rounds = recorded_rounds(horizon, stride);
  trace.cumulative_regret.reserve(trace.rounds.size());
  trace.warmup_rounds = warmup_rounds;
  trace.warmup_regret = agent.warm_start(env, policy_rng, env_rng);

  double regret = trace.warmup_regret;
  std::size_t next = 0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    std::size_t arm = agent.select_arm(t, policy_rng);
    PullResult p = env.pull(arm, env_rng);
    regret += p.regret;
    agent.update(arm, p.reward, policy_rng);
    if (trace.rounds[next] == t) {
      trace.cumulative_regret.push_back(regret);
      ++next;
    }
  }
  return trace;
}

inline std::string environment_stream_name(const ExperimentSpec& spec,
                                           const std::string& policy_name) {
  return spec.crn ? std::string("#environment") : policy_name + "#environment";
}

/// One trial. Streams depend only on (base_seed, policy_name, trial_index).
inline RegretTrace run_trial(const ExperimentSpec& spec, const std::string& policy_name,
                             std::size_t trial_index) {
  TSSA_ASSERT(trial_index < spec.trials, "run_trial: trial index out of range");
  const NamedPolicy& np = spec.policy(policy_name);
  BanditInstance env = spec.environment.build();
  RandomStream policy_rng = provision_stream(spec.base_seed, policy_name, trial_index);
  RandomStream env_rng =
      provision_stream(spec.base_seed, environment_stream_name(spec, policy_name), trial_index);
  Policy policy(np.config, env.num_arms(), spec.horizon);
  return simulate(env, policy, spec.horizon, spec.record_stride, policy_rng, env_rng,
                  np.config.warmup * env.num_arms());
}

/// Thread cap from BANDIT_THREADS, else the hardware concurrency.
inline std::size_t default_thread_count() {
  if (const char* env = std::getenv("BANDIT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    throw ConfigError("BANDIT_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The first exception
/// is rethrown after all workers join.
inline void parallel_for(std::size_t n, std::size_t threads,
                         const std::function<void(std::size_t)>& fn) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Mean and standard error (sample sd / sqrt(n)) per recorded round. Values
/// are summed in sorted order, so the result is bitwise independent of the
/// order of `traces`.
inline AggregateTrace aggregate(const std::vector<RegretTrace>& traces) {
  TSSA_ASSERT(!traces.empty(), "aggregate: no traces");
  AggregateTrace out;
  out.rounds = traces.front().rounds;
  out.trials = traces.size();
  for (const auto& tr : traces)
    TSSA_ASSERT(tr.rounds == out.rounds, "aggregate: traces have different round grids");

  const double n = static_cast<double>(traces.size());
  std::vector<double> column(traces.size());
  for (std::size_t r = 0; r < out.rounds.size(); ++r) {
    for (std::size_t i = 0; i < traces.size(); ++i) column[i] = traces[i].cumulative_regret[r];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    double mean = sum / n;
    double se = 0.0;
    if (traces.size() > 1) {
      std::vector<double> sq(column.size());
      for (std::size_t i = 0; i < column.size(); ++i) sq[i] = (column[i] - mean) * (column[i] - mean);
      std::sort(sq.begin(), sq.end());
      double ss = 0.0;
      for (double v : sq) ss += v;
      se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    out.mean.push_back(mean);
    out.stderr_.push_back(se);
  }
  return out;
}

struct PolicyResult {
  std::string name;
  AggregateTrace aggregate;
  std::vector<RegretTrace> traces;
};

/// All trials of all policies, parallel over (policy, trial) pairs.
inline std::vector<PolicyResult> run_experiment(const ExperimentSpec& spec,
                                                std::size_t threads = default_thread_count()) {
  spec.validate();
  const std::size_t np = spec.policies.size();
  std::vector<std::vector<RegretTrace>> traces(np, std::vector<RegretTrace>(spec.trials));
  parallel_for(np * spec.trials, threads, [&](std::size_t job) {
    std::size_t p = job / spec.trials, trial = job % spec.trials;
    traces[p][trial] = run_trial(spec, spec.policies[p].name, trial);
  });
  std::vector<PolicyResult> out;
  out.reserve(np);
  for (std::size_t p = 0; p < np; ++p) {
    AggregateTrace agg = aggregate(traces[p]);
    out.push_back({spec.policies[p].name, std::move(agg), std::move(traces[p])});
  }
  return out;
}

struct ScalingPoint {
  std::size_t horizon;
  double final_mean_regret;
  double final_stderr;
};

/// Final mean regret of one policy at each horizon.
inline std::vector<ScalingPoint> regret_scaling_probe(ExperimentSpec spec,
                                                      const std::string& policy_name,
                                                      const std::vector<std::size_t>& horizons,
                                                      std::size_t threads = default_thread_count()) {
  TSSA_REQUIRE(horizons.size() >= 3, "regret_scaling_probe: need at least 3 horizons");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    TSSA_REQUIRE(horizons[i] > horizons[i - 1],
                 "regret_scaling_probe: horizons must be strictly increasing");
  spec.policies = {spec.policy(policy_name)};
  std::vector<ScalingPoint> out;
  for (std::size_t T : horizons) {
    spec.horizon = T;
    spec.record_stride = T;
    auto res = run_experiment(spec, threads);
    out.push_back({T, res.front().aggregate.final_mean(), res.front().aggregate.stderr_.back()});
  }
  return out;
}

}  // namespace tssa
