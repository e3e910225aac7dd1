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

// tssa: bandit experiments and sampler diagnostics.
//
//   tssa run <config> [--seed N] [--out file.csv]
//   tssa sweep <config> --param policy.ts_sa.warmup --values 1,5,19 [--seed N] [--out file.csv]
//   tssa diag gradcheck [--tuples 1000] [--seed N] [--csv file]
//   tssa diag conjugate [--n 50] [--step-size 0.01] [--samples 100000] [--seed N] [--csv file]
//   tssa diag concentration [--pulls 100,200,400,800] [--trials 200] [--seed N] [--csv file]
//
// Exit codes: 0 success, 1 config error, 2 runtime error. Trial parallelism
// is capped by BANDIT_THREADS.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tssa/tssa.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

void print_summary(const std::vector<tssa::PolicyResult>& results) {
  for (const auto& r : results) {
    std::printf("  %-24s final regret %10.3f +- %.3f  (%zu trials)\n", r.name.c_str(),
                r.aggregate.final_mean(), r.aggregate.stderr_.back(), r.aggregate.trials);
  }
}

int cmd_run(const std::string& config, std::optional<std::uint64_t> seed,
            const std::string& out) {
  tssa::ExperimentSpec spec = tssa::parse_config(config);
  if (seed) spec.base_seed = *seed;
  auto results = tssa::run_experiment(spec);
  std::filesystem::path path = out.empty() ? tssa::output_path(spec) : std::filesystem::path(out);
  tssa::write_csv(results, path);
  std::printf("%s K=%zu gap=%g T=%zu trials=%zu seed=%llu\n",
              tssa::to_string(spec.environment.kind).c_str(), spec.environment.num_arms(),
              spec.environment.gap, spec.horizon, spec.trials,
              static_cast<unsigned long long>(spec.base_seed));
  print_summary(results);
  std::printf("wrote %s\n", path.string().c_str());
  return kExitOk;
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    auto b = item.find_first_not_of(' ');
    auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// Bare words become strings; numbers, booleans and quoted text pass through.
std::string as_config_value(const std::string& v) {
  if (v == "true" || v == "false" || (!v.empty() && (v.front() == '"' || v.front() == '[')))
    return v;
  double d = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec == std::errc() && p == v.data() + v.size()) return v;
  return "\"" + v + "\"";
}

int cmd_sweep(const std::string& config, const std::string& param,
              const std::string& values_arg, std::optional<std::uint64_t> seed,
              const std::string& out) {
  if (param == "run.horizon" || param == "run.record_stride")
    throw tssa::ConfigError("sweep: '" + param + "' changes the round grid and cannot be swept");
  auto values = split_csv_list(values_arg);
  if (values.empty()) throw tssa::ConfigError("sweep: --values is empty");
  tssa::ConfigDocument base = tssa::read_document(config);

  // Parse every variant before running anything.
  std::vector<tssa::ExperimentSpec> specs;
  for (const auto& v : values) {
    tssa::ConfigDocument doc = base;
    doc.set(param, as_config_value(v));
    tssa::ExperimentSpec spec;
    try {
      spec = tssa::spec_from_document(doc);
    } catch (const tssa::ConfigError& e) {
      throw tssa::ConfigError(config + " with " + param + "=" + v + ": " + e.what());
    }
    if (seed) spec.base_seed = *seed;
    // A policy key only changes that policy; drop the rest.
    if (param.rfind("policy.", 0) == 0) {
      std::string name = param.substr(7, param.rfind('.') - 7);
      spec.policies = {spec.policy(name)};
    }
    specs.push_back(std::move(spec));
  }

  std::vector<std::vector<tssa::PolicyResult>> all;
  std::vector<tssa::CsvColumn> columns;
  std::vector<std::string> names;
  all.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    all.push_back(tssa::run_experiment(specs[i]));
    std::printf("%s = %s\n", param.c_str(), values[i].c_str());
    print_summary(all.back());
  }
  for (std::size_t i = 0; i < specs.size(); ++i)
    for (const auto& r : all[i]) names.push_back(r.name + "@" + values[i]);
  std::size_t k = 0;
  for (const auto& res : all)
    for (const auto& r : res) columns.push_back({names[k++], &r.aggregate});

  std::filesystem::path path = out;
  if (path.empty()) {
    std::string stem = param;
    std::replace(stem.begin(), stem.end(), '.', '_');
    path = std::filesystem::path(specs.front().output.directory) / ("sweep_" + stem + ".csv");
  }
  tssa::write_csv(columns, path);
  std::printf("wrote %s\n", path.string().c_str());
  return kExitOk;
}

std::ofstream open_csv(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::trunc);
  if (!f) throw tssa::IoError("cannot open '" + path + "' for writing");
  return f;
}

int cmd_gradcheck(std::size_t tuples, std::uint64_t seed, const std::string& csv) {
  auto res = tssa::gradient_check(tuples, seed);
  bool pass = res.max_rel_error < 1e-6;
  std::printf("[%s] gradcheck: %zu tuples, max relative error %.3e (threshold 1e-6)\n",
              pass ? "PASS" : "FAIL", tuples, res.max_rel_error);
  if (!csv.empty()) {
    auto f = open_csv(csv);
    f << "index,dim,x,sigma2,rel_error\n";
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
      const auto& r = res.rows[i];
      f << i << "," << r.theta.size() << "," << tssa::format_real(r.x) << ","
        << tssa::format_real(r.noise_variance) << "," << tssa::format_real(r.rel_error) << "\n";
    }
  }
  return pass ? kExitOk : kExitRuntime;
}

int cmd_conjugate(std::size_t n, double h, std::size_t burn_in, std::size_t samples,
                  std::uint64_t seed, const std::string& csv) {
  auto res = tssa::conjugate_chain_check(n, 1.5, h, burn_in, samples, seed);
  const auto& m = res.moments;
  bool pass = !m.diverged && m.mean_error < 0.02 && res.relative_var_error < 0.2;
  std::printf("[%s] conjugate: n=%zu h=%g  posterior N(%.5f, %.5f)  chain mean %.5f var %.5f\n",
              pass ? "PASS" : "FAIL", n, h, m.target.mean, m.target.variance, m.empirical_mean,
              m.empirical_variance);
  std::printf("  mean error %.5f (< 0.02), variance error %.1f%% (< 20%%)%s\n", m.mean_error,
              100.0 * res.relative_var_error, m.diverged ? "  DIVERGED" : "");
  if (!csv.empty()) {
    auto f = open_csv(csv);
    f << "quantity,oracle,chain,abs_error\n";
    f << "mean," << tssa::format_real(m.target.mean) << "," << tssa::format_real(m.empirical_mean)
      << "," << tssa::format_real(m.mean_error) << "\n";
    f << "variance," << tssa::format_real(m.target.variance) << ","
      << tssa::format_real(m.empirical_variance) << "," << tssa::format_real(m.var_error) << "\n";
  }
  return pass ? kExitOk : kExitRuntime;
}

int cmd_concentration(const std::string& pulls_arg, std::size_t trials, std::uint64_t seed,
                      const std::string& config, const std::string& policy_name,
                      const std::string& csv) {
  std::vector<std::size_t> grid;
  for (const auto& s : split_csv_list(pulls_arg)) grid.push_back(std::stoul(s));
  tssa::PolicyConfig cfg = tssa::canonical_concentration_config();
  if (!config.empty()) {
    auto spec = tssa::parse_config(config);
    cfg = spec.policy(policy_name).config;
  }
  tssa::LinearArm arm{tssa::LinearGaussianModel::scalar(1.0), tssa::Vector::Constant(1, 3.0)};
  auto rows = tssa::concentration_probe(cfg, arm, grid, trials, seed);

  std::printf("%8s %10s %10s %10s %10s\n", "pulls", "q10", "median", "q90", "ratio");
  std::size_t in_band = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double ratio = i ? rows[i - 1].median / rows[i].median : 0.0;
    bool ok = i && ratio >= 1.2 && ratio <= 1.7;
    in_band += ok;
    std::printf("%8zu %10.5f %10.5f %10.5f %10s\n", rows[i].pulls, rows[i].q10, rows[i].median,
                rows[i].q90, i ? tssa::format_sig6(ratio).c_str() : "-");
  }
  std::size_t total = rows.size() - 1;
  bool pass = total > 0 && 3 * in_band >= 2 * total;
  std::printf("[%s] concentration: %zu of %zu consecutive median ratios in [1.2, 1.7]\n",
              pass ? "PASS" : "FAIL", in_band, total);
  if (!csv.empty()) {
    auto f = open_csv(csv);
    f << "pulls,q10,median,q90,mean,median_stderr\n";
    for (const auto& r : rows)
      f << r.pulls << "," << tssa::format_sig6(r.q10) << "," << tssa::format_sig6(r.median) << ","
        << tssa::format_sig6(r.q90) << "," << tssa::format_sig6(r.mean) << ","
        << tssa::format_sig6(r.median_stderr) << "\n";
  }
  return pass ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thompson sampling with stochastic approximation: experiments and diagnostics"};
  app.require_subcommand(1);

  std::string config, out, csv, param, values, policy_name = "ts_sa";
  std::optional<std::uint64_t> seed;
  std::uint64_t diag_seed = 0;

  auto* run = app.add_subcommand("run", "Run an experiment config and write the regret CSV");
  run->add_option("config", config, "Experiment config file")->required();
  run->add_option("--seed", seed, "Override run.base_seed");
  run->add_option("--out", out, "CSV path (default: from [output])");

  auto* sweep = app.add_subcommand("sweep", "One-parameter ablation sweep");
  sweep->add_option("config", config, "Experiment config file")->required();
  sweep->add_option("--param", param, "Key path, e.g. policy.ts_sa.warmup")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--seed", seed, "Override run.base_seed");
  sweep->add_option("--out", out, "CSV path");

  auto* diag = app.add_subcommand("diag", "Sampler diagnostics");
  diag->require_subcommand(1);

  std::size_t tuples = 1000;
  auto* grad = diag->add_subcommand("gradcheck", "Analytic score vs finite differences");
  grad->add_option("--tuples", tuples);
  grad->add_option("--seed", diag_seed);
  grad->add_option("--csv", csv);

  std::size_t n = 50, burn_in = 10000, samples = 100000;
  double h = 0.01;
  auto* conj = diag->add_subcommand("conjugate", "TS-SA chain vs closed-form Gaussian posterior");
  conj->add_option("--n", n, "Dataset size");
  conj->add_option("--step-size", h, "Langevin step size");
  conj->add_option("--burn-in", burn_in);
  conj->add_option("--samples", samples);
  conj->add_option("--seed", diag_seed);
  conj->add_option("--csv", csv);

  std::string pulls = "100,200,400,800";
  std::size_t trials = 200;
  auto* conc = diag->add_subcommand("concentration", "Estimation error decay in the pull count");
  conc->add_option("--pulls", pulls, "Increasing pull counts");
  conc->add_option("--trials", trials);
  conc->add_option("--seed", diag_seed);
  conc->add_option("--config", config, "Take the ts_sa policy from this config instead");
  conc->add_option("--policy", policy_name, "Policy name within --config");
  conc->add_option("--csv", csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(config, seed, out);
    if (*sweep) return cmd_sweep(config, param, values, seed, out);
    if (*grad) return cmd_gradcheck(tuples, diag_seed, csv);
    if (*conj) return cmd_conjugate(n, h, burn_in, samples, diag_seed, csv);
    if (*conc) return cmd_concentration(pulls, trials, diag_seed, config, policy_name, csv);
  } catch (const tssa::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitRuntime;
}
