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

// Experiment config files.
//
// The format is a small TOML subset:
//
//   # comment
//   [environment]
//   kind = "sgr"            # sgr | mgr | custom
//   arms = 10
//   gap = 0.5
//   mu1 = 3.0
//   sigma2 = 1.0
//   # means = [3.0, 2.5]   # custom only
//
//   [policy.ts_sa]          # kind defaults to the section name
//   warmup = 19
//
//   [policy.sgld]
//   kind = "ts_sgld"
//   step_size = 0.5
//
//   [run]
//   horizon = 10000
//   trials = 50
//   base_seed = 0
//   record_stride = 10
//   crn = false
//
//   [output]
//   directory = "out"
//   csv = "regret_{env}_K{arms}_gap{gap}.csv"
//
// Values are integers, reals, booleans, double-quoted strings, or flat lists
// of reals. Unknown sections and keys are errors. Omitted policy keys take
// PolicyConfig::defaults(kind).

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tssa/errors.hpp"
#include "tssa/harness.hpp"
#include "tssa/policies.hpp"

namespace tssa {

struct ConfigEntry {
  std::string key;
  std::string value;  // raw text, quotes included
  int line = 0;
};

struct ConfigSection {
  std::string name;
  std::vector<ConfigEntry> entries;
  int line = 0;

  const ConfigEntry* find(std::string_view key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

/// Syntax-level view of a config file, before any validation.
struct ConfigDocument {
  std::vector<ConfigSection> sections;

  ConfigSection* find(std::string_view name) {
    for (auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  }
  const ConfigSection* find(std::string_view name) const {
    return const_cast<ConfigDocument*>(this)->find(name);
  }

  /// Sets `section.key` (e.g. "policy.ts_sa.warmup") to a raw value,
  /// creating the entry if needed. The section must exist.
  void set(std::string_view path, std::string value) {
    auto dot = path.rfind('.');
    TSSA_REQUIRE(dot != std::string_view::npos && dot > 0 && dot + 1 < path.size(),
                 "config key path must look like <section>.<key>, got '" + std::string(path) + "'");
    std::string section(path.substr(0, dot)), key(path.substr(dot + 1));
    ConfigSection* s = find(section);
    TSSA_REQUIRE(s != nullptr, "no section [" + section + "] for key '" + std::string(path) + "'");
    for (auto& e : s->entries) {
      if (e.key == key) {
        e.value = std::move(value);
        return;
      }
    }
    s->entries.push_back({key, std::move(value), 0});
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

// Strips a trailing '#' comment that is not inside a string.
inline std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

inline std::string where(const std::string& path, int line) {
  return line > 0 ? path + " (line " + std::to_string(line) + ")" : path;
}

}  // namespace detail

inline ConfigDocument parse_document(std::string_view text) {
  ConfigDocument doc;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      TSSA_REQUIRE(line.back() == ']', "line " + std::to_string(lineno) + ": malformed section header");
      std::string name(detail::trim(line.substr(1, line.size() - 2)));
      TSSA_REQUIRE(!name.empty(), "line " + std::to_string(lineno) + ": empty section name");
      TSSA_REQUIRE(doc.find(name) == nullptr,
                   "line " + std::to_string(lineno) + ": duplicate section [" + name + "]");
      doc.sections.push_back({name, {}, lineno});
      continue;
    }
    auto eq = line.find('=');
    TSSA_REQUIRE(eq != std::string_view::npos,
                 "line " + std::to_string(lineno) + ": expected 'key = value'");
    TSSA_REQUIRE(!doc.sections.empty(),
                 "line " + std::to_string(lineno) + ": key outside of any section");
    std::string key(detail::trim(line.substr(0, eq)));
    std::string value(detail::trim(line.substr(eq + 1)));
    TSSA_REQUIRE(detail::is_identifier(key), "line " + std::to_string(lineno) + ": bad key '" + key + "'");
    TSSA_REQUIRE(!value.empty(), "line " + std::to_string(lineno) + ": missing value for '" + key + "'");
    auto& sec = doc.sections.back();
    TSSA_REQUIRE(sec.find(key) == nullptr, "line " + std::to_string(lineno) + ": duplicate key '" +
                                               sec.name + "." + key + "'");
    sec.entries.push_back({key, value, lineno});
  }
  return doc;
}

/// Typed access to one section's entries, tracking which keys were consumed.
class SectionReader {
 public:
  SectionReader(const ConfigSection& s, std::string prefix)
      : section_(s), prefix_(std::move(prefix)) {}

  bool has(std::string_view key) const { return section_.find(key) != nullptr; }

  std::optional<std::string> string(std::string_view key) {
    const ConfigEntry* e = take(key);
    if (!e) return std::nullopt;
    const std::string& v = e->value;
    if (v.size() < 2 || v.front() != '"' || v.back() != '"')
      fail(*e, "expected a double-quoted string");
    return v.substr(1, v.size() - 2);
  }

  std::optional<double> real(std::string_view key) {
    const ConfigEntry* e = take(key);
    if (!e) return std::nullopt;
    return to_real(*e, e->value);
  }

  std::optional<std::uint64_t> integer(std::string_view key) {
    const ConfigEntry* e = take(key);
    if (!e) return std::nullopt;
    std::uint64_t v = 0;
    const char* b = e->value.data();
    const char* end = b + e->value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end) fail(*e, "expected a nonnegative integer");
    return v;
  }

  std::optional<bool> boolean(std::string_view key) {
    const ConfigEntry* e = take(key);
    if (!e) return std::nullopt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail(*e, "expected true or false");
  }

  std::optional<std::vector<double>> real_list(std::string_view key) {
    const ConfigEntry* e = take(key);
    if (!e) return std::nullopt;
    std::string_view v = e->value;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') fail(*e, "expected a list [a, b, ...]");
    std::vector<double> out;
    std::string_view body = detail::trim(v.substr(1, v.size() - 2));
    while (!body.empty()) {
      auto comma = body.find(',');
      std::string_view item = detail::trim(body.substr(0, comma));
      out.push_back(to_real(*e, item));
      if (comma == std::string_view::npos) break;
      body = detail::trim(body.substr(comma + 1));
    }
    return out;
  }

  /// Rejects any entry not consumed so far.
  void finish() const {
    for (const auto& e : section_.entries)
      if (!consumed_.count(e.key))
        throw ConfigError(detail::where(prefix_ + e.key, e.line) + ": unknown key");
  }

  [[noreturn]] void fail(const ConfigEntry& e, const std::string& what) const {
    throw ConfigError(detail::where(prefix_ + e.key, e.line) + ": " + what + ", got '" + e.value + "'");
  }

  [[noreturn]] void fail(std::string_view key, const std::string& what) const {
    const ConfigEntry* e = section_.find(key);
    if (e) fail(*e, what);
    throw ConfigError(prefix_ + std::string(key) + ": " + what);
  }

 private:
  const ConfigEntry* take(std::string_view key) {
    const ConfigEntry* e = section_.find(key);
    if (e) consumed_.insert(e->key);
    return e;
  }

  double to_real(const ConfigEntry& e, std::string_view s) const {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
      fail(e, "expected a finite real number");
    return v;
  }

  const ConfigSection& section_;
  std::string prefix_;
  std::set<std::string> consumed_;
};

namespace detail {

// Keys each policy kind accepts besides `kind`.
inline const std::set<std::string>& policy_keys(PolicyKind k) {
  static const std::map<PolicyKind, std::set<std::string>> keys = {
      {PolicyKind::ts_sa,
       {"warmup", "temperature", "step_size", "inner_iters", "inner_iters_mode", "batch_cap", "c1",
        "c2", "c3", "alpha", "gamma_mode", "window_reduction"}},
      {PolicyKind::ts_sgld, {"warmup", "temperature", "step_size", "sgld_batch"}},
      {PolicyKind::ts, {"warmup", "temperature", "prior_mean", "prior_variance"}},
      {PolicyKind::eps_ts, {"warmup", "temperature", "prior_mean", "prior_variance", "epsilon"}},
      {PolicyKind::ucb, {"warmup", "temperature"}},
      {PolicyKind::uniform, {"warmup"}},
  };
  return keys.at(k);
}

inline PolicyConfig read_policy(const ConfigSection& sec, const std::string& name) {
  const std::string prefix = sec.name + ".";
  SectionReader r(sec, prefix);
  std::optional<PolicyKind> kind;
  if (auto k = r.string("kind")) {
    kind = parse_policy_kind(*k);
    if (!kind) r.fail("kind", "must be one of ts_sa, ts_sgld, ts, eps_ts, ucb, uniform");
  } else {
    kind = parse_policy_kind(name);
    if (!kind)
      throw ConfigError("[" + sec.name + "]: missing 'kind' (section name is not a policy kind)");
  }
  PolicyConfig c = PolicyConfig::defaults(*kind);
  const auto& allowed = policy_keys(*kind);
  for (const auto& e : sec.entries) {
    if (e.key != "kind" && !allowed.count(e.key))
      throw ConfigError(detail::where(prefix + e.key, e.line) + ": unknown key for kind " +
                        to_string(*kind));
  }

  auto positive = [&](std::string_view key, double& field) {
    if (auto v = r.real(key)) {
      if (!(*v > 0.0)) r.fail(key, "must be > 0");
      field = *v;
    }
  };
  auto nonneg = [&](std::string_view key, double& field) {
    if (auto v = r.real(key)) {
      if (!(*v >= 0.0)) r.fail(key, "must be >= 0");
      field = *v;
    }
  };
  auto count = [&](std::string_view key, std::size_t& field) {
    if (auto v = r.integer(key)) {
      if (*v < 1) r.fail(key, "must be >= 1");
      field = static_cast<std::size_t>(*v);
    }
  };

  count("warmup", c.warmup);
  positive("temperature", c.langevin.temperature);
  positive("step_size", c.langevin.step_size);
  count("inner_iters", c.langevin.inner_iters);
  count("batch_cap", c.langevin.batch_cap);
  count("sgld_batch", c.sgld_batch);
  positive("c1", c.schedule.c1);
  nonneg("c2", c.schedule.c2);
  nonneg("c3", c.schedule.c3);
  if (auto v = r.real("alpha")) {
    if (!(*v >= 0.0 && *v <= 1.0)) r.fail("alpha", "must be in [0, 1]");
    c.schedule.alpha = *v;
  }
  if (auto v = r.real("epsilon")) {
    if (!(*v >= 0.0 && *v < 1.0)) r.fail("epsilon", "must be in [0, 1)");
    c.epsilon = *v;
  }
  if (auto v = r.real("prior_mean")) c.prior_mean = *v;
  positive("prior_variance", c.prior_variance);
  if (auto v = r.string("gamma_mode")) {
    if (*v == "schedule") c.gamma_mode = GammaMode::schedule;
    else if (*v == "inverse_horizon") c.gamma_mode = GammaMode::inverse_horizon;
    else r.fail("gamma_mode", "must be \"schedule\" or \"inverse_horizon\"");
  }
  if (auto v = r.string("inner_iters_mode")) {
    if (*v == "fixed") c.inner_iters_mode = InnerItersMode::fixed;
    else if (*v == "theory") c.inner_iters_mode = InnerItersMode::theory;
    else r.fail("inner_iters_mode", "must be \"fixed\" or \"theory\"");
  }
  if (auto v = r.string("window_reduction")) {
    if (*v == "sum") c.window_reduction = WindowReduction::sum;
    else if (*v == "mean") c.window_reduction = WindowReduction::mean;
    else r.fail("window_reduction", "must be \"sum\" or \"mean\"");
  }
  r.finish();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError("[" + sec.name + "]: " + e.what());
  }
  return c;
}

}  // namespace detail

/// Builds and validates an ExperimentSpec.
inline ExperimentSpec spec_from_document(const ConfigDocument& doc) {
  ExperimentSpec spec;
  static const std::string kPolicyPrefix = "policy.";
  for (const auto& s : doc.sections) {
    bool known = s.name == "environment" || s.name == "run" || s.name == "output" ||
                 (s.name.rfind(kPolicyPrefix, 0) == 0 && s.name.size() > kPolicyPrefix.size());
    if (!known) throw ConfigError(detail::where("[" + s.name + "]", s.line) + ": unknown section");
  }

  const ConfigSection* env = doc.find("environment");
  TSSA_REQUIRE(env != nullptr, "missing section [environment]");
  {
    SectionReader r(*env, "environment.");
    std::string kind = r.string("kind").value_or("sgr");
    if (kind == "sgr") spec.environment.kind = EnvironmentKind::sgr;
    else if (kind == "mgr") spec.environment.kind = EnvironmentKind::mgr;
    else if (kind == "custom") spec.environment.kind = EnvironmentKind::custom;
    else r.fail("kind", "must be \"sgr\", \"mgr\" or \"custom\"");
    if (auto v = r.real("sigma2")) {
      if (!(*v > 0.0)) r.fail("sigma2", "must be > 0");
      spec.environment.sigma2 = *v;
    }
    if (spec.environment.kind == EnvironmentKind::custom) {
      auto means = r.real_list("means");
      if (!means) throw ConfigError("environment.means: required for kind \"custom\"");
      if (means->size() < 2) r.fail("means", "must list at least 2 arms");
      spec.environment.means = *means;
      spec.environment.arms = means->size();
    } else {
      if (auto v = r.integer("arms")) {
        if (*v < 2) r.fail("arms", "must be >= 2");
        spec.environment.arms = static_cast<std::size_t>(*v);
      }
      if (auto v = r.real("gap")) {
        if (!(*v > 0.0)) r.fail("gap", "must be > 0");
        spec.environment.gap = *v;
      }
      if (auto v = r.real("mu1")) spec.environment.mu1 = *v;
    }
    r.finish();
  }

  for (const auto& s : doc.sections) {
    if (s.name.rfind(kPolicyPrefix, 0) != 0) continue;
    std::string name = s.name.substr(kPolicyPrefix.size());
    TSSA_REQUIRE(detail::is_identifier(name), "[" + s.name + "]: policy names use [A-Za-z0-9_-]");
    for (const auto& p : spec.policies)
      TSSA_REQUIRE(p.name != name, "[" + s.name + "]: duplicate policy name '" + name + "'");
    spec.policies.push_back({name, detail::read_policy(s, name)});
  }
  TSSA_REQUIRE(!spec.policies.empty(), "at least one [policy.<name>] section is required");

  const ConfigSection* run = doc.find("run");
  TSSA_REQUIRE(run != nullptr, "missing section [run]");
  {
    SectionReader r(*run, "run.");
    if (auto v = r.integer("horizon")) {
      if (*v < 1) r.fail("horizon", "must be >= 1");
      spec.horizon = static_cast<std::size_t>(*v);
    }
    if (auto v = r.integer("trials")) {
      if (*v < 1) r.fail("trials", "must be >= 1");
      spec.trials = static_cast<std::size_t>(*v);
    }
    if (auto v = r.integer("base_seed")) spec.base_seed = *v;
    if (auto v = r.integer("record_stride")) {
      if (*v < 1) r.fail("record_stride", "must be >= 1");
      spec.record_stride = static_cast<std::size_t>(*v);
    }
    if (auto v = r.boolean("crn")) spec.crn = *v;
    if (spec.horizon < spec.environment.num_arms())
      r.fail("horizon", "must be >= the number of arms");
    r.finish();
  }

  if (const ConfigSection* out = doc.find("output")) {
    SectionReader r(*out, "output.");
    if (auto v = r.string("directory")) spec.output.directory = *v;
    if (auto v = r.string("csv")) spec.output.csv = *v;
    r.finish();
  }

  spec.validate();
  return spec;
}

inline ExperimentSpec parse_config_text(std::string_view text) {
  return spec_from_document(parse_document(text));
}

inline ConfigDocument read_document(const std::string& path) {
  std::ifstream in(path);
  TSSA_REQUIRE(in.good(), "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_document(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline ExperimentSpec parse_config(const std::string& path) {
  ConfigDocument doc = read_document(path);
  try {
    return spec_from_document(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_real(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

inline std::string quoted(const std::string& s) { return "\"" + s + "\""; }

/// Writes every field explicitly; parse_config_text(serialize_spec(s)) == s.
inline std::string serialize_spec(const ExperimentSpec& spec) {
  std::ostringstream os;
  const auto& env = spec.environment;
  os << "[environment]\n";
  os << "kind = " << quoted(to_string(env.kind)) << "\n";
  if (env.kind == EnvironmentKind::custom) {
    os << "means = [";
    for (std::size_t i = 0; i < env.means.size(); ++i)
      os << (i ? ", " : "") << format_real(env.means[i]);
    os << "]\n";
  } else {
    os << "arms = " << env.arms << "\n";
    os << "gap = " << format_real(env.gap) << "\n";
    os << "mu1 = " << format_real(env.mu1) << "\n";
  }
  os << "sigma2 = " << format_real(env.sigma2) << "\n";

  for (const auto& np : spec.policies) {
    const PolicyConfig& c = np.config;
    const auto& keys = detail::policy_keys(c.kind);
    auto emit = [&](const std::string& key, const std::string& value) {
      if (keys.count(key)) os << key << " = " << value << "\n";
    };
    os << "\n[policy." << np.name << "]\n";
    os << "kind = " << quoted(to_string(c.kind)) << "\n";
    emit("warmup", std::to_string(c.warmup));
    emit("temperature", format_real(c.langevin.temperature));
    emit("step_size", format_real(c.langevin.step_size));
    emit("inner_iters", std::to_string(c.langevin.inner_iters));
    emit("inner_iters_mode", quoted(c.inner_iters_mode == InnerItersMode::fixed ? "fixed" : "theory"));
    emit("batch_cap", std::to_string(c.langevin.batch_cap));
    emit("c1", format_real(c.schedule.c1));
    emit("c2", format_real(c.schedule.c2));
    emit("c3", format_real(c.schedule.c3));
    emit("alpha", format_real(c.schedule.alpha));
    emit("gamma_mode",
         quoted(c.gamma_mode == GammaMode::schedule ? "schedule" : "inverse_horizon"));
    emit("window_reduction", quoted(c.window_reduction == WindowReduction::sum ? "sum" : "mean"));
    emit("sgld_batch", std::to_string(c.sgld_batch));
    emit("prior_mean", format_real(c.prior_mean));
    emit("prior_variance", format_real(c.prior_variance));
    emit("epsilon", format_real(c.epsilon));
  }

  os << "\n[run]\n";
  os << "horizon = " << spec.horizon << "\n";
  os << "trials = " << spec.trials << "\n";
  os << "base_seed = " << spec.base_seed << "\n";
  os << "record_stride = " << spec.record_stride << "\n";
  os << "crn = " << (spec.crn ? "true" : "false") << "\n";

  os << "\n[output]\n";
  os << "directory = " << quoted(spec.output.directory) << "\n";
  os << "csv = " << quoted(spec.output.csv) << "\n";
  return os.str();
}

}  // namespace tssa
