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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tssa/errors.hpp"
#include "tssa/harness.hpp"

namespace tssa {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One column pair per aggregate.
struct CsvColumn {
  std::string name;
  const AggregateTrace* trace;
};

inline std::string format_sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// round,<name>_mean,<name>_stderr,... with one row per recorded round.
inline std::string format_csv(const std::vector<CsvColumn>& columns) {
  TSSA_ASSERT(!columns.empty(), "format_csv: no columns");
  const auto& rounds = columns.front().trace->rounds;
  for (const auto& c : columns)
    TSSA_ASSERT(c.trace->rounds == rounds, "format_csv: '" + c.name + "' has a different round grid");
  std::string out = "round";
  for (const auto& c : columns) out += "," + c.name + "_mean," + c.name + "_stderr";
  out += "\n";
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    out += std::to_string(rounds[r]);
    for (const auto& c : columns)
      out += "," + format_sig6(c.trace->mean[r]) + "," + format_sig6(c.trace->stderr_[r]);
    out += "\n";
  }
  return out;
}

inline std::vector<CsvColumn> csv_columns(const std::vector<PolicyResult>& results) {
  std::vector<CsvColumn> cols;
  for (const auto& r : results) cols.push_back({r.name, &r.aggregate});
  return cols;
}

/// Overwrites `path`, creating parent directories.
inline void write_csv(const std::vector<CsvColumn>& columns, const std::filesystem::path& path) {
  std::string text = format_csv(columns);
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
}

inline void write_csv(const std::vector<PolicyResult>& results, const std::filesystem::path& path) {
  write_csv(csv_columns(results), path);
}

/// Expands {env}, {arms}, {gap}, {seed} in the output file pattern.
inline std::filesystem::path output_path(const ExperimentSpec& spec) {
  std::string name = spec.output.csv;
  auto replace = [&](const std::string& key, const std::string& value) {
    for (auto pos = name.find(key); pos != std::string::npos; pos = name.find(key, pos + value.size()))
      name.replace(pos, key.size(), value);
  };
  replace("{env}", to_string(spec.environment.kind));
  replace("{arms}", std::to_string(spec.environment.num_arms()));
  replace("{gap}", format_sig6(spec.environment.gap));
  replace("{seed}", std::to_string(spec.base_seed));
  return std::filesystem::path(spec.output.directory) / name;
}

}  // namespace tssa
