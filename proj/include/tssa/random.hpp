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
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "tssa/errors.hpp"

namespace tssa {

/// SplitMix64 finalizer. Used to derive per-trial seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for the (base_seed, name, index) triple.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::string_view name,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(mix64(base_seed) ^ fnv1a(name)) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// A reproducible stream of uniform and Gaussian variates.
///
/// The bit source is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Everything layered on top is written out here rather than
/// delegated to <random> distributions, whose algorithms are unspecified:
///
///   uniform()  = ((x >> 11) + 1) * 2^-53, a double in (0, 1]
///   normal()   = Box-Muller on two uniforms u1, u2:
///                r = sqrt(-2 ln u1); returns r cos(2 pi u2), caches r sin(2 pi u2)
///   index(n)   = high 64 bits of x * n
///
/// The cached Box-Muller partner is part of the stream state and survives
/// save()/restore().
class RandomStream {
 public:
  RandomStream() : RandomStream(0) {}
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  double normal() {
    if (spare_) {
      double z = *spare_;
      spare_.reset();
      return z;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    return r * std::cos(angle);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform() <= p; }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    if (n == 0) throw LogicError("RandomStream::index: empty range");
    auto prod = static_cast<unsigned __int128>(engine_()) * n;
    return static_cast<std::size_t>(prod >> 64);
  }

  std::string save() const {
    std::ostringstream os;
    os << engine_ << ' ';
    if (spare_) {
      os << "1 " << std::hexfloat << *spare_;
    } else {
      os << "0";
    }
    return os.str();
  }

  static RandomStream restore(const std::string& state) {
    RandomStream s;
    std::istringstream is(state);
    int has_spare = 0;
    is >> s.engine_ >> has_spare;
    if (has_spare) {
      // operator>> does not parse hexfloat portably.
      std::string tok;
      is >> tok;
      s.spare_ = std::strtod(tok.c_str(), nullptr);
    }
    if (is.fail()) throw ConfigError("RandomStream::restore: malformed state");
    return s;
  }

  friend bool operator==(const RandomStream& a, const RandomStream& b) {
    return a.engine_ == b.engine_ && a.spare_ == b.spare_;
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

inline RandomStream provision_stream(std::uint64_t base_seed, std::string_view name,
                                     std::uint64_t trial_index) {
  return RandomStream(derive_seed(base_seed, name, trial_index));
}

}  // namespace tssa
