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


#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tssa/random.hpp"

namespace tssa {
namespace {

std::vector<double> first_normals(RandomStream s, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(s.normal());
  return v;
}

TEST(RandomStream, SameTripleSameVariates) {
  auto a = first_normals(provision_stream(7, "ts_sa", 3), 100);
  auto b = first_normals(provision_stream(7, "ts_sa", 3), 100);
  EXPECT_EQ(a, b);
}

TEST(RandomStream, DistinctTriplesDifferEarly) {
  std::set<std::vector<double>> prefixes;
  int count = 0;
  for (std::uint64_t seed : {0ULL, 1ULL}) {
    for (const char* name : {"ts_sa", "ts_sgld", "ts", "ucb", "ts_sa#environment"}) {
      for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        prefixes.insert(first_normals(provision_stream(seed, name, trial), 10));
        ++count;
      }
    }
  }
  EXPECT_EQ(count, 10000);
  EXPECT_EQ(prefixes.size(), 10000u);
}

TEST(RandomStream, DeriveSeedIsKeyedOnEveryPart) {
  std::uint64_t s = derive_seed(1, "a", 0);
  EXPECT_NE(s, derive_seed(2, "a", 0));
  EXPECT_NE(s, derive_seed(1, "b", 0));
  EXPECT_NE(s, derive_seed(1, "a", 1));
  EXPECT_EQ(s, derive_seed(1, "a", 0));
}

TEST(RandomStream, UniformInHalfOpenUnitInterval) {
  RandomStream s(11);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double u = s.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LE(hi, 1.0);
}

TEST(RandomStream, NormalMoments) {
  RandomStream s(5);
  const int n = 400000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = s.normal();
    sum += z;
    sq += z * z;
  }
  double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.01);
}

TEST(RandomStream, BoxMullerPairIsCached) {
  RandomStream a(9), b(9);
  double u1 = b.uniform(), u2 = b.uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  EXPECT_EQ(a.normal(), r * std::cos(angle));
  EXPECT_EQ(a.normal(), r * std::sin(angle));
}

TEST(RandomStream, IndexCoversRange) {
  RandomStream s(3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) ++hits[s.index(7)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
  EXPECT_THROW(s.index(0), LogicError);
}

TEST(RandomStream, SaveRestoreMidStream) {
  RandomStream s = provision_stream(42, "ts_sa", 0);
  for (int i = 0; i < 5; ++i) s.normal();  // leaves a cached partner
  std::string state = s.save();
  RandomStream r = RandomStream::restore(state);
  EXPECT_EQ(r, s);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(r.normal(), s.normal());

  s.normal();  // consumes the partner
  RandomStream r2 = RandomStream::restore(s.save());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(r2.uniform(), s.uniform());
}

TEST(RandomStream, RestoreRejectsGarbage) {
  EXPECT_THROW(RandomStream::restore("not a state"), ConfigError);
}

}  // namespace
}  // namespace tssa
