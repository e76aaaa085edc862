/*
 * Copyright 2026 The isacdt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "isacdt/sim/random.h"

#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"

namespace isacdt::sim {
namespace {

TEST(Mix64Test, KnownValues) {
  // First outputs of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(Mix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(Mix64(0x9e3779b97f4a7c15ULL), 0x6e789e6aa1b965f4ULL);
}

TEST(Mix64Test, TrialSeedsDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t root : {0ULL, 1ULL << 20, 42ULL << 40}) {
    for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(TrialSeed(root, t));
  }
  EXPECT_EQ(seen.size(), 3000u);
  EXPECT_NE(StreamSeed(7, 0), StreamSeed(7, 1));
  EXPECT_EQ(StreamSeed(7, 1), Mix64(7 ^ Mix64(1)));
}

TEST(RngTest, EngineIsStandardMersenneTwister) {
  // The standard fixes the 10000th output of a default-seeded mt19937_64.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.NextU64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.Uniform(), b.Uniform());
    EXPECT_EQ(a.Normal(), b.Normal());
    EXPECT_EQ(a.UniformInt(17), b.UniformInt(17));
  }
}

TEST(RngTest, UniformMoments) {
  Rng rng(1);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
}

TEST(RngTest, NormalMoments) {
  Rng rng(2);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  int within_one = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    sum += z;
    sq += z * z;
    if (std::abs(z) < 1.0) ++within_one;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.015);
  EXPECT_NEAR(static_cast<double>(within_one) / n, std::erf(1.0 / std::sqrt(2.0)),
              0.005);
}

TEST(RngTest, UniformIntCoversRange) {
  Rng rng(3);
  std::vector<int> counts(8, 0);
  for (int i = 0; i < 80000; ++i) ++counts[rng.UniformInt(8)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_EQ(rng.UniformInt(1), 0u);
}

}  // namespace
}  // namespace isacdt::sim
