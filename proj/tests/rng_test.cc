// Copyright 2026 The knotmppi Authors
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

#include "mppi/rng.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "gtest/gtest.h"

namespace mppi {
namespace {

TEST(RandomStreamTest, SameKeySameSequence) {
  RandomStream a = RandomStream::ForSample(7, 3, 11);
  RandomStream b = RandomStream::ForSample(7, 3, 11);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.NextU64(), b.NextU64());
  }
}

TEST(RandomStreamTest, DifferentKeysDifferentSequences) {
  RandomStream base = RandomStream::ForSample(7, 3, 11);
  RandomStream seed = RandomStream::ForSample(8, 3, 11);
  RandomStream iter = RandomStream::ForSample(7, 4, 11);
  RandomStream sample = RandomStream::ForSample(7, 3, 12);
  const uint64_t first = base.NextU64();
  EXPECT_NE(first, seed.NextU64());
  EXPECT_NE(first, iter.NextU64());
  EXPECT_NE(first, sample.NextU64());
}

TEST(RandomStreamTest, UniformIsInHalfOpenUnitInterval) {
  RandomStream stream(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = stream.NextUniform();
    EXPECT_GT(u, 0.0);
    EXPECT_LE(u, 1.0);
  }
}

TEST(RandomStreamTest, GaussianMomentsMatchStandardNormal) {
  RandomStream stream(2024);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = stream.NextGaussian();
    ASSERT_TRUE(std::isfinite(g));
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  // standard error of the mean is ~1/sqrt(n) ~ 0.0022
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(RandomStreamTest, GaussianTailProbabilitiesAreSane) {
  RandomStream stream(99);
  const int n = 100000;
  int beyond_two = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(stream.NextGaussian()) > 2.0) ++beyond_two;
  }
  // P(|Z| > 2) = 0.0455
  EXPECT_NEAR(static_cast<double>(beyond_two) / n, 0.0455, 0.005);
}

// the sequence is part of the library contract: values are pinned so any
// platform or refactor that changes the stream is caught
TEST(RandomStreamTest, SequenceIsPinned) {
  RandomStream stream = RandomStream::ForSample(0, 0, 0);
  const uint64_t v0 = stream.NextU64();
  RandomStream again = RandomStream::ForSample(0, 0, 0);
  EXPECT_EQ(v0, again.NextU64());

  // pin a full uniform draw against an independent reimplementation of
  // splitmix64 chained the same way
  auto mix = [](uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  uint64_t h = mix(uint64_t{5} + 0x9e3779b97f4a7c15ULL);
  h = mix(h ^ (uint64_t{2} + 0xbf58476d1ce4e5b9ULL));
  h = mix(h ^ (uint64_t{9} + 0x94d049bb133111ebULL));
  uint64_t state = h + 0x9e3779b97f4a7c15ULL;
  const uint64_t expected = mix(state);
  RandomStream keyed = RandomStream::ForSample(5, 2, 9);
  EXPECT_EQ(keyed.NextU64(), expected);
}

}  // namespace
}  // namespace mppi
