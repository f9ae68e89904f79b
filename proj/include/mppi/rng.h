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

#ifndef KNOTMPPI_MPPI_RNG_H_
#define KNOTMPPI_MPPI_RNG_H_

#include <cmath>
#include <cstdint>

namespace mppi {

// Counter-derived random stream (splitmix64 core, Box-Muller Gaussians).
// Streams are keyed by (seed, iteration, sample) so every sample draws from
// its own generator and results do not depend on worker count or dispatch
// order. Self-contained so sequences are bit-identical across platforms,
// unlike std::normal_distribution.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : state_(seed) {}

  // independent stream for one planner sample
  static RandomStream ForSample(uint64_t seed, uint64_t iteration,
                                uint64_t sample) {
    uint64_t h = Mix(seed + 0x9e3779b97f4a7c15ULL);
    h = Mix(h ^ (iteration + 0xbf58476d1ce4e5b9ULL));
    h = Mix(h ^ (sample + 0x94d049bb133111ebULL));
    return RandomStream(h);
  }

  uint64_t NextU64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return Mix(state_);
  }

  // uniform in (0, 1]
  double NextUniform() {
    return static_cast<double>((NextU64() >> 11) + 1) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; second value of each pair is cached
  double NextGaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = NextUniform();
    double u2 = NextUniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * M_PI * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  // splitmix64 finalizer
  static uint64_t Mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mppi

#endif  // KNOTMPPI_MPPI_RNG_H_
