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

#ifndef ISACDT_SIM_RANDOM_H_
#define ISACDT_SIM_RANDOM_H_

#include <cstdint>
#include <random>

namespace isacdt::sim {

// SplitMix64 finalizer:
//   z = x + 0x9e3779b97f4a7c15
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   return z ^ (z >> 31)
// All arithmetic is modulo 2^64.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of trial `trial_index` under root seed `root`: Mix64(root ^ index).
constexpr std::uint64_t TrialSeed(std::uint64_t root, std::uint64_t trial_index) {
  return Mix64(root ^ trial_index);
}

// Independent sub-stream of a trial, keyed by a small integer tag.
constexpr std::uint64_t StreamSeed(std::uint64_t trial_seed, std::uint64_t tag) {
  return Mix64(trial_seed ^ Mix64(tag));
}

// Portable random stream: the engine is std::mt19937_64 (bit-exact by the
// standard) and every transform below is written out here, so draws match
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n) by rejection; n > 0.
  std::uint64_t UniformInt(std::uint64_t n);

  // Standard normal via the Marsaglia polar method.
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace isacdt::sim

#endif  // ISACDT_SIM_RANDOM_H_
