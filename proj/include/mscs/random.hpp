// Copyright 2026 The MSCS Authors
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

#ifndef MSCS_RANDOM_HPP_
#define MSCS_RANDOM_HPP_

#include <cstdint>
#include <limits>
#include <random>

namespace mscs {

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a root seed and a counter path,
// e.g. DeriveSeed(seed, iteration, draw). Streams never share state, so
// work split across threads draws the same numbers as a serial run.
constexpr std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t a,
                                   std::uint64_t b = 0) {
  return Mix64(Mix64(Mix64(root) ^ (a + 0x632be59bd9b4e019ULL)) ^
               (b + 0x85157af5ULL));
}

// Small counter-based generator (SplitMix64) for short per-draw streams.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Engine for data generation: one per (seed, run) pair.
inline std::mt19937_64 MakeEngine(std::uint64_t root, std::uint64_t a,
                                  std::uint64_t b = 0) {
  return std::mt19937_64(DeriveSeed(root, a, b));
}

}  // namespace mscs

#endif  // MSCS_RANDOM_HPP_
