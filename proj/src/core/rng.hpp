// Copyright 2026 The Chronolapse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stateless hash-based draws. Used wherever a random value must be a pure
// function of its inputs (agent phases, per-frame exposure jitter).

#ifndef CHRONOLAPSE_SRC_CORE_RNG_HPP_
#define CHRONOLAPSE_SRC_CORE_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace chronolapse {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t HashCombine(std::uint64_t a, std::uint64_t b) {
  return SplitMix64(a ^ (SplitMix64(b) + 0x632be59bd9b4e019ULL));
}

// Uniform in [0, 1).
inline double UnitFromHash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = HashCombine(HashCombine(seed, a), b);
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

// Standard normal via Box-Muller on two hashed uniforms.
inline double NormalFromHash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  double u1 = UnitFromHash(seed, a, b * 2 + 1);
  double u2 = UnitFromHash(seed, a, b * 2 + 2);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace chronolapse

#endif  // CHRONOLAPSE_SRC_CORE_RNG_HPP_
