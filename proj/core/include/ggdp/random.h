//
// Copyright 2026 The ggdp Authors
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
//

#ifndef GGDP_RANDOM_H_
#define GGDP_RANDOM_H_

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace ggdp {

// The library's single random source type. Every stochastic operation takes
// one by reference; instances are never shared across threads.
using Rng = std::mt19937_64;

// Default seed for tools and tests when none is supplied.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

// SplitMix64 finalizer.
constexpr std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a list of tags
// (chunk index, probe number, ...). Pure function of its inputs.
inline std::uint64_t DeriveSeed(std::uint64_t base,
                                std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = MixBits(base);
  for (std::uint64_t t : tags) h = MixBits(h ^ MixBits(t + 0x632be59bd9b4e019ULL));
  return h;
}

// Seed tag for a real-valued parameter (hashes the bit pattern).
inline std::uint64_t RealTag(double value) {
  return std::bit_cast<std::uint64_t>(value);
}

inline Rng MakeRng(std::uint64_t base,
                   std::initializer_list<std::uint64_t> tags = {}) {
  return Rng(DeriveSeed(base, tags));
}

}  // namespace ggdp

#endif  // GGDP_RANDOM_H_
