// Copyright 2026 The shufdp Authors
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace shufdp {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seeded random stream.  All library randomness flows through instances of
// this class; the library never reads ambient entropy.  Draws are fully
// determined by the seed, independent of platform or standard library
// (std::uniform_int_distribution is deliberately avoided).
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, bound) by rejection sampling.
  uint64_t below(uint64_t bound) {
    if (bound == 0) return 0;
    uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      uint64_t r = gen_();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Child stream whose seed is a deterministic function of (seed, index).
  Rng derive(uint64_t index) const {
    return Rng(splitmix64(seed_ ^ splitmix64(index + 0x5851F42D4C957F2DULL)));
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  // The permutation applied by shuffle() on a vector of this size, as a
  // mapping new_index -> old_index.
  std::vector<size_t> permutation(size_t size) {
    std::vector<size_t> perm(size);
    for (size_t i = 0; i < size; ++i) perm[i] = i;
    shuffle(perm);
    return perm;
  }

 private:
  uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace shufdp
