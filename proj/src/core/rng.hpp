// Copyright 2026 The pinlf authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PINLF_CORE_RNG_HPP
#define PINLF_CORE_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace pinlf {

// SplitMix64 (Steele, Lea & Flood 2014). The <random> distributions are not
// pinned down by the standard, and seeded splits and factor initialization
// must reproduce bit-exactly across toolchains, so the whole chain from seed
// to value is spelled out here.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): top 53 bits scaled by 2^-53.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Draw in [0, n). Modulo mapping; the bias is immaterial for n << 2^64.
  std::uint64_t bounded(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Fisher-Yates driven by SplitMix64. This is the reference shuffle behind
// fold assignment; changing it changes every split.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.bounded(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace pinlf

#endif  // PINLF_CORE_RNG_HPP
