// Copyright 2026 The Seedrelay Authors
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

#ifndef SEEDRELAY_RANDOM_H_
#define SEEDRELAY_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace seedrelay {

// Seeded random stream. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; every distribution is implemented here rather than
// taken from <random> so that draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Independent stream keyed by (seed, tag, a, b). Used to give every
  // (route, hop) pair its own fading stream regardless of evaluation order.
  static Rng Derive(uint64_t seed, std::string_view tag, uint64_t a = 0,
                    uint64_t b = 0);

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform01();

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform integer on [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

  // Exponential with unit mean (Rayleigh power fading draw).
  double Exponential();

  // Standard normal via Box-Muller; the spare value is cached.
  double Normal();

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(UniformInt(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n) in selection order. Requires k <= n.
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                    std::size_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t x);

}  // namespace seedrelay

#endif  // SEEDRELAY_RANDOM_H_
