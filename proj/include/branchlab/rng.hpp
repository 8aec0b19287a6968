// Copyright 2026 the BranchLab Authors
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

#ifndef BRANCHLAB_RNG_HPP_
#define BRANCHLAB_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace branchlab {

// Deterministic RNG. mt19937_64 output is pinned by the standard; the
// standard distributions are not, so all mappings are done by hand here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  // Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
      std::swap(v[i], v[static_cast<std::size_t>(uniform_int(0, i))]);
    }
  }

  // k distinct indices from {0..n-1}, ascending.
  std::vector<int> sample_indices(int k, int n);

 private:
  std::mt19937_64 gen_;
};

// Stable seed fan-out for per-instance streams (SplitMix64 mix).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

}  // namespace branchlab

#endif  // BRANCHLAB_RNG_HPP_
