// Copyright 2026 The vqe-lab Authors
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
#include <span>
#include <vector>

namespace vqelab {

/// splitmix64 output function (Steele, Lea, Flood 2014). Used to turn
/// (master seed, trial index) into well-separated per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-trial seed: two splitmix64 rounds over (master, index) so that
/// neighbouring indices share no low-bit structure.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 1));
}

/// Seeded random stream owned by one trial. All draws used by the artifact go
/// through this class so that a (config, master seed) pair fully determines a
/// run. Uniform doubles are mapped from raw 64-bit output directly; the
/// engine-dependent std distributions are used only for binomial draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Fair draw from {-1, +1}.
  double sign() { return (gen_() & 1ULL) ? 1.0 : -1.0; }

  std::uint64_t binomial(std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    std::binomial_distribution<std::uint64_t> dist(n, p);
    return dist(gen_);
  }

  /// Exact multinomial draw with the conditional-binomial decomposition,
  /// outcome by outcome in index order. Sum of counts equals `shots`.
  std::vector<std::uint64_t> multinomial(std::uint64_t shots, std::span<const double> probs) {
    std::vector<std::uint64_t> counts(probs.size(), 0);
    std::uint64_t remaining = shots;
    double mass_left = 1.0;
    for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
      const double p = mass_left > 0.0 ? std::min(1.0, std::max(0.0, probs[i] / mass_left)) : 0.0;
      counts[i] = binomial(remaining, p);
      remaining -= counts[i];
      mass_left -= probs[i];
    }
    if (!counts.empty()) counts.back() += remaining;
    return counts;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace vqelab
