// Copyright 2026 The grindopt Authors. All Rights Reserved.
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
// =============================================================================

#ifndef GRINDOPT_RANDOM_HPP
#define GRINDOPT_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace grindopt {

/// Seeded generator shared by every stochastic step. Uniform draws are built
/// from raw engine bits so they do not depend on the standard library's
/// distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(engine_); }

 private:
  std::mt19937_64 engine_;
};

/// Deterministically combine a base seed with stream identifiers
/// (splitmix64 finalizer per component).
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> streams) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(base);
  for (auto s : streams) {
    h = mix(h ^ mix(s));
  }
  return h;
}

}  // namespace grindopt

#endif  // GRINDOPT_RANDOM_HPP
