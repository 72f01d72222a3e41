// Copyright 2026 The udsim authors
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

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace udsim {

/// Philox4x32-10 counter generator. Streams are addressed by (seed, stream):
/// identical addresses replay identical sequences on any platform, so shot
/// histograms are reproducible bit for bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double next_double();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller.
  double gaussian();
  /// Exact binomial draw; inversion for small n*p, BTRS rejection otherwise.
  std::uint64_t binomial(std::uint64_t n, double p);
  /// Multinomial counts by sequential conditional binomials. Probabilities
  /// are clipped at zero and renormalized.
  std::vector<std::uint64_t> multinomial(std::uint64_t n,
                                         const std::vector<double>& probs);

  std::uint64_t seed() const { return seed_; }

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;
  double spare_gaussian_ = 0.0;
  bool has_spare_gaussian_ = false;
};

/// Stable seed derivation for substreams (per instance, per method, ...).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt_a,
                          std::uint64_t salt_b = 0);

}  // namespace udsim
