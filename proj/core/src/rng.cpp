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

#include "udsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace udsim {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0,
                         std::uint32_t k1) {
  const std::uint64_t p0 = std::uint64_t{c[0]} * kPhiloxM0;
  const std::uint64_t p1 = std::uint64_t{c[2]} * kPhiloxM1;
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {}

std::array<std::uint32_t, 4> CounterRng::block(std::uint64_t counter) const {
  std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k0, k1);
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return c;
}

std::uint64_t CounterRng::next_u64() {
  if (buffered_ < 2) {
    buffer_ = block(counter_++);
    buffered_ = 4;
  }
  const std::uint32_t hi = buffer_[4 - buffered_];
  const std::uint32_t lo = buffer_[5 - buffered_];
  buffered_ -= 2;
  return (std::uint64_t{hi} << 32) | lo;
}

double CounterRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1p-53;
}

double CounterRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double CounterRng::gaussian() {
  if (has_spare_gaussian_) {
    has_spare_gaussian_ = false;
    return spare_gaussian_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_gaussian_ = r * std::sin(a);
  has_spare_gaussian_ = true;
  return r * std::cos(a);
}

namespace {

// CDF walk with the pmf recurrence; expected O(n p) work.
std::uint64_t binomial_inversion(CounterRng& rng, std::uint64_t n, double p) {
  const double q = 1.0 - p;
  double pmf = std::pow(q, static_cast<double>(n));
  if (pmf <= 0.0) {
    // n log q underflows; fall back on a normal-regime guard via BTRS caller
    pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
  }
  while (true) {
    double u = rng.next_double();
    double cdf = pmf;
    std::uint64_t k = 0;
    double cur = pmf;
    while (u > cdf && k < n) {
      cur *= (static_cast<double>(n - k) / static_cast<double>(k + 1)) *
             (p / q);
      cdf += cur;
      ++k;
    }
    if (u <= cdf || k >= n) return k;
    // numerical tail leakage; redraw
  }
}

// Hormann's transformed rejection (BTRS), exact for n*p >= 10, p <= 0.5.
std::uint64_t binomial_btrs(CounterRng& rng, std::uint64_t n, double p) {
  const double np = static_cast<double>(n) * p;
  const double q = 1.0 - p;
  const double spq = std::sqrt(np * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = np + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(p / q);
  const double m = std::floor((static_cast<double>(n) + 1) * p);
  const double h = std::lgamma(m + 1) +
                   std::lgamma(static_cast<double>(n) - m + 1);

  while (true) {
    const double u = rng.next_double() - 0.5;
    double v = rng.next_double();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + c);
    if (kf < 0 || kf > static_cast<double>(n)) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    v = std::log(v * alpha / (a / (us * us) + b));
    const double upper = h - std::lgamma(kf + 1) -
                         std::lgamma(static_cast<double>(n) - kf + 1) +
                         (kf - m) * lpq;
    if (v <= upper) return static_cast<std::uint64_t>(kf);
  }
}

}  // namespace

std::uint64_t CounterRng::binomial(std::uint64_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binomial: p outside [0, 1]");
  }
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);
  if (static_cast<double>(n) * p < 10.0) return binomial_inversion(*this, n, p);
  return binomial_btrs(*this, n, p);
}

std::vector<std::uint64_t> CounterRng::multinomial(
    std::uint64_t n, const std::vector<double>& probs) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  double total = 0.0;
  for (double p : probs) total += (p > 0.0 ? p : 0.0);
  if (total <= 0.0) {
    throw std::invalid_argument("multinomial: probabilities sum to zero");
  }
  double remaining_mass = total;
  std::uint64_t remaining = n;
  for (std::size_t i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
    const double p = probs[i] > 0.0 ? probs[i] : 0.0;
    if (p <= 0.0) continue;
    double cond = p / remaining_mass;
    if (cond > 1.0) cond = 1.0;
    const std::uint64_t draw = binomial(remaining, cond);
    counts[i] = draw;
    remaining -= draw;
    remaining_mass -= p;
    if (remaining_mass <= 0.0) break;
  }
  if (!probs.empty() && remaining > 0) {
    // everything left lands in the final positive-probability category
    for (std::size_t i = probs.size(); i-- > 0;) {
      if (probs[i] > 0.0) {
        counts[i] += remaining;
        break;
      }
    }
  }
  return counts;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt_a,
                          std::uint64_t salt_b) {
  std::uint64_t h = mix64(base ^ 0xA5A5A5A55A5A5A5AULL);
  h = mix64(h ^ mix64(salt_a));
  h = mix64(h ^ mix64(salt_b));
  return h;
}

}  // namespace udsim
