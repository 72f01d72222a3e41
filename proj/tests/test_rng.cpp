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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "udsim/rng.hpp"

using namespace udsim;

namespace {

// exact binomial pmf via the multiplicative recurrence
std::vector<double> binomial_pmf(std::uint64_t n, double p) {
  std::vector<double> pmf(n + 1);
  pmf[0] = std::pow(1.0 - p, static_cast<double>(n));
  for (std::uint64_t k = 0; k + 1 <= n; ++k) {
    pmf[k + 1] = pmf[k] * (static_cast<double>(n - k) / static_cast<double>(k + 1)) *
                 (p / (1.0 - p));
  }
  return pmf;
}

}  // namespace

TEST_CASE("identical seeds replay identical streams") {
  CounterRng a(123, 7), b(123, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  CounterRng c(124, 7);
  bool any_diff = false;
  CounterRng a2(123, 7);
  for (int i = 0; i < 64; ++i) any_diff |= (a2.next_u64() != c.next_u64());
  CHECK(any_diff);
}

TEST_CASE("uniform doubles stay in range with sane moments") {
  CounterRng rng(99);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sq += u * u;
  }
  const double m = sum / n;
  const double var = sq / n - m * m;
  CHECK(std::abs(m - 0.5) < 0.005);
  CHECK(std::abs(var - 1.0 / 12.0) < 0.005);
}

TEST_CASE("gaussian moments") {
  CounterRng rng(7);
  const int n = 200000;
  double sum = 0.0, sq = 0.0, quad = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sq += g * g;
    quad += g * g * g * g;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
  CHECK(std::abs(quad / n - 3.0) < 0.1);  // kurtosis of the normal
}

TEST_CASE("binomial edge cases") {
  CounterRng rng(5);
  CHECK(rng.binomial(0, 0.3) == 0);
  CHECK(rng.binomial(100, 0.0) == 0);
  CHECK(rng.binomial(100, 1.0) == 100);
  CHECK_THROWS(rng.binomial(10, 1.5));
}

TEST_CASE("binomial matches the exact pmf (small n, inversion path)") {
  CounterRng rng(31);
  const std::uint64_t n = 12;
  const double p = 0.35;
  const int draws = 200000;
  std::vector<int> hist(n + 1, 0);
  for (int i = 0; i < draws; ++i) ++hist[rng.binomial(n, p)];
  const std::vector<double> pmf = binomial_pmf(n, p);
  double chi2 = 0.0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double expected = pmf[k] * draws;
    if (expected < 5.0) continue;
    chi2 += (hist[k] - expected) * (hist[k] - expected) / expected;
  }
  CHECK(chi2 < 40.0);  // ~13 dof; far beyond any reasonable quantile signals a bug
}

TEST_CASE("binomial matches the exact pmf (BTRS path)") {
  CounterRng rng(32);
  const std::uint64_t n = 400;
  const double p = 0.3;
  const int draws = 200000;
  std::map<std::uint64_t, int> hist;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const std::uint64_t k = rng.binomial(n, p);
    ++hist[k];
    sum += static_cast<double>(k);
    sq += static_cast<double>(k) * static_cast<double>(k);
  }
  const double m = sum / draws;
  const double var = sq / draws - m * m;
  CHECK(std::abs(m - n * p) < 0.5);            // sigma_mean ~ 0.02
  CHECK(std::abs(var - n * p * (1 - p)) < 2.5);  // ~3% relative
  const std::vector<double> pmf = binomial_pmf(n, p);
  double chi2 = 0.0;
  int dof = 0;
  for (const auto& [k, count] : hist) {
    const double expected = pmf[k] * draws;
    if (expected < 5.0) continue;
    chi2 += (count - expected) * (count - expected) / expected;
    ++dof;
  }
  CHECK(chi2 < dof + 6.0 * std::sqrt(2.0 * dof));
}

TEST_CASE("binomial large-count draws keep exact totals") {
  CounterRng rng(33);
  const std::uint64_t n = 10'000'000;
  const std::uint64_t k = rng.binomial(n, 0.7408);
  CHECK(k <= n);
  // 5-sigma window around the mean
  const double mean = 0.7408 * static_cast<double>(n);
  const double sd = std::sqrt(static_cast<double>(n) * 0.7408 * 0.2592);
  CHECK(std::abs(static_cast<double>(k) - mean) < 5.0 * sd);
}

TEST_CASE("multinomial counts are exhaustive and unbiased") {
  CounterRng rng(34);
  const std::vector<double> probs{0.1, 0.0, 0.4, 0.25, 0.25};
  const std::uint64_t n = 1'000'000;
  const auto counts = rng.multinomial(n, probs);
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  CHECK(total == n);
  CHECK(counts[1] == 0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == 0.0) continue;
    const double expected = probs[i] * static_cast<double>(n);
    const double sd = std::sqrt(expected * (1 - probs[i]));
    CHECK(std::abs(static_cast<double>(counts[i]) - expected) < 6.0 * sd);
  }
}

TEST_CASE("derive_seed separates streams") {
  const std::uint64_t a = derive_seed(42, 0);
  const std::uint64_t b = derive_seed(42, 1);
  const std::uint64_t c = derive_seed(43, 0);
  CHECK(a != b);
  CHECK(a != c);
  CHECK(derive_seed(42, 0) == a);  // stable
  CHECK(derive_seed(42, 0, 1) != a);
}
