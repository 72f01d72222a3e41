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

#include <cstdint>
#include <utility>
#include <vector>

namespace udsim {

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);
double median(std::vector<double> xs);
double quantile(std::vector<double> xs, double q);

/// Least-squares slope of log(y) against log(x); xs and ys must be positive.
double loglog_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys);

/// Bootstrap confidence interval for median(b) - median(a).
std::pair<double, double> bootstrap_median_diff_ci(
    const std::vector<double>& a, const std::vector<double>& b,
    double confidence, int resamples, std::uint64_t seed);

}  // namespace udsim
