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
#include <limits>
#include <string>
#include <vector>

#include "udsim/circuit.hpp"
#include "udsim/types.hpp"

namespace udsim {

enum class ExperimentKind { kAnalog, kCircuit };
enum class Method { kUnmitigated, kDualRail, kUdsAveraged, kPec };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kAnalog;
  int n_physical = 6;
  int n_logical = 0;  // 0: derived as n_physical / 2
  int degree_k = 0;   // 0: derived as n_physical / 2
  std::vector<double> time_grid;  // filled with the kind's default if empty
  int n_instances = 100;
  std::array<double, 2> j_range{-1.0, 1.0};
  std::array<double, 2> h_range{-1.0, 1.0};
  double gamma_mean = 1e-2;
  double gamma_sd = 1e-3;
  std::uint64_t n_shots = 10'000'000;  // circuit only; 0 = exact expectations
  int n_trotter = 20;
  std::uint64_t seed = 0x5EEDED;
  std::vector<Method> methods;
  std::string observable = "z0";  // "z0" or "x0"
  double deviation_scale = 1.0;   // s multiplier on the rate deviations
  bool equal_rates = false;       // force gamma_i = gamma_mean
  int threads = 0;                // 0 = hardware concurrency
};

/// Fills defaults (time grid, methods) and checks the invariants.
ExperimentConfig normalize_config(ExperimentConfig config);

std::vector<double> default_time_grid(ExperimentKind kind);

struct Instance {
  TfimParams tfim;
  std::vector<double> rates;
};

/// Deterministic in (config.seed, index): J and h uniform on their ranges
/// with J symmetric, rates Gaussian with negative draws redrawn.
Instance generate_instance(const ExperimentConfig& config, int index);

struct BiasRow {
  int instance = 0;
  Method method = Method::kUnmitigated;
  double time = 0.0;
  double coherent_value = 0.0;
  double estimate = 0.0;  // rescaled / final estimate
  double abs_bias = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();
  double acceptance_rate = std::numeric_limits<double>::quiet_NaN();
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

struct BiasReport {
  ExperimentConfig config;
  std::vector<BiasRow> rows;
  std::vector<std::string> instance_errors;
  double observable_norm = 1.0;
  std::string shot_split = "equal-per-shift";
};

BiasReport run_analog_experiment(const ExperimentConfig& config);
BiasReport run_circuit_experiment(const ExperimentConfig& config);

/// Writes results.csv (one row per instance, method, time; fixed column
/// order; 17 significant digits) plus report.json embedding the config, and
/// optionally the per-figure aggregate CSVs (mean/max bias vs t for analog,
/// 30 log-spaced histogram bins over [1e-8, 1] for circuit). Returns the
/// written paths.
std::vector<std::string> emit_report(const BiasReport& report,
                                     const std::string& out_dir,
                                     bool with_aggregates = true);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

/// results.csv rendered as a string (used for byte-identity checks).
std::string render_results_csv(const BiasReport& report);

}  // namespace udsim
