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

#include "udsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include <Eigen/Eigenvalues>

#include <nlohmann/json.hpp>

#include "udsim/mitigation.hpp"
#include "udsim/noise.hpp"
#include "udsim/operators.hpp"
#include "udsim/rng.hpp"

namespace udsim {

namespace {

using OrderedJson = nlohmann::ordered_json;

constexpr std::uint64_t kSeedTagUnmitigated = 0x11;
constexpr std::uint64_t kSeedTagDualRail = 0x22;
constexpr std::uint64_t kSeedTagUds = 0x3300;  // + shift index
constexpr std::uint64_t kSeedTagPec = 0x44;
constexpr double kSegmentTol = 1e-11;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::kUnmitigated: return "unmitigated";
    case Method::kDualRail: return "dualrail";
    case Method::kUdsAveraged: return "uds-averaged";
    case Method::kPec: return "pec";
  }
  throw DomainError("method_name: unknown method");
}

Method method_from_name(const std::string& name) {
  if (name == "unmitigated") return Method::kUnmitigated;
  if (name == "dualrail") return Method::kDualRail;
  if (name == "uds-averaged") return Method::kUdsAveraged;
  if (name == "pec") return Method::kPec;
  throw DomainError("unknown method '" + name + "'");
}

std::vector<double> default_time_grid(ExperimentKind kind) {
  if (kind == ExperimentKind::kCircuit) return {1.0};
  std::vector<double> grid{0.0};
  const int points = 40;
  for (int i = 0; i < points; ++i) {
    const double e =
        -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(points - 1);
    grid.push_back(std::pow(10.0, e));
  }
  return grid;
}

ExperimentConfig normalize_config(ExperimentConfig config) {
  if (config.n_physical <= 0 || config.n_physical % 2 != 0) {
    throw DomainError("config: n_physical must be a positive even number");
  }
  if (config.n_logical == 0) config.n_logical = config.n_physical / 2;
  if (config.n_physical != 2 * config.n_logical) {
    throw DomainError("config: n_physical must equal 2 * n_logical");
  }
  if (config.degree_k == 0) config.degree_k = config.n_physical / 2;
  if (config.time_grid.empty()) config.time_grid = default_time_grid(config.kind);
  for (std::size_t i = 1; i < config.time_grid.size(); ++i) {
    if (!(config.time_grid[i] > config.time_grid[i - 1])) {
      throw DomainError("config: time_grid must be strictly increasing");
    }
  }
  if (config.methods.empty()) {
    config.methods = {Method::kUnmitigated, Method::kDualRail,
                      Method::kUdsAveraged};
  }
  for (Method m : config.methods) {
    if (m == Method::kPec && config.kind != ExperimentKind::kCircuit) {
      throw DomainError("config: the pec method is circuit-only");
    }
  }
  if (config.observable != "z0" && config.observable != "x0") {
    throw DomainError("config: observable must be z0 or x0");
  }
  if (config.n_instances <= 0) throw DomainError("config: n_instances");
  if (config.kind == ExperimentKind::kCircuit && config.n_trotter < 1) {
    throw DomainError("config: n_trotter must be >= 1");
  }
  return config;
}

Instance generate_instance(const ExperimentConfig& config, int index) {
  CounterRng rng(derive_seed(config.seed, static_cast<std::uint64_t>(index)),
                 0x1157);
  Instance inst;
  const int nl = config.n_logical;
  inst.tfim.j_coupling = Eigen::MatrixXd::Zero(nl, nl);
  for (int i = 0; i < nl; ++i) {
    for (int j = i + 1; j < nl; ++j) {
      const double v = rng.uniform(config.j_range[0], config.j_range[1]);
      inst.tfim.j_coupling(i, j) = v;
      inst.tfim.j_coupling(j, i) = v;
    }
  }
  inst.tfim.h_field = Eigen::VectorXd::Zero(nl);
  for (int i = 0; i < nl; ++i) {
    inst.tfim.h_field(i) = rng.uniform(config.h_range[0], config.h_range[1]);
  }
  inst.rates.reserve(static_cast<std::size_t>(config.n_physical));
  for (int q = 0; q < config.n_physical; ++q) {
    double rate = -1.0;
    while (rate < 0.0) {
      rate = config.gamma_mean + config.gamma_sd * rng.gaussian();
    }
    inst.rates.push_back(rate);
  }
  return inst;
}

namespace {

std::vector<double> scaled_rates(const ExperimentConfig& config,
                                 const Instance& inst) {
  if (config.equal_rates) {
    return std::vector<double>(static_cast<std::size_t>(config.n_physical),
                               config.gamma_mean);
  }
  const RateSplit split = compute_rate_split(inst.rates);
  std::vector<double> rates(inst.rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    rates[i] = split.mean_rate + config.deviation_scale * split.deviations[i];
  }
  return rates;
}

struct SharedSetup {
  SubspaceEncoding enc;
  ComplexMatrix observable;     // projected logical observable
  ComplexMatrix raw_observable; // unprojected logical observable
  ComplexMatrix rho0;
  ComplexVector psi0;
  double obs_norm = 1.0;
  double c_scalar = 0.0;  // from the uniform-rate reference certificate
  std::vector<Eigen::Index> perm;
};

SharedSetup build_setup(const ExperimentConfig& config) {
  SharedSetup setup;
  setup.enc = build_dualrail_subspace(config.n_physical);
  setup.raw_observable = config.observable == "z0"
                             ? logical_z(setup.enc, 0)
                             : logical_x(setup.enc, 0);
  setup.observable = project_into(setup.enc, setup.raw_observable);
  setup.obs_norm = operator_norm(setup.observable);
  setup.perm = cyclic_shift_permutation(setup.enc.dims);

  // |0_L>^{(x) n_L} = |0101...>
  std::vector<int> zero_logical(static_cast<std::size_t>(config.n_physical));
  for (int q = 0; q < config.n_physical; ++q) zero_logical[q] = q % 2;
  const Eigen::Index idx0 = fock_index(zero_logical, setup.enc.dims);
  const Eigen::Index dim = setup.enc.total_dim();
  setup.psi0 = ComplexVector::Zero(dim);
  setup.psi0(idx0) = 1.0;
  setup.rho0 = ComplexMatrix::Zero(dim, dim);
  setup.rho0(idx0, idx0) = 1.0;

  // the certificate only involves the dissipator family; H plays no role
  const LindbladModel reference = relaxation_model(
      config.n_physical,
      std::vector<double>(static_cast<std::size_t>(config.n_physical),
                          config.gamma_mean),
      ComplexMatrix::Zero(dim, dim));
  const UdsCertificate cert = verify_uds(reference, setup.enc);
  if (!cert.holds) {
    throw CertificationError(
        "experiment: the uniform-rate reference model fails certification");
  }
  setup.c_scalar = cert.c_scalar;
  return setup;
}

void run_parallel(int n_items, int threads, const std::function<void(int)>& fn) {
  int n_workers = threads > 0
                      ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  n_workers = std::min(n_workers, n_items);
  if (n_workers <= 1) {
    for (int i = 0; i < n_items; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_workers));
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n_items) break;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<double> coherent_reference(const ComplexMatrix& hamiltonian,
                                       const ComplexVector& psi0,
                                       const ComplexMatrix& observable,
                                       const std::vector<double>& times) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hamiltonian);
  const ComplexVector coeffs = es.eigenvectors().adjoint() * psi0;
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    ComplexVector phased = coeffs;
    for (Eigen::Index a = 0; a < phased.size(); ++a) {
      phased(a) *= std::exp(Complex(0, -es.eigenvalues()(a) * t));
    }
    const ComplexVector psi = es.eigenvectors() * phased;
    out.push_back((psi.adjoint() * observable * psi)(0, 0).real());
  }
  return out;
}

bool has_method(const ExperimentConfig& config, Method m) {
  for (Method x : config.methods) {
    if (x == m) return true;
  }
  return false;
}

std::vector<BiasRow> analog_instance_rows(const ExperimentConfig& config,
                                          const SharedSetup& setup,
                                          int index) {
  const Instance inst = generate_instance(config, index);
  const std::vector<double> rates = scaled_rates(config, inst);
  const RateSplit split = compute_rate_split(rates);
  const double gamma_eff = setup.c_scalar * split.mean_rate;
  const double lambda = split.max_abs_deviation;

  const ComplexMatrix h = build_tfim_hamiltonian(inst.tfim, setup.enc, 0);
  const LindbladModel model =
      relaxation_model(config.n_physical, rates, h);

  const std::vector<double>& times = config.time_grid;
  const std::vector<double> coherent =
      coherent_reference(h, setup.psi0, setup.observable, times);

  const bool want_uds = has_method(config, Method::kUdsAveraged);
  const bool want_base = has_method(config, Method::kUnmitigated) ||
                         has_method(config, Method::kDualRail);

  ShiftEnsemble ensemble;
  if (want_uds) {
    ensemble = make_shift_ensemble(model, setup.rho0, setup.observable);
  } else if (want_base) {
    ensemble.order = 1;
    ensemble.frames.push_back(
        ShiftFrame{0, model.hamiltonian, setup.rho0, setup.observable});
  }

  const std::size_t n_times = times.size();
  std::vector<std::vector<double>> shift_values(
      ensemble.frames.size(), std::vector<double>(n_times, 0.0));
  std::vector<double> raw_z(n_times, 0.0), acceptance(n_times, 0.0);

  for (std::size_t j = 0; j < ensemble.frames.size(); ++j) {
    const ShiftFrame& frame = ensemble.frames[j];
    LindbladModel shifted = model;
    shifted.hamiltonian = frame.hamiltonian;
    const LindbladAction action(shifted);
    ComplexVector v = vectorize(frame.rho0);
    double prev = 0.0;
    for (std::size_t ti = 0; ti < n_times; ++ti) {
      const double dt = times[ti] - prev;
      if (dt > 0.0) v = expm_action(action, v, dt, kSegmentTol);
      prev = times[ti];
      shift_values[j][ti] = expectation(frame.observable, v).real();
      if (j == 0) {
        raw_z[ti] = expectation(setup.raw_observable, v).real();
        acceptance[ti] = expectation(setup.enc.projector, v).real();
      }
    }
  }

  std::vector<BiasRow> rows;
  rows.reserve(config.methods.size() * n_times);
  for (Method m : config.methods) {
    for (std::size_t ti = 0; ti < n_times; ++ti) {
      BiasRow row;
      row.instance = index;
      row.method = m;
      row.time = times[ti];
      row.coherent_value = coherent[ti];
      row.seed = derive_seed(config.seed, static_cast<std::uint64_t>(index),
                             m == Method::kUnmitigated ? kSeedTagUnmitigated
                             : m == Method::kDualRail  ? kSeedTagDualRail
                                                       : kSeedTagUds);
      switch (m) {
        case Method::kUnmitigated:
          row.estimate = raw_z[ti];
          break;
        case Method::kDualRail: {
          const double p = acceptance[ti];
          if (p <= 0.0) {
            throw DegenerateSampleError(
                "analog dual-rail: zero acceptance probability", p);
          }
          row.estimate = shift_values[0][ti] / p;
          row.acceptance_rate = p;
          break;
        }
        case Method::kUdsAveraged: {
          double sum = 0.0;
          for (const auto& sv : shift_values) sum += sv[ti];
          const double mean = sum / static_cast<double>(shift_values.size());
          row.estimate = std::exp(gamma_eff * times[ti]) * mean;
          const double tk = times[ti] * static_cast<double>(setup.enc.degree_k);
          row.bound = 0.5 * tk * tk * lambda * lambda * setup.obs_norm;
          break;
        }
        case Method::kPec:
          throw DomainError("analog experiment: pec is circuit-only");
      }
      row.abs_bias = std::abs(row.estimate - row.coherent_value);
      rows.push_back(row);
    }
  }
  return rows;
}

double exact_z_functional(const ComplexMatrix& rho, const ZBasisSpec& spec,
                          int n_qubits, double* acceptance_out) {
  const Eigen::Index dim = rho.rows();
  double accept_mass = 0.0;
  double filtered = 0.0;
  double raw = 0.0;
  for (Eigen::Index b = 0; b < dim; ++b) {
    const double p = std::max(rho(b, b).real(), 0.0);
    bool pass = true;
    for (const auto& [qa, qb] : spec.parity_pairs) {
      const int ba = static_cast<int>((b >> (n_qubits - 1 - qa)) & 1);
      const int bb = static_cast<int>((b >> (n_qubits - 1 - qb)) & 1);
      if (ba == bb) {
        pass = false;
        break;
      }
    }
    const int bit = static_cast<int>((b >> (n_qubits - 1 - spec.value_qubit)) & 1);
    const double val = bit == 0 ? 1.0 : -1.0;
    raw += p * val;
    if (pass) {
      accept_mass += p;
      filtered += p * val;
    }
  }
  if (acceptance_out != nullptr) *acceptance_out = accept_mass;
  switch (spec.mode) {
    case ZEstimatorMode::kRawZ:
      return raw;
    case ZEstimatorMode::kPostSelectNormalized:
      if (accept_mass <= 0.0) {
        throw DegenerateSampleError("exact post-selection: zero acceptance",
                                    0.0);
      }
      return filtered / accept_mass;
    case ZEstimatorMode::kFilteredRescaled:
      return spec.rescale * filtered;
  }
  throw DomainError("exact_z_functional: unknown mode");
}

std::vector<BiasRow> circuit_instance_rows(const ExperimentConfig& config,
                                           const SharedSetup& setup,
                                           int index) {
  const Instance inst = generate_instance(config, index);
  const std::vector<double> rates = scaled_rates(config, inst);
  const RateSplit split = compute_rate_split(rates);
  const double gamma_eff = setup.c_scalar * split.mean_rate;
  const double lambda = split.max_abs_deviation;
  const int n = config.n_physical;
  const bool exact = config.n_shots == 0;
  const bool z_observable = config.observable == "z0";

  std::vector<BiasRow> rows;
  for (double t : config.time_grid) {
    const TrotterCircuit clean =
        trotterize_tfim(inst.tfim, setup.enc, t, config.n_trotter);
    const ComplexMatrix rho_clean = evolve_density(clean, setup.rho0);
    const double coherent =
        (vectorize(setup.observable).dot(vectorize(rho_clean))).real();

    const TrotterCircuit noisy =
        trotterize_tfim(inst.tfim, setup.enc, t, config.n_trotter, rates);
    const double rescale = std::exp(gamma_eff * t);

    for (Method m : config.methods) {
      BiasRow row;
      row.instance = index;
      row.method = m;
      row.time = t;
      row.coherent_value = coherent;
      switch (m) {
        case Method::kUnmitigated: {
          row.seed = derive_seed(config.seed, static_cast<std::uint64_t>(index),
                                 kSeedTagUnmitigated);
          if (z_observable) {
            ZBasisSpec spec{0, {}, ZEstimatorMode::kRawZ, 1.0};
            if (exact) {
              const ComplexMatrix rho = evolve_density(noisy, setup.rho0);
              row.estimate = exact_z_functional(rho, spec, n, nullptr);
            } else {
              const ShotRecord rec = sample_measurements(
                  noisy, setup.rho0, spec, config.n_shots, row.seed);
              row.estimate = rec.estimate;
              row.std_error = rec.std_error;
            }
          } else {
            const ComplexMatrix rho = evolve_density(noisy, setup.rho0);
            if (exact) {
              row.estimate =
                  (vectorize(setup.raw_observable).dot(vectorize(rho))).real();
            } else {
              PauliTermsSpec spec{pauli_decompose(setup.raw_observable).terms,
                                  1.0};
              const ShotRecord rec = sample_measurements(
                  noisy, setup.rho0, spec, config.n_shots, row.seed);
              row.estimate = rec.estimate;
              row.std_error = rec.std_error;
            }
          }
          break;
        }
        case Method::kDualRail: {
          row.seed = derive_seed(config.seed, static_cast<std::uint64_t>(index),
                                 kSeedTagDualRail);
          if (z_observable) {
            ZBasisSpec spec;
            spec.value_qubit = 0;
            for (int p = 0; p < n / 2; ++p) spec.parity_pairs.push_back({2 * p, 2 * p + 1});
            spec.mode = ZEstimatorMode::kPostSelectNormalized;
            if (exact) {
              const ComplexMatrix rho = evolve_density(noisy, setup.rho0);
              double acc = 0.0;
              row.estimate = exact_z_functional(rho, spec, n, &acc);
              row.acceptance_rate = acc;
            } else {
              const ShotRecord rec = sample_measurements(
                  noisy, setup.rho0, spec, config.n_shots, row.seed);
              row.estimate = rec.estimate;
              row.std_error = rec.std_error;
              row.acceptance_rate = rec.acceptance_rate;
            }
          } else {
            if (exact) {
              const ComplexMatrix rho = evolve_density(noisy, setup.rho0);
              const double num =
                  (vectorize(setup.observable).dot(vectorize(rho))).real();
              const double acc = project_into(setup.enc, rho).trace().real();
              row.estimate = num / acc;
              row.acceptance_rate = acc;
            } else {
              const EstimatorResult res = postselected_estimate(
                  noisy, setup.enc, setup.rho0, setup.observable,
                  config.n_shots, row.seed);
              row.estimate = res.rescaled_value;
              row.std_error = res.std_error;
              row.acceptance_rate =
                  static_cast<double>(res.accepted_shots) /
                  static_cast<double>(res.n_shots);
            }
          }
          break;
        }
        case Method::kUdsAveraged: {
          double sum = 0.0;
          double var_sum = 0.0;
          double acc_sum = 0.0;
          for (int j = 0; j < n; ++j) {
            const std::uint64_t shift_seed =
                derive_seed(config.seed, static_cast<std::uint64_t>(index),
                            kSeedTagUds + static_cast<std::uint64_t>(j));
            const TrotterCircuit shifted = trotterize_tfim(
                inst.tfim, setup.enc, t, config.n_trotter, rates, j);
            const ComplexMatrix rho0_j =
                conjugate_by_permutation(setup.rho0, setup.perm, j);
            std::uint64_t shots_j =
                exact ? 0
                      : config.n_shots / static_cast<std::uint64_t>(n) +
                            (static_cast<std::uint64_t>(j) <
                                     config.n_shots % static_cast<std::uint64_t>(n)
                                 ? 1
                                 : 0);
            if (z_observable) {
              ZBasisSpec spec;
              spec.value_qubit = j % n;
              for (int p = 0; p < n / 2; ++p) {
                spec.parity_pairs.push_back(
                    {(2 * p + j) % n, (2 * p + 1 + j) % n});
              }
              spec.mode = ZEstimatorMode::kFilteredRescaled;
              spec.rescale = 1.0;
              if (exact) {
                const ComplexMatrix rho = evolve_density(shifted, rho0_j);
                double acc = 0.0;
                sum += exact_z_functional(rho, spec, n, &acc);
                acc_sum += acc;
              } else {
                const ShotRecord rec = sample_measurements(
                    shifted, rho0_j, spec, shots_j, shift_seed);
                sum += rec.estimate;
                var_sum += rec.std_error * rec.std_error;
                acc_sum += rec.acceptance_rate;
              }
            } else {
              const ComplexMatrix obs_j = conjugate_by_permutation(
                  setup.observable, setup.perm, j);
              if (exact) {
                const ComplexMatrix rho = evolve_density(shifted, rho0_j);
                sum += (vectorize(obs_j).dot(vectorize(rho))).real();
              } else {
                PauliTermsSpec spec{pauli_decompose(obs_j).terms, 1.0};
                const ShotRecord rec = sample_measurements(
                    shifted, rho0_j, spec, shots_j, shift_seed);
                sum += rec.estimate;
                var_sum += rec.std_error * rec.std_error;
              }
            }
          }
          row.seed = derive_seed(config.seed, static_cast<std::uint64_t>(index),
                                 kSeedTagUds);
          row.estimate = rescale * sum / static_cast<double>(n);
          row.std_error =
              rescale * std::sqrt(var_sum) / static_cast<double>(n);
          row.acceptance_rate = acc_sum > 0.0
                                    ? acc_sum / static_cast<double>(n)
                                    : std::numeric_limits<double>::quiet_NaN();
          const double tk = t * static_cast<double>(setup.enc.degree_k);
          row.bound = 0.5 * tk * tk * lambda * lambda * setup.obs_norm;
          break;
        }
        case Method::kPec: {
          row.seed = derive_seed(config.seed, static_cast<std::uint64_t>(index),
                                 kSeedTagPec);
          const EstimatorResult res = pec_baseline_estimate(
              noisy, setup.enc, setup.rho0, setup.observable, split.mean_rate,
              config.n_shots, row.seed);
          row.estimate = res.rescaled_value;
          row.std_error = res.std_error;
          break;
        }
      }
      row.abs_bias = std::abs(row.estimate - row.coherent_value);
      rows.push_back(row);
    }
  }
  return rows;
}

BiasReport run_experiment(const ExperimentConfig& raw_config,
                          bool analog_kind) {
  const ExperimentConfig config = normalize_config(raw_config);
  if (analog_kind != (config.kind == ExperimentKind::kAnalog)) {
    throw DomainError("experiment runner called with the wrong kind");
  }
  const SharedSetup setup = build_setup(config);

  BiasReport report;
  report.config = config;
  report.observable_norm = setup.obs_norm;

  std::vector<std::vector<BiasRow>> per_instance(
      static_cast<std::size_t>(config.n_instances));
  std::vector<std::string> errors(static_cast<std::size_t>(config.n_instances));

  run_parallel(config.n_instances, config.threads, [&](int i) {
    try {
      per_instance[static_cast<std::size_t>(i)] =
          analog_kind ? analog_instance_rows(config, setup, i)
                      : circuit_instance_rows(config, setup, i);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] =
          "instance " + std::to_string(i) + ": " + e.what();
    }
  });

  for (int i = 0; i < config.n_instances; ++i) {
    const auto& rows = per_instance[static_cast<std::size_t>(i)];
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    if (!errors[static_cast<std::size_t>(i)].empty()) {
      report.instance_errors.push_back(errors[static_cast<std::size_t>(i)]);
    }
  }
  return report;
}

}  // namespace

BiasReport run_analog_experiment(const ExperimentConfig& config) {
  return run_experiment(config, true);
}

BiasReport run_circuit_experiment(const ExperimentConfig& config) {
  return run_experiment(config, false);
}

std::string render_results_csv(const BiasReport& report) {
  std::string out =
      "instance,method,time,coherent_value,estimate,abs_bias,bound,"
      "acceptance_rate,std_error,seed\n";
  for (const BiasRow& row : report.rows) {
    out += std::to_string(row.instance);
    out += ',';
    out += method_name(row.method);
    out += ',';
    out += format_double(row.time);
    out += ',';
    out += format_double(row.coherent_value);
    out += ',';
    out += format_double(row.estimate);
    out += ',';
    out += format_double(row.abs_bias);
    out += ',';
    out += format_double(row.bound);
    out += ',';
    out += format_double(row.acceptance_rate);
    out += ',';
    out += format_double(row.std_error);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

namespace {

OrderedJson config_to_ordered_json(const ExperimentConfig& config) {
  OrderedJson j;
  j["schema"] = 1;
  j["kind"] = config.kind == ExperimentKind::kAnalog ? "analog" : "circuit";
  j["n_physical"] = config.n_physical;
  j["n_logical"] = config.n_logical;
  j["degree_k"] = config.degree_k;
  j["time_grid"] = config.time_grid;
  j["n_instances"] = config.n_instances;
  j["j_range"] = config.j_range;
  j["h_range"] = config.h_range;
  j["gamma_mean"] = config.gamma_mean;
  j["gamma_sd"] = config.gamma_sd;
  j["n_shots"] = config.n_shots;
  j["n_trotter"] = config.n_trotter;
  j["seed"] = config.seed;
  std::vector<std::string> methods;
  for (Method m : config.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["observable"] = config.observable;
  j["deviation_scale"] = config.deviation_scale;
  j["equal_rates"] = config.equal_rates;
  j["threads"] = config.threads;
  return j;
}

ExperimentConfig config_from_json_value(const nlohmann::json& j) {
  if (!j.contains("schema") || j.at("schema").get<int>() != 1) {
    throw IoError("config: missing or unsupported schema (expected 1)");
  }
  ExperimentConfig config;
  const std::string kind = j.value("kind", std::string("analog"));
  if (kind == "analog") {
    config.kind = ExperimentKind::kAnalog;
  } else if (kind == "circuit") {
    config.kind = ExperimentKind::kCircuit;
  } else {
    throw IoError("config: kind must be analog or circuit");
  }
  config.n_physical = j.value("n_physical", 6);
  config.n_logical = j.value("n_logical", 0);
  config.degree_k = j.value("degree_k", 0);
  if (j.contains("time_grid")) {
    config.time_grid = j.at("time_grid").get<std::vector<double>>();
  }
  config.n_instances = j.value("n_instances", 100);
  if (j.contains("j_range")) {
    config.j_range = j.at("j_range").get<std::array<double, 2>>();
  }
  if (j.contains("h_range")) {
    config.h_range = j.at("h_range").get<std::array<double, 2>>();
  }
  config.gamma_mean = j.value("gamma_mean", 1e-2);
  config.gamma_sd = j.value("gamma_sd", 1e-3);
  config.n_shots = j.value("n_shots", std::uint64_t{10'000'000});
  config.n_trotter = j.value("n_trotter", 20);
  config.seed = j.value("seed", std::uint64_t{0x5EEDED});
  if (j.contains("methods")) {
    config.methods.clear();
    for (const auto& name : j.at("methods")) {
      config.methods.push_back(method_from_name(name.get<std::string>()));
    }
  }
  config.observable = j.value("observable", std::string("z0"));
  config.deviation_scale = j.value("deviation_scale", 1.0);
  config.equal_rates = j.value("equal_rates", false);
  config.threads = j.value("threads", 0);
  return config;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_to_ordered_json(config).dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  // accept both a bare config and a full report (as emitted by emit_report)
  if (j.contains("config")) return config_from_json_value(j.at("config"));
  return config_from_json_value(j);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return config_from_json(text);
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

std::string analog_aggregate_csv(const BiasReport& report) {
  std::string out = "method,time,mean_abs_bias,max_abs_bias\n";
  for (Method m : report.config.methods) {
    for (double t : report.config.time_grid) {
      double sum = 0.0, mx = 0.0;
      int count = 0;
      for (const BiasRow& row : report.rows) {
        if (row.method != m || row.time != t) continue;
        sum += row.abs_bias;
        mx = std::max(mx, row.abs_bias);
        ++count;
      }
      if (count == 0) continue;
      out += method_name(m);
      out += ',';
      out += format_double(t);
      out += ',';
      out += format_double(sum / count);
      out += ',';
      out += format_double(mx);
      out += '\n';
    }
  }
  return out;
}

std::string circuit_histogram_csv(const BiasReport& report) {
  constexpr int kBins = 30;
  const double lo = 1e-8, hi = 1.0;
  const double step = (std::log10(hi) - std::log10(lo)) / kBins;
  std::string out = "method,bin_index,bin_lo,bin_hi,count\n";
  for (Method m : report.config.methods) {
    std::vector<std::uint64_t> counts(kBins, 0);
    for (const BiasRow& row : report.rows) {
      if (row.method != m) continue;
      int bin;
      if (row.abs_bias <= lo) {
        bin = 0;
      } else if (row.abs_bias >= hi) {
        bin = kBins - 1;
      } else {
        bin = static_cast<int>((std::log10(row.abs_bias) - std::log10(lo)) /
                               step);
        bin = std::min(std::max(bin, 0), kBins - 1);
      }
      ++counts[static_cast<std::size_t>(bin)];
    }
    for (int b = 0; b < kBins; ++b) {
      out += method_name(m);
      out += ',';
      out += std::to_string(b);
      out += ',';
      out += format_double(std::pow(10.0, std::log10(lo) + b * step));
      out += ',';
      out += format_double(std::pow(10.0, std::log10(lo) + (b + 1) * step));
      out += ',';
      out += std::to_string(counts[static_cast<std::size_t>(b)]);
      out += '\n';
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> emit_report(const BiasReport& report,
                                     const std::string& out_dir,
                                     bool with_aggregates) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir);

  std::vector<std::string> written;
  const std::string csv_path = out_dir + "/results.csv";
  write_file(csv_path, render_results_csv(report));
  written.push_back(csv_path);

  OrderedJson j;
  j["schema"] = 1;
  j["config"] = config_to_ordered_json(report.config);
  j["shot_split"] = report.shot_split;
  j["observable_norm"] = report.observable_norm;
  j["n_rows"] = report.rows.size();
  j["instance_errors"] = report.instance_errors;
  const std::string json_path = out_dir + "/report.json";
  write_file(json_path, j.dump(2) + "\n");
  written.push_back(json_path);

  if (with_aggregates) {
    if (report.config.kind == ExperimentKind::kAnalog) {
      const std::string path = out_dir + "/bias_vs_time.csv";
      write_file(path, analog_aggregate_csv(report));
      written.push_back(path);
    } else {
      const std::string path = out_dir + "/bias_histogram.csv";
      write_file(path, circuit_histogram_csv(report));
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace udsim
