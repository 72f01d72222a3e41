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

#include "udsim/circuit.hpp"

#include <cmath>

#include "udsim/operators.hpp"
#include "udsim/rng.hpp"

namespace udsim {

namespace {

int mod_n(int x, int n) { return ((x % n) + n) % n; }

ComplexMatrix zz_gate(double theta) {
  ComplexMatrix g = ComplexMatrix::Zero(4, 4);
  const Complex neg = std::exp(Complex(0, -theta));
  const Complex pos = std::exp(Complex(0, theta));
  g(0, 0) = neg;
  g(1, 1) = pos;
  g(2, 2) = pos;
  g(3, 3) = neg;
  return g;
}

// exp(-i phi (XX + YY) / 2): rotation inside the {|01>, |10>} block.
ComplexMatrix xy_gate(double phi) {
  ComplexMatrix g = ComplexMatrix::Identity(4, 4);
  g(1, 1) = std::cos(phi);
  g(2, 2) = std::cos(phi);
  g(1, 2) = Complex(0, -std::sin(phi));
  g(2, 1) = Complex(0, -std::sin(phi));
  return g;
}

void check_layer(const CircuitLayer& layer, const ComplexMatrix& projector) {
  const Eigen::Index n = layer.unitary.rows();
  const double uerr =
      (layer.unitary * layer.unitary.adjoint() - identity(n)).cwiseAbs().maxCoeff();
  if (uerr > 1e-12) {
    throw DomainError("trotterize_tfim: layer is not unitary");
  }
  const double comm =
      (layer.unitary * projector - projector * layer.unitary).cwiseAbs().maxCoeff();
  if (comm > 1e-12) {
    throw DomainError("trotterize_tfim: layer does not commute with the "
                      "subspace projector");
  }
}

}  // namespace

ComplexMatrix build_tfim_hamiltonian(const TfimParams& params,
                                     const SubspaceEncoding& enc, int shift) {
  const int n_logical = enc.n_pairs();
  if (params.j_coupling.rows() != n_logical ||
      params.j_coupling.cols() != n_logical ||
      params.h_field.size() != n_logical) {
    throw ShapeError("build_tfim_hamiltonian: parameter dimensions mismatch");
  }
  const int n = static_cast<int>(enc.dims.size());
  const Eigen::Index dim = enc.total_dim();
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  std::vector<ComplexMatrix> zs(n_logical);
  for (int i = 0; i < n_logical; ++i) {
    zs[i] = embed_site(pauli_z(), enc.dims, mod_n(2 * i + shift, n));
  }
  for (int i = 0; i < n_logical; ++i) {
    for (int j = i + 1; j < n_logical; ++j) {
      const double coupling = params.j_coupling(i, j);
      if (coupling != 0.0) h += coupling * (zs[i] * zs[j]);
    }
  }
  for (int i = 0; i < n_logical; ++i) {
    if (params.h_field(i) == 0.0) continue;
    const int a = mod_n(2 * i + shift, n);
    const int b = mod_n(2 * i + 1 + shift, n);
    const ComplexMatrix xx =
        embed_site(pauli_x(), enc.dims, a) * embed_site(pauli_x(), enc.dims, b);
    const ComplexMatrix yy =
        embed_site(pauli_y(), enc.dims, a) * embed_site(pauli_y(), enc.dims, b);
    h += (params.h_field(i) / 4.0) * (xx + yy);  // h/2 * X_L, X_L = (XX+YY)/2
  }
  return h;
}

TrotterCircuit trotterize_tfim(const TfimParams& params,
                               const SubspaceEncoding& enc, double t,
                               int n_steps,
                               const std::vector<double>& channel_rates,
                               int shift) {
  if (enc.flavor != SubspaceFlavor::kDualRail) {
    throw DomainError("trotterize_tfim: a dual-rail encoding is required");
  }
  if (n_steps < 1) throw DomainError("trotterize_tfim: n_steps must be >= 1");
  const int n_logical = enc.n_pairs();
  if (params.j_coupling.rows() != n_logical ||
      params.h_field.size() != n_logical) {
    throw ShapeError("trotterize_tfim: parameter dimensions mismatch");
  }

  TrotterCircuit circuit;
  circuit.n_qubits = static_cast<int>(enc.dims.size());
  circuit.steps = n_steps;
  circuit.total_time = t;
  circuit.dt = t / n_steps;
  circuit.shift = shift;
  circuit.dims = enc.dims;
  const int n = circuit.n_qubits;
  const Eigen::Index dim = enc.total_dim();

  CircuitLayer zz_layer;
  zz_layer.unitary = identity(dim);
  for (int i = 0; i < n_logical; ++i) {
    for (int j = i + 1; j < n_logical; ++j) {
      const double coupling = params.j_coupling(i, j);
      if (coupling == 0.0) continue;
      GateOp gate{mod_n(2 * i + shift, n), mod_n(2 * j + shift, n),
                  zz_gate(circuit.dt * coupling)};
      zz_layer.unitary =
          embed_two_qubit(gate.matrix, n, gate.q1, gate.q2) * zz_layer.unitary;
      zz_layer.gates.push_back(std::move(gate));
    }
  }

  CircuitLayer xy_layer;
  xy_layer.unitary = identity(dim);
  for (int i = 0; i < n_logical; ++i) {
    if (params.h_field(i) == 0.0) continue;
    GateOp gate{mod_n(2 * i + shift, n), mod_n(2 * i + 1 + shift, n),
                xy_gate(circuit.dt * params.h_field(i) / 2.0)};
    xy_layer.unitary =
        embed_two_qubit(gate.matrix, n, gate.q1, gate.q2) * xy_layer.unitary;
    xy_layer.gates.push_back(std::move(gate));
  }

  const std::vector<Eigen::Index> perm = cyclic_shift_permutation(enc.dims);
  const ComplexMatrix shifted_projector =
      conjugate_by_permutation(enc.projector, perm, mod_n(shift, n));
  check_layer(zz_layer, shifted_projector);
  check_layer(xy_layer, shifted_projector);
  circuit.layers.push_back(std::move(zz_layer));
  circuit.layers.push_back(std::move(xy_layer));

  if (!channel_rates.empty()) {
    if (static_cast<int>(channel_rates.size()) != n) {
      throw ShapeError("trotterize_tfim: one channel rate per qubit required");
    }
    circuit.channel_rates = channel_rates;
    for (int q = 0; q < n; ++q) {
      const double eta = std::exp(-circuit.dt * channel_rates[q]);
      circuit.channels.push_back(damping_channel(2, eta, q));
    }
  }
  return circuit;
}

ComplexMatrix evolve_density(const TrotterCircuit& circuit,
                             const ComplexMatrix& rho0) {
  const Eigen::Index dim = product_dim(circuit.dims);
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw ShapeError("evolve_density: state does not match the circuit");
  }
  ComplexMatrix rho = rho0;
  for (int step = 0; step < circuit.steps; ++step) {
    for (const CircuitLayer& layer : circuit.layers) {
      rho = layer.unitary * rho * layer.unitary.adjoint();
    }
    for (const QuantumChannel& channel : circuit.channels) {
      rho = apply_channel(channel, rho, circuit.dims);
    }
  }
  return rho;
}

namespace {

ShotRecord sample_z_basis(const TrotterCircuit& circuit,
                          const ComplexMatrix& rho_final, const ZBasisSpec& spec,
                          std::uint64_t n_shots, std::uint64_t seed) {
  const Eigen::Index dim = rho_final.rows();
  const int n = circuit.n_qubits;
  std::vector<double> probs(static_cast<std::size_t>(dim));
  double total = 0.0;
  for (Eigen::Index b = 0; b < dim; ++b) {
    probs[static_cast<std::size_t>(b)] = std::max(rho_final(b, b).real(), 0.0);
    total += probs[static_cast<std::size_t>(b)];
  }
  for (double& p : probs) p /= total;

  std::vector<double> value(static_cast<std::size_t>(dim));
  std::vector<bool> pass(static_cast<std::size_t>(dim));
  double acceptance = 0.0;
  for (Eigen::Index b = 0; b < dim; ++b) {
    bool ok = true;
    for (const auto& [qa, qb] : spec.parity_pairs) {
      const int ba = static_cast<int>((b >> (n - 1 - qa)) & 1);
      const int bb = static_cast<int>((b >> (n - 1 - qb)) & 1);
      if (ba == bb) {
        ok = false;
        break;
      }
    }
    pass[static_cast<std::size_t>(b)] = ok;
    if (ok) acceptance += probs[static_cast<std::size_t>(b)];
    const int bit = static_cast<int>((b >> (n - 1 - spec.value_qubit)) & 1);
    value[static_cast<std::size_t>(b)] = bit == 0 ? 1.0 : -1.0;
  }

  CounterRng rng(seed);
  ShotRecord record;
  record.seed = seed;
  record.n_shots = n_shots;
  record.counts = rng.multinomial(n_shots, probs);
  record.values = value;
  record.acceptance_rate = acceptance;

  std::uint64_t accepted = 0;
  for (Eigen::Index b = 0; b < dim; ++b) {
    if (pass[static_cast<std::size_t>(b)])
      accepted += record.counts[static_cast<std::size_t>(b)];
  }
  record.accepted = accepted;

  auto moments = [&](auto&& per_shot_value, std::uint64_t denom) {
    double m1 = 0.0, m2 = 0.0;
    for (Eigen::Index b = 0; b < dim; ++b) {
      const double v = per_shot_value(b);
      const double c = static_cast<double>(record.counts[b]);
      m1 += c * v;
      m2 += c * v * v;
    }
    m1 /= static_cast<double>(denom);
    m2 /= static_cast<double>(denom);
    const double var = std::max(m2 - m1 * m1, 0.0);
    const double se = denom > 1 ? std::sqrt(var / static_cast<double>(denom - 1))
                                : 0.0;
    return std::pair<double, double>{m1, se};
  };

  switch (spec.mode) {
    case ZEstimatorMode::kRawZ: {
      auto [m, se] = moments([&](Eigen::Index b) { return value[b]; }, n_shots);
      record.estimate = m;
      record.std_error = se;
      break;
    }
    case ZEstimatorMode::kPostSelectNormalized: {
      if (accepted == 0) {
        throw DegenerateSampleError(
            "sample_measurements: no shot passed post-selection", acceptance);
      }
      double m1 = 0.0, m2 = 0.0;
      for (Eigen::Index b = 0; b < dim; ++b) {
        if (!pass[static_cast<std::size_t>(b)]) continue;
        const double v = value[b];
        const double c = static_cast<double>(record.counts[b]);
        m1 += c * v;
        m2 += c * v * v;
      }
      m1 /= static_cast<double>(accepted);
      m2 /= static_cast<double>(accepted);
      const double var = std::max(m2 - m1 * m1, 0.0);
      record.estimate = m1;
      record.std_error =
          accepted > 1 ? std::sqrt(var / static_cast<double>(accepted - 1)) : 0.0;
      break;
    }
    case ZEstimatorMode::kFilteredRescaled: {
      auto [m, se] = moments(
          [&](Eigen::Index b) { return pass[b] ? value[b] : 0.0; }, n_shots);
      record.estimate = spec.rescale * m;
      record.std_error = spec.rescale * se;
      break;
    }
  }
  return record;
}

ShotRecord sample_pauli_terms(const ComplexMatrix& rho_final,
                              const PauliTermsSpec& spec, std::uint64_t n_shots,
                              std::uint64_t seed) {
  if (spec.terms.empty()) {
    throw DomainError("sample_measurements: empty Pauli-term list");
  }
  double weight = 0.0;
  for (const auto& term : spec.terms) weight += std::abs(term.coeff);
  if (weight <= 0.0) {
    throw DomainError("sample_measurements: all Pauli coefficients vanish");
  }

  // categories: (term, +1) then (term, -1)
  const std::size_t k = spec.terms.size();
  std::vector<double> probs(2 * k);
  std::vector<double> value(2 * k);
  for (std::size_t s = 0; s < k; ++s) {
    const ComplexMatrix sigma = pauli_string_matrix(spec.terms[s].codes);
    const double exp_s = (sigma.transpose().cwiseProduct(rho_final)).sum().real();
    const double p_term = std::abs(spec.terms[s].coeff) / weight;
    const double p_plus = std::min(std::max((1.0 + exp_s) / 2.0, 0.0), 1.0);
    probs[s] = p_term * p_plus;
    probs[k + s] = p_term * (1.0 - p_plus);
    const double signed_weight =
        weight * (spec.terms[s].coeff >= 0 ? 1.0 : -1.0);
    value[s] = signed_weight;
    value[k + s] = -signed_weight;
  }

  CounterRng rng(seed);
  ShotRecord record;
  record.seed = seed;
  record.n_shots = n_shots;
  record.counts = rng.multinomial(n_shots, probs);
  record.values = value;
  record.acceptance_rate = 1.0;
  record.accepted = n_shots;

  double m1 = 0.0, m2 = 0.0;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    const double v = value[c];
    const double cnt = static_cast<double>(record.counts[c]);
    m1 += cnt * v;
    m2 += cnt * v * v;
  }
  m1 /= static_cast<double>(n_shots);
  m2 /= static_cast<double>(n_shots);
  const double var = std::max(m2 - m1 * m1, 0.0);
  record.estimate = spec.rescale * m1;
  record.std_error =
      n_shots > 1
          ? spec.rescale * std::sqrt(var / static_cast<double>(n_shots - 1))
          : 0.0;
  return record;
}

}  // namespace

ShotRecord sample_measurements(const TrotterCircuit& circuit,
                               const ComplexMatrix& rho0,
                               const ObservableSpec& spec,
                               std::uint64_t n_shots, std::uint64_t rng_seed) {
  if (n_shots == 0) {
    throw DomainError("sample_measurements: n_shots must be positive");
  }
  const ComplexMatrix rho_final = evolve_density(circuit, rho0);
  if (std::holds_alternative<ZBasisSpec>(spec)) {
    return sample_z_basis(circuit, rho_final, std::get<ZBasisSpec>(spec),
                          n_shots, rng_seed);
  }
  return sample_pauli_terms(rho_final, std::get<PauliTermsSpec>(spec), n_shots,
                            rng_seed);
}

}  // namespace udsim
