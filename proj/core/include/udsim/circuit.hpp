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

#include <utility>
#include <variant>
#include <vector>

#include "udsim/noise.hpp"
#include "udsim/operators.hpp"
#include "udsim/subspace.hpp"
#include "udsim/types.hpp"

namespace udsim {

struct TfimParams {
  Eigen::MatrixXd j_coupling;  // n_L x n_L, symmetric, diagonal ignored
  Eigen::VectorXd h_field;     // n_L
};

/// H = sum_{i<j} J_ij Z^L_i Z^L_j + 1/2 sum_i h_i X^L_i on dual-rail qubits,
/// with the physical pair blocks cyclically shifted by `shift` positions.
ComplexMatrix build_tfim_hamiltonian(const TfimParams& params,
                                     const SubspaceEncoding& enc,
                                     int shift = 0);

struct GateOp {
  int q1 = 0;
  int q2 = 1;
  ComplexMatrix matrix;  // 4x4, ordered (q1, q2)
};

struct CircuitLayer {
  std::vector<GateOp> gates;
  ComplexMatrix unitary;  // dense composition of the layer
};

/// One Trotter step's layers, repeated `steps` times, with per-qubit damping
/// channels applied once after each step's unitaries. The channel placement
/// is recorded; no channel acts during the final measurement.
struct TrotterCircuit {
  int n_qubits = 0;
  int steps = 0;
  double dt = 0.0;
  double total_time = 0.0;
  int shift = 0;
  std::vector<int> dims;
  std::vector<CircuitLayer> layers;
  std::vector<double> channel_rates;     // empty: noiseless
  std::vector<QuantumChannel> channels;  // eta_i = exp(-dt gamma_i)
  static constexpr const char* kChannelPlacement = "after-each-step";
};

/// First-order Trotter splitting of the dual-rail TFIM: a layer of commuting
/// ZZ gates, then a layer of commuting XY-pair gates. Layer unitarity and
/// commutation with the (shifted) dual-rail projector are checked at build.
TrotterCircuit trotterize_tfim(const TfimParams& params,
                               const SubspaceEncoding& enc, double t,
                               int n_steps,
                               const std::vector<double>& channel_rates = {},
                               int shift = 0);

/// Exact density-matrix evolution: unitary layers then per-qubit damping,
/// repeated for every Trotter step.
ComplexMatrix evolve_density(const TrotterCircuit& circuit,
                             const ComplexMatrix& rho0);

enum class ZEstimatorMode {
  kRawZ,                 // mean Z of value_qubit, no filtering
  kPostSelectNormalized, // mean over shots passing the parity checks
  kFilteredRescaled,     // unnormalized filtered mean times `rescale`
};

/// Z-basis functional: read the Z eigenvalue of value_qubit, with optional
/// dual-rail parity checks (accept iff the two bits differ in each pair).
struct ZBasisSpec {
  int value_qubit = 0;
  std::vector<std::pair<int, int>> parity_pairs;
  ZEstimatorMode mode = ZEstimatorMode::kRawZ;
  double rescale = 1.0;
};

/// Monte-Carlo measurement over a Pauli-term list: each shot draws a term
/// with probability |coeff| / sum|coeff| and measures it.
struct PauliTermsSpec {
  std::vector<PauliTerm> terms;
  double rescale = 1.0;
};

using ObservableSpec = std::variant<ZBasisSpec, PauliTermsSpec>;

struct ShotRecord {
  std::vector<std::uint64_t> counts;  // per outcome category
  std::vector<double> values;         // outcome value per category
  std::uint64_t n_shots = 0;
  std::uint64_t accepted = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double acceptance_rate = 0.0;  // exact probability mass passing the checks
  std::uint64_t seed = 0;
};

/// Draws computational-basis outcomes from diag(rho_final) (Z case) or
/// per-term outcomes (Pauli case) and aggregates counts plus the derived
/// estimate. Identical seeds reproduce identical records bit for bit.
ShotRecord sample_measurements(const TrotterCircuit& circuit,
                               const ComplexMatrix& rho0,
                               const ObservableSpec& spec,
                               std::uint64_t n_shots, std::uint64_t rng_seed);

}  // namespace udsim
