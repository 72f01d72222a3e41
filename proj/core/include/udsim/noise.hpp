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

#include <vector>

#include "udsim/liouville.hpp"
#include "udsim/types.hpp"

namespace udsim {

/// Kraus-operator channel acting on one qudit of a register.
struct QuantumChannel {
  std::vector<ComplexMatrix> kraus_ops;
  int target_qudit = 0;
  double parameter = 1.0;  // eta in (0, 1]
};

/// n qubits with A_i = sigma^-_i at the given rates.
LindbladModel relaxation_model(int n, const std::vector<double>& rates,
                               const ComplexMatrix& hamiltonian);

/// Qudit register with truncated annihilation operators A_i = a_i; reduces to
/// relaxation_model when every local dimension is 2.
LindbladModel qudit_damping_model(const std::vector<int>& dims,
                                  const std::vector<double>& rates,
                                  const ComplexMatrix& hamiltonian);

/// Correlated decays A_ij = a_i a_j over ordered pairs. pair_rates is n x n
/// row-major; with include_diagonal the (i, i) terms a_i^2 are kept (they
/// vanish identically on qubits).
LindbladModel correlated_decay_model(const std::vector<int>& dims,
                                     const std::vector<double>& pair_rates,
                                     const ComplexMatrix& hamiltonian,
                                     bool include_diagonal);

/// Discrete amplitude-damping channel,
/// K_s(eta) = sum_r sqrt(C(r, s) eta^{r-s} (1 - eta)^s) |r-s><r|.
QuantumChannel damping_channel(int d, double eta, int target_qudit = 0);

/// rho -> sum_s K_s rho K_s^dag with the Kraus operators lifted to the
/// channel's target qudit.
ComplexMatrix apply_channel(const QuantumChannel& channel,
                            const ComplexMatrix& rho,
                            const std::vector<int>& dims);

}  // namespace udsim
