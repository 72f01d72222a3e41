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

#include "udsim/types.hpp"

namespace udsim {

ComplexMatrix identity(Eigen::Index n);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix sigma_minus();  // |0><1|

/// Truncated bosonic annihilation operator, a = sum_m sqrt(m) |m-1><m|.
ComplexMatrix annihilation(int d);

/// Total dimension of a qudit register.
Eigen::Index product_dim(const std::vector<int>& dims);

/// Lift a single-site operator to the full register at the given site.
ComplexMatrix embed_site(const ComplexMatrix& local, const std::vector<int>& dims,
                         int site);

/// Lift a two-qubit gate (4x4, ordered q1 then q2) to n qubits; q1 and q2 may
/// be any distinct positions.
ComplexMatrix embed_two_qubit(const ComplexMatrix& gate4, int n_qubits, int q1,
                              int q2);

/// Dense n-qubit Pauli string from per-qubit codes (0=I,1=X,2=Y,3=Z).
ComplexMatrix pauli_string_matrix(const std::vector<int>& codes);

/// One term of a Pauli expansion, coeff * sigma_{codes}.
struct PauliTerm {
  double coeff = 0.0;
  std::vector<int> codes;
};

std::string pauli_label(const std::vector<int>& codes);

/// Basis index of a Fock tuple under lexicographic (row-major) ordering,
/// qudit 0 most significant.
Eigen::Index fock_index(const std::vector<int>& tuple,
                        const std::vector<int>& dims);

/// Inverse of fock_index.
std::vector<int> fock_tuple(Eigen::Index index, const std::vector<int>& dims);

/// Permutation p over basis indices induced by the cyclic shift of qudit
/// labels i -> i+1 (mod n): out[fock_index(shifted tuple)] = in[fock_index].
std::vector<Eigen::Index> cyclic_shift_permutation(const std::vector<int>& dims);

/// Permutation matrix T with T e_i = e_{perm[i]}.
ComplexMatrix permutation_matrix(const std::vector<Eigen::Index>& perm);

/// T^j M T^{-j} for the permutation p applied j times (j may be 0).
ComplexMatrix conjugate_by_permutation(const ComplexMatrix& m,
                                       const std::vector<Eigen::Index>& perm,
                                       int power);

}  // namespace udsim
