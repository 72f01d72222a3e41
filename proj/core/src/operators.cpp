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

#include "udsim/operators.hpp"

#include <cmath>

#include "udsim/tensor.hpp"

namespace udsim {

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix annihilation(int d) {
  if (d < 2) throw DomainError("annihilation: local dimension must be >= 2");
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int k = 1; k < d; ++k) m(k - 1, k) = std::sqrt(static_cast<double>(k));
  return m;
}

Eigen::Index product_dim(const std::vector<int>& dims) {
  std::int64_t n = 1;
  for (int d : dims) {
    if (d < 2) throw DomainError("product_dim: local dimension must be >= 2");
    n *= d;
    if (n > kMaxDenseEntries) {
      throw DimensionError("product_dim: register dimension exceeds the cap");
    }
  }
  return static_cast<Eigen::Index>(n);
}

ComplexMatrix embed_site(const ComplexMatrix& local,
                         const std::vector<int>& dims, int site) {
  if (site < 0 || site >= static_cast<int>(dims.size())) {
    throw DomainError("embed_site: site out of range");
  }
  if (local.rows() != dims[site] || local.cols() != dims[site]) {
    throw ShapeError("embed_site: local operator does not match the site dim");
  }
  Eigen::Index left = 1, right = 1;
  for (int i = 0; i < site; ++i) left *= dims[i];
  for (int i = site + 1; i < static_cast<int>(dims.size()); ++i)
    right *= dims[i];
  return kron_all({identity(left), local, identity(right)});
}

ComplexMatrix embed_two_qubit(const ComplexMatrix& gate4, int n_qubits, int q1,
                              int q2) {
  if (gate4.rows() != 4 || gate4.cols() != 4) {
    throw ShapeError("embed_two_qubit: gate must be 4x4");
  }
  if (q1 == q2 || q1 < 0 || q2 < 0 || q1 >= n_qubits || q2 >= n_qubits) {
    throw DomainError("embed_two_qubit: invalid qubit pair");
  }
  const Eigen::Index n = Eigen::Index{1} << n_qubits;
  const int b1 = n_qubits - 1 - q1;  // bit position of q1 (qubit 0 is MSB)
  const int b2 = n_qubits - 1 - q2;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    const int a = static_cast<int>((col >> b1) & 1);
    const int b = static_cast<int>((col >> b2) & 1);
    const Eigen::Index base =
        col & ~((Eigen::Index{1} << b1) | (Eigen::Index{1} << b2));
    for (int an = 0; an < 2; ++an) {
      for (int bn = 0; bn < 2; ++bn) {
        const Complex amp = gate4(2 * an + bn, 2 * a + b);
        if (amp == Complex(0, 0)) continue;
        const Eigen::Index row = base | (Eigen::Index{an} << b1) |
                                 (Eigen::Index{bn} << b2);
        out(row, col) += amp;
      }
    }
  }
  return out;
}

ComplexMatrix pauli_string_matrix(const std::vector<int>& codes) {
  std::vector<ComplexMatrix> factors;
  factors.reserve(codes.size());
  for (int c : codes) {
    switch (c) {
      case 0: factors.push_back(identity(2)); break;
      case 1: factors.push_back(pauli_x()); break;
      case 2: factors.push_back(pauli_y()); break;
      case 3: factors.push_back(pauli_z()); break;
      default: throw DomainError("pauli_string_matrix: code must be 0..3");
    }
  }
  return kron_all(factors);
}

std::string pauli_label(const std::vector<int>& codes) {
  static const char kNames[] = {'I', 'X', 'Y', 'Z'};
  std::string label;
  label.reserve(codes.size());
  for (int c : codes) {
    if (c < 0 || c > 3) throw DomainError("pauli_label: code must be 0..3");
    label.push_back(kNames[c]);
  }
  return label;
}

Eigen::Index fock_index(const std::vector<int>& tuple,
                        const std::vector<int>& dims) {
  if (tuple.size() != dims.size()) {
    throw ShapeError("fock_index: tuple/dims length mismatch");
  }
  Eigen::Index idx = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (tuple[i] < 0 || tuple[i] >= dims[i]) {
      throw DomainError("fock_index: occupation out of range");
    }
    idx = idx * dims[i] + tuple[i];
  }
  return idx;
}

std::vector<int> fock_tuple(Eigen::Index index, const std::vector<int>& dims) {
  std::vector<int> tuple(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    tuple[i] = static_cast<int>(index % dims[i]);
    index /= dims[i];
  }
  return tuple;
}

std::vector<Eigen::Index> cyclic_shift_permutation(
    const std::vector<int>& dims) {
  for (std::size_t i = 1; i < dims.size(); ++i) {
    if (dims[i] != dims[0]) {
      throw EnsembleError(
          "cyclic_shift_permutation: qudit dimensions must be homogeneous");
    }
  }
  const Eigen::Index n = product_dim(dims);
  std::vector<Eigen::Index> perm(n);
  for (Eigen::Index idx = 0; idx < n; ++idx) {
    std::vector<int> tuple = fock_tuple(idx, dims);
    std::vector<int> shifted(tuple.size());
    shifted[0] = tuple.back();
    for (std::size_t i = 1; i < tuple.size(); ++i) shifted[i] = tuple[i - 1];
    perm[idx] = fock_index(shifted, dims);
  }
  return perm;
}

ComplexMatrix permutation_matrix(const std::vector<Eigen::Index>& perm) {
  const Eigen::Index n = static_cast<Eigen::Index>(perm.size());
  ComplexMatrix t = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) t(perm[i], i) = 1.0;
  return t;
}

ComplexMatrix conjugate_by_permutation(const ComplexMatrix& m,
                                       const std::vector<Eigen::Index>& perm,
                                       int power) {
  const Eigen::Index n = static_cast<Eigen::Index>(perm.size());
  if (m.rows() != n || m.cols() != n) {
    throw ShapeError("conjugate_by_permutation: dimension mismatch");
  }
  std::vector<Eigen::Index> p(n);
  for (Eigen::Index i = 0; i < n; ++i) p[i] = i;
  for (int k = 0; k < power; ++k) {
    std::vector<Eigen::Index> next(n);
    for (Eigen::Index i = 0; i < n; ++i) next[i] = perm[p[i]];
    p.swap(next);
  }
  ComplexMatrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      out(p[r], p[c]) = m(r, c);
    }
  }
  return out;
}

}  // namespace udsim
