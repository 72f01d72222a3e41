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

#include <string>
#include <vector>

#include "udsim/liouville.hpp"
#include "udsim/types.hpp"

namespace udsim {

enum class SubspaceFlavor { kDegree, kDualRail };

/// Ordered basis of a degree-k (or dual-rail) subspace with its projector.
/// Basis tuples are lexicographic and the ordering is fixed forever; shift
/// and permutation operators are expressed against it.
struct SubspaceEncoding {
  std::vector<int> dims;
  int degree_k = 0;
  SubspaceFlavor flavor = SubspaceFlavor::kDegree;
  std::vector<std::vector<int>> basis;      // Fock tuples
  std::vector<Eigen::Index> basis_indices;  // flattened, ascending
  ComplexMatrix projector;                  // P on the register space

  Eigen::Index total_dim() const;
  Eigen::Index rank() const { return static_cast<Eigen::Index>(basis.size()); }
  int n_pairs() const;  // dual-rail only

  /// P (x) P^T, built on demand (N^2 x N^2).
  ComplexMatrix liouville_projector() const;
};

SubspaceEncoding build_degree_subspace(const std::vector<int>& dims, int k);
SubspaceEncoding build_dualrail_subspace(int n_physical);

/// Dual-rail logical operators synthesized by index arithmetic:
/// Z_L(i) = Z_{2i}, X_L(i) = (X_{2i} X_{2i+1} + Y_{2i} Y_{2i+1}) / 2.
ComplexMatrix logical_z(const SubspaceEncoding& enc, int logical_index);
ComplexMatrix logical_x(const SubspaceEncoding& enc, int logical_index);

/// P X P for operators; (P (x) P^T) v for vectorized states.
ComplexMatrix project_into(const SubspaceEncoding& enc, const ComplexMatrix& x);
ComplexVector project_into(const SubspaceEncoding& enc, const ComplexVector& v);

struct UdsCertificate {
  bool holds = false;
  double gamma = 0.0;           // uniform rate on the subspace block
  double residual_scalar = 0.0; // || P D P + gamma P || on op(V)
  double residual_leak = 0.0;   // || P D (Q - P) || on op(V)
  double c_scalar = 0.0;        // eigenvalue of sum_i A_i^dag A_i on S
  double tolerance = kDefaultCertTol;
};

/// Checks the uniform-decay condition of the dissipator on the encoding, with
/// the leak residual restricted to op(V), V = direct sum of S_i for i <= k.
/// Runs in the V-restricted basis when every jump operator (and A^dag A)
/// leaves V invariant; falls back to the full Liouville space otherwise.
UdsCertificate verify_uds(const LindbladModel& model,
                          const SubspaceEncoding& enc,
                          double tol = kDefaultCertTol);

struct DfsReport {
  bool holds = false;
  std::string diagnostic;
  int violating_operator = -1;
  Eigen::Index violating_basis_vector = -1;
};

/// True iff every basis vector is a common eigenvector of all jump operators
/// with matching eigenvalues and the rate-weighted sum of A^dag A acts as a
/// scalar on the subspace.
DfsReport verify_dfs(const LindbladModel& model, const SubspaceEncoding& enc,
                     double tol = kDefaultCertTol);

}  // namespace udsim
