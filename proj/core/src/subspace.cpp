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

#include "udsim/subspace.hpp"

#include <algorithm>
#include <numeric>

#include "udsim/operators.hpp"

namespace udsim {

Eigen::Index SubspaceEncoding::total_dim() const { return product_dim(dims); }

int SubspaceEncoding::n_pairs() const {
  if (flavor != SubspaceFlavor::kDualRail) {
    throw DomainError("n_pairs: encoding is not dual-rail");
  }
  return static_cast<int>(dims.size()) / 2;
}

ComplexMatrix SubspaceEncoding::liouville_projector() const {
  return kron(projector, projector.transpose());
}

namespace {

int tuple_degree(const std::vector<int>& tuple) {
  return std::accumulate(tuple.begin(), tuple.end(), 0);
}

void enumerate_degree_tuples(const std::vector<int>& dims, int k,
                             std::vector<int>& prefix,
                             std::vector<std::vector<int>>& out) {
  const std::size_t pos = prefix.size();
  if (pos == dims.size()) {
    if (k == 0) out.push_back(prefix);
    return;
  }
  int remaining_cap = 0;
  for (std::size_t i = pos + 1; i < dims.size(); ++i)
    remaining_cap += dims[i] - 1;
  for (int a = 0; a < dims[pos]; ++a) {
    if (a > k || k - a > remaining_cap) continue;
    prefix.push_back(a);
    enumerate_degree_tuples(dims, k - a, prefix, out);
    prefix.pop_back();
  }
}

SubspaceEncoding finish_encoding(std::vector<int> dims, int k,
                                 SubspaceFlavor flavor,
                                 std::vector<std::vector<int>> basis) {
  SubspaceEncoding enc;
  enc.dims = std::move(dims);
  enc.degree_k = k;
  enc.flavor = flavor;
  enc.basis = std::move(basis);
  const Eigen::Index n = product_dim(enc.dims);
  enc.basis_indices.reserve(enc.basis.size());
  for (const auto& tuple : enc.basis) {
    enc.basis_indices.push_back(fock_index(tuple, enc.dims));
  }
  enc.projector = ComplexMatrix::Zero(n, n);
  for (Eigen::Index idx : enc.basis_indices) enc.projector(idx, idx) = 1.0;
  return enc;
}

}  // namespace

SubspaceEncoding build_degree_subspace(const std::vector<int>& dims, int k) {
  int cap = 0;
  for (int d : dims) cap += d - 1;
  if (k < 0 || k > cap) {
    throw DomainError("build_degree_subspace: degree " + std::to_string(k) +
                      " leaves an empty basis");
  }
  std::vector<std::vector<int>> basis;
  std::vector<int> prefix;
  enumerate_degree_tuples(dims, k, prefix, basis);
  return finish_encoding(dims, k, SubspaceFlavor::kDegree, std::move(basis));
}

SubspaceEncoding build_dualrail_subspace(int n_physical) {
  if (n_physical <= 0 || n_physical % 2 != 0) {
    throw DomainError("build_dualrail_subspace: need an even qubit count");
  }
  const int pairs = n_physical / 2;
  std::vector<int> dims(n_physical, 2);
  std::vector<std::vector<int>> basis;
  basis.reserve(std::size_t{1} << pairs);
  // logical value 0 -> |01>, 1 -> |10>; lexicographic over physical tuples
  for (std::uint64_t logical = 0; logical < (std::uint64_t{1} << pairs);
       ++logical) {
    std::vector<int> tuple(n_physical);
    for (int p = 0; p < pairs; ++p) {
      const int bit = static_cast<int>((logical >> (pairs - 1 - p)) & 1);
      tuple[2 * p] = bit;
      tuple[2 * p + 1] = 1 - bit;
    }
    basis.push_back(std::move(tuple));
  }
  return finish_encoding(std::move(dims), pairs, SubspaceFlavor::kDualRail,
                         std::move(basis));
}

ComplexMatrix logical_z(const SubspaceEncoding& enc, int logical_index) {
  if (enc.flavor != SubspaceFlavor::kDualRail) {
    throw DomainError("logical_z: encoding is not dual-rail");
  }
  if (logical_index < 0 || logical_index >= enc.n_pairs()) {
    throw DomainError("logical_z: logical index out of range");
  }
  return embed_site(pauli_z(), enc.dims, 2 * logical_index);
}

ComplexMatrix logical_x(const SubspaceEncoding& enc, int logical_index) {
  if (enc.flavor != SubspaceFlavor::kDualRail) {
    throw DomainError("logical_x: encoding is not dual-rail");
  }
  if (logical_index < 0 || logical_index >= enc.n_pairs()) {
    throw DomainError("logical_x: logical index out of range");
  }
  const int a = 2 * logical_index;
  const ComplexMatrix xx = embed_site(pauli_x(), enc.dims, a) *
                           embed_site(pauli_x(), enc.dims, a + 1);
  const ComplexMatrix yy = embed_site(pauli_y(), enc.dims, a) *
                           embed_site(pauli_y(), enc.dims, a + 1);
  return 0.5 * (xx + yy);
}

ComplexMatrix project_into(const SubspaceEncoding& enc,
                           const ComplexMatrix& x) {
  if (x.rows() != enc.total_dim() || x.cols() != enc.total_dim()) {
    throw ShapeError("project_into: operator dimension mismatch");
  }
  return enc.projector * x * enc.projector;
}

ComplexVector project_into(const SubspaceEncoding& enc,
                           const ComplexVector& v) {
  const Eigen::Index n = enc.total_dim();
  if (v.size() != n * n) {
    throw ShapeError("project_into: vector dimension mismatch");
  }
  return vectorize(project_into(enc, devectorize(v, n)));
}

namespace {

// Flat indices of V = S_0 + ... + S_k, ascending (= lexicographic).
std::vector<Eigen::Index> low_degree_indices(const std::vector<int>& dims,
                                             int k) {
  const Eigen::Index n = product_dim(dims);
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (tuple_degree(fock_tuple(i, dims)) <= k) out.push_back(i);
  }
  return out;
}

ComplexMatrix extract(const ComplexMatrix& m,
                      const std::vector<Eigen::Index>& rows,
                      const std::vector<Eigen::Index>& cols) {
  ComplexMatrix out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m(rows[r], cols[c]);
    }
  }
  return out;
}

// True when m maps span(sub) into span(sub): m(i, j) = 0 for j in sub,
// i outside.
bool leaves_invariant(const ComplexMatrix& m,
                      const std::vector<bool>& in_sub) {
  const double tol = 1e-14 * std::max(norm_inf(m), 1e-300);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (!in_sub[static_cast<std::size_t>(j)]) continue;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (in_sub[static_cast<std::size_t>(i)]) continue;
      if (std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

}  // namespace

UdsCertificate verify_uds(const LindbladModel& model,
                          const SubspaceEncoding& enc, double tol) {
  const Eigen::Index n = model.total_dim();
  if (n != enc.total_dim()) {
    throw ShapeError("verify_uds: model and encoding dimensions differ");
  }

  const std::vector<Eigen::Index> v_idx = low_degree_indices(enc.dims,
                                                             enc.degree_k);
  std::vector<bool> in_v(static_cast<std::size_t>(n), false);
  for (Eigen::Index i : v_idx) in_v[static_cast<std::size_t>(i)] = true;

  bool restrictable = true;
  for (const auto& d : model.dissipators) {
    const ComplexMatrix ada = d.op.adjoint() * d.op;
    if (!leaves_invariant(d.op, in_v) || !leaves_invariant(ada, in_v)) {
      restrictable = false;
      break;
    }
  }

  // Dissipator matrix on op(V) plus the positions of the S and V pair bases.
  Eigen::Index nv;
  ComplexMatrix dmat;
  std::vector<Eigen::Index> s_pos;  // positions of S inside the chosen basis
  if (restrictable) {
    nv = static_cast<Eigen::Index>(v_idx.size());
    std::vector<Eigen::Index> pos_of(static_cast<std::size_t>(n), -1);
    for (std::size_t p = 0; p < v_idx.size(); ++p) {
      pos_of[static_cast<std::size_t>(v_idx[p])] =
          static_cast<Eigen::Index>(p);
    }
    const ComplexMatrix eye = identity(nv);
    dmat = ComplexMatrix::Zero(nv * nv, nv * nv);
    for (const auto& d : model.dissipators) {
      if (d.rate == 0.0) continue;
      const ComplexMatrix a = extract(d.op, v_idx, v_idx);
      const ComplexMatrix ada = a.adjoint() * a;
      dmat += d.rate * (kron(a, a.conjugate()) -
                        0.5 * (kron(ada, eye) + kron(eye, ada.transpose())));
    }
    for (Eigen::Index idx : enc.basis_indices) {
      s_pos.push_back(pos_of[static_cast<std::size_t>(idx)]);
    }
  } else {
    nv = n;
    std::vector<double> rates;
    for (const auto& d : model.dissipators) rates.push_back(d.rate);
    dmat = assemble_dissipator(model, rates);
    s_pos.assign(enc.basis_indices.begin(), enc.basis_indices.end());
    // in the full space, op(V) columns are selected below through pair lists
  }

  // pair index lists inside the dmat basis
  std::vector<Eigen::Index> s_pairs;
  s_pairs.reserve(s_pos.size() * s_pos.size());
  for (Eigen::Index p : s_pos) {
    for (Eigen::Index q : s_pos) s_pairs.push_back(p * nv + q);
  }
  std::vector<Eigen::Index> v_all;
  if (restrictable) {
    v_all.resize(static_cast<std::size_t>(nv));
    std::iota(v_all.begin(), v_all.end(), Eigen::Index{0});
  } else {
    v_all = v_idx;
  }
  std::vector<bool> is_s_pair(static_cast<std::size_t>(nv * nv), false);
  for (Eigen::Index sp : s_pairs) is_s_pair[static_cast<std::size_t>(sp)] = true;
  std::vector<Eigen::Index> rest_pairs;
  for (Eigen::Index p : v_all) {
    for (Eigen::Index q : v_all) {
      const Eigen::Index pair = p * nv + q;
      if (!is_s_pair[static_cast<std::size_t>(pair)]) rest_pairs.push_back(pair);
    }
  }

  UdsCertificate cert;
  cert.tolerance = tol;

  const ComplexMatrix block_ss = extract(dmat, s_pairs, s_pairs);
  cert.gamma = -block_ss.diagonal().real().mean();
  ComplexMatrix scalar_resid = block_ss;
  scalar_resid.diagonal().array() += cert.gamma;
  cert.residual_scalar = spectral_norm(scalar_resid);
  cert.residual_leak = rest_pairs.empty()
                           ? 0.0
                           : spectral_norm(extract(dmat, s_pairs, rest_pairs));

  // eigenvalue of the unweighted sum of A^dag A on S
  ComplexMatrix gsum = ComplexMatrix::Zero(n, n);
  for (const auto& d : model.dissipators) gsum += d.op.adjoint() * d.op;
  const ComplexMatrix gs = extract(gsum, enc.basis_indices, enc.basis_indices);
  cert.c_scalar = gs.diagonal().real().mean();

  cert.holds = cert.residual_scalar <= tol && cert.residual_leak <= tol;
  return cert;
}

DfsReport verify_dfs(const LindbladModel& model, const SubspaceEncoding& enc,
                     double tol) {
  const Eigen::Index n = model.total_dim();
  if (n != enc.total_dim()) {
    throw ShapeError("verify_dfs: model and encoding dimensions differ");
  }
  DfsReport report;
  report.holds = true;

  for (std::size_t i = 0; i < model.dissipators.size(); ++i) {
    const ComplexMatrix& a = model.dissipators[i].op;
    Complex c_first(0, 0);
    for (std::size_t j = 0; j < enc.basis_indices.size(); ++j) {
      const Eigen::Index col = enc.basis_indices[j];
      const ComplexVector w = a.col(col);
      const Complex c = w(col);
      ComplexVector resid = w;
      resid(col) = Complex(0, 0);
      if (resid.norm() > tol) {
        report.holds = false;
        report.diagnostic = "A_" + std::to_string(model.dissipators[i].label) +
                            " does not fix basis vector " + std::to_string(j);
        report.violating_operator = model.dissipators[i].label;
        report.violating_basis_vector = static_cast<Eigen::Index>(j);
        return report;
      }
      if (j == 0) {
        c_first = c;
      } else if (std::abs(c - c_first) > tol) {
        report.holds = false;
        report.diagnostic = "A_" + std::to_string(model.dissipators[i].label) +
                            " eigenvalue differs on basis vector " +
                            std::to_string(j);
        report.violating_operator = model.dissipators[i].label;
        report.violating_basis_vector = static_cast<Eigen::Index>(j);
        return report;
      }
    }
  }

  // Karasik condition: the weighted sum acts as a scalar on S
  ComplexMatrix weighted = ComplexMatrix::Zero(n, n);
  for (const auto& d : model.dissipators) {
    weighted += d.rate * (d.op.adjoint() * d.op);
  }
  const ComplexMatrix ws = project_into(enc, weighted);
  const double scalar = ws.diagonal().real().mean();
  ComplexMatrix resid = ws;
  for (Eigen::Index idx : enc.basis_indices) resid(idx, idx) -= scalar;
  if (spectral_norm(resid) > tol * std::max(1.0, std::abs(scalar))) {
    report.holds = false;
    report.diagnostic = "weighted sum of A^dag A is not scalar on S";
  }
  return report;
}

}  // namespace udsim
