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

#include <initializer_list>
#include <vector>

#include "udsim/types.hpp"

namespace udsim {

/// Kronecker product. Throws DimensionError when the result would exceed
/// kMaxDenseEntries (or the given cap).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::int64_t max_entries = kMaxDenseEntries);

/// Left-to-right fold of kron over the factors; the fixed evaluation order
/// makes repeated products reproducible bit for bit.
ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors,
                       std::int64_t max_entries = kMaxDenseEntries);

/// Column-sum (induced 1-) norm.
double norm_1(const ComplexMatrix& m);

/// Row-sum (induced infinity-) norm.
double norm_inf(const ComplexMatrix& m);

/// Largest singular value, relative accuracy 1e-10. Dense SVD for small
/// matrices, Lanczos on m^dag m above the crossover.
double operator_norm(const ComplexMatrix& m);

/// Same as operator_norm but accepts rectangular blocks.
double spectral_norm(const ComplexMatrix& m);

/// Minimal interface the exponential integrator needs: the action w = M v and
/// an upper bound on ||M||_1 for step-size control.
class LinearMap {
 public:
  virtual ~LinearMap() = default;
  virtual Eigen::Index dim() const = 0;
  virtual void apply(const ComplexVector& in, ComplexVector& out) const = 0;
  virtual double norm_bound() const = 0;
};

class DenseMap final : public LinearMap {
 public:
  explicit DenseMap(const ComplexMatrix& m);
  Eigen::Index dim() const override { return m_->rows(); }
  void apply(const ComplexVector& in, ComplexVector& out) const override;
  double norm_bound() const override { return norm1_; }

 private:
  const ComplexMatrix* m_;  // not owned
  double norm1_;
};

/// w ~= e^{M t} v with ||w - e^{Mt} v||_2 <= tol * ||v||_2. Adaptive-substep
/// truncated Taylor evaluation of the action; substeps halve on slow
/// convergence and grow back when convergence is fast. Throws
/// ConvergenceError (with the time actually reached) on step underflow.
ComplexVector expm_action(const LinearMap& op, const ComplexVector& v,
                          double t, double tol = kDefaultExpmTol);
ComplexVector expm_action(const ComplexMatrix& m, const ComplexVector& v,
                          double t, double tol = kDefaultExpmTol);

struct EigResult {
  ComplexVector values;
  ComplexMatrix right_vectors;  // columns are the right eigenvectors
};

/// Full non-Hermitian eigendecomposition. Left eigenvectors are recoverable
/// by the caller via eig(m.adjoint()) or by inverting right_vectors.
EigResult eig(const ComplexMatrix& m,
              Eigen::Index dim_limit = kSpectralDimLimit);

}  // namespace udsim
