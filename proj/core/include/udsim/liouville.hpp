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

#include <optional>
#include <vector>

#include "udsim/tensor.hpp"
#include "udsim/types.hpp"

namespace udsim {

/// Jump operators that factor into single-site pieces carry them along; the
/// generator action then avoids full-register products.
struct LocalFactor {
  int site;
  ComplexMatrix local;
};

struct Dissipator {
  ComplexMatrix op;
  double rate = 0.0;
  int label = 0;
  std::vector<LocalFactor> factors;  // empty: apply op densely
};

/// gamma_i = mean_rate + deviations[i].
struct RateSplit {
  double mean_rate = 0.0;
  std::vector<double> deviations;
  double max_abs_deviation = 0.0;
};

struct LindbladModel {
  std::vector<int> dims;
  ComplexMatrix hamiltonian;
  std::vector<Dissipator> dissipators;
  RateSplit split;

  Eigen::Index total_dim() const;
};

RateSplit compute_rate_split(const std::vector<double>& rates);

/// Validates Hermiticity of H, nonnegative rates and dimension agreement,
/// fills the rate split, and returns the model.
LindbladModel make_lindblad_model(std::vector<int> dims, ComplexMatrix h,
                                  std::vector<Dissipator> dissipators);

/// Row stacking: |rho>> entry (i*N + j) = rho(i, j).
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix devectorize(const ComplexVector& v, Eigen::Index n);

/// Dense N^2 x N^2 superoperator
///   L = -i(H (x) I - I (x) H^T)
///       + sum_i gamma_i (A_i (x) A_i^* - 1/2 (A_i^dag A_i (x) I + I (x) A_i^T A_i^*)).
ComplexMatrix assemble_liouvillian(const LindbladModel& model);

/// Dissipator-only superoperator with the given rates substituted, so the
/// mean/deviation pieces D0 and L1 can be assembled separately.
ComplexMatrix assemble_dissipator(const LindbladModel& model,
                                  const std::vector<double>& rates_override);

/// <<O|v>> = tr(O^dag devectorize(v)). The imaginary part is returned, not
/// dropped; for Hermitian O on a physical state it stays below 1e-10.
Complex expectation(const ComplexMatrix& observable,
                    const ComplexVector& state_vec);

/// Expectation through the bi-orthonormal spectral sum of Eq. (2):
/// sum_a e^{lambda_a t} <<l_a|rho0>> <<O|r_a>>. Throws SpectralError when the
/// eigenbasis is too ill-conditioned to bi-orthonormalize; callers fall back
/// to the integrator path.
std::vector<Complex> spectral_expectation(const ComplexMatrix& liouvillian,
                                          const ComplexMatrix& rho0,
                                          const ComplexMatrix& observable,
                                          const std::vector<double>& times);

/// The Lindblad generator as a linear map on vectorized states, applied in
/// matrix form (dense N x N products, single-site fast paths). Identical
/// operator to assemble_liouvillian(model), without materializing it.
class LindbladAction final : public LinearMap {
 public:
  explicit LindbladAction(const LindbladModel& model);

  Eigen::Index dim() const override { return n_ * n_; }
  void apply(const ComplexVector& in, ComplexVector& out) const override;
  double norm_bound() const override { return norm_bound_; }

  Eigen::Index hilbert_dim() const { return n_; }

 private:
  struct Jump {
    double rate;
    ComplexMatrix op;  // unscaled A
    std::vector<LocalFactor> factors;
  };

  Eigen::Index n_;
  std::vector<int> dims_;
  ComplexMatrix h_;
  std::vector<Jump> jumps_;
  ComplexMatrix gsum_;       // sum_i gamma_i A_i^dag A_i
  bool gsum_diagonal_ = false;
  RealVector gdiag_;
  double norm_bound_ = 0.0;
};

/// Left/right multiplication by a single-site operator, used by the
/// structured generator action. Exposed for reuse and testing.
void left_mul_site(const ComplexMatrix& in, const ComplexMatrix& local,
                   const std::vector<int>& dims, int site, ComplexMatrix& out);
void right_mul_site(const ComplexMatrix& in, const ComplexMatrix& local,
                    const std::vector<int>& dims, int site, ComplexMatrix& out);

}  // namespace udsim
