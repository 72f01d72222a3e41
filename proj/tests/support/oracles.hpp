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

// Independent reference implementations used only by tests. They avoid the
// library's integrator, superoperator assembly and spectral code on purpose:
// the RK4 oracle works on the Lindblad right-hand side in matrix form, and
// the Taylor oracle sums the series on the dense matrix directly.

#pragma once

#include <vector>

#include "udsim/liouville.hpp"
#include "udsim/rng.hpp"
#include "udsim/types.hpp"

namespace udsim::testing {

inline ComplexMatrix lindblad_rhs(const LindbladModel& model,
                                  const ComplexMatrix& rho) {
  ComplexMatrix out =
      Complex(0, -1) * (model.hamiltonian * rho - rho * model.hamiltonian);
  for (const auto& d : model.dissipators) {
    if (d.rate == 0.0) continue;
    const ComplexMatrix ada = d.op.adjoint() * d.op;
    out += d.rate * (d.op * rho * d.op.adjoint() -
                     0.5 * (ada * rho + rho * ada));
  }
  return out;
}

/// Classic fixed-step RK4 on rho' = L(rho).
inline ComplexMatrix rk4_evolve(const LindbladModel& model,
                                const ComplexMatrix& rho0, double t,
                                int n_steps) {
  ComplexMatrix rho = rho0;
  const double h = t / n_steps;
  for (int s = 0; s < n_steps; ++s) {
    const ComplexMatrix k1 = lindblad_rhs(model, rho);
    const ComplexMatrix k2 = lindblad_rhs(model, rho + 0.5 * h * k1);
    const ComplexMatrix k3 = lindblad_rhs(model, rho + 0.5 * h * k2);
    const ComplexMatrix k4 = lindblad_rhs(model, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

/// Plain Taylor series for e^{m t} v; adequate for ||m t|| up to ~10.
inline ComplexVector taylor_expm_vector(const ComplexMatrix& m,
                                        const ComplexVector& v, double t,
                                        int max_terms = 120) {
  ComplexVector acc = v;
  ComplexVector term = v;
  for (int j = 1; j <= max_terms; ++j) {
    term = (t / j) * (m * term);
    acc += term;
    if (term.norm() <= 1e-18 * acc.norm()) break;
  }
  return acc;
}

inline ComplexMatrix random_matrix(Eigen::Index n, CounterRng& rng,
                                   double scale = 1.0) {
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = scale * Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    }
  }
  return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, CounterRng& rng,
                                      double scale = 1.0) {
  const ComplexMatrix m = random_matrix(n, rng, scale);
  return 0.5 * (m + ComplexMatrix(m.adjoint()));
}

inline ComplexMatrix random_density(Eigen::Index n, CounterRng& rng) {
  const ComplexMatrix m = random_matrix(n, rng);
  ComplexMatrix rho = m * m.adjoint();
  rho /= rho.trace();
  return rho;
}

}  // namespace udsim::testing
