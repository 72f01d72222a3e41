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

#include "udsim/noise.hpp"

#include <cmath>

#include "udsim/operators.hpp"

namespace udsim {

LindbladModel relaxation_model(int n, const std::vector<double>& rates,
                               const ComplexMatrix& hamiltonian) {
  if (static_cast<int>(rates.size()) != n) {
    throw ShapeError("relaxation_model: expected " + std::to_string(n) +
                     " rates");
  }
  return qudit_damping_model(std::vector<int>(n, 2), rates, hamiltonian);
}

LindbladModel qudit_damping_model(const std::vector<int>& dims,
                                  const std::vector<double>& rates,
                                  const ComplexMatrix& hamiltonian) {
  if (rates.size() != dims.size()) {
    throw ShapeError("qudit_damping_model: one rate per qudit required");
  }
  std::vector<Dissipator> dissipators;
  dissipators.reserve(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    Dissipator d;
    d.rate = rates[i];
    d.label = static_cast<int>(i);
    const ComplexMatrix local = annihilation(dims[i]);
    d.op = embed_site(local, dims, static_cast<int>(i));
    d.factors = {LocalFactor{static_cast<int>(i), local}};
    dissipators.push_back(std::move(d));
  }
  return make_lindblad_model(dims, hamiltonian, std::move(dissipators));
}

LindbladModel correlated_decay_model(const std::vector<int>& dims,
                                     const std::vector<double>& pair_rates,
                                     const ComplexMatrix& hamiltonian,
                                     bool include_diagonal) {
  const int n = static_cast<int>(dims.size());
  if (pair_rates.size() != static_cast<std::size_t>(n) * n) {
    throw ShapeError("correlated_decay_model: pair_rates must be n x n");
  }
  std::vector<Dissipator> dissipators;
  int label = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j && !include_diagonal) continue;
      Dissipator d;
      d.rate = pair_rates[static_cast<std::size_t>(i) * n + j];
      d.label = label++;
      const ComplexMatrix ai = annihilation(dims[i]);
      if (i == j) {
        const ComplexMatrix local = ai * ai;
        d.op = embed_site(local, dims, i);
        d.factors = {LocalFactor{i, local}};
      } else {
        const ComplexMatrix aj = annihilation(dims[j]);
        d.op = embed_site(ai, dims, i) * embed_site(aj, dims, j);
        d.factors = {LocalFactor{i, ai}, LocalFactor{j, aj}};
      }
      dissipators.push_back(std::move(d));
    }
  }
  return make_lindblad_model(dims, hamiltonian, std::move(dissipators));
}

QuantumChannel damping_channel(int d, double eta, int target_qudit) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw DomainError("damping_channel: eta must lie in (0, 1]");
  }
  if (d < 2) throw DomainError("damping_channel: local dimension must be >= 2");
  QuantumChannel channel;
  channel.target_qudit = target_qudit;
  channel.parameter = eta;
  channel.kraus_ops.reserve(d);
  for (int s = 0; s < d; ++s) {
    ComplexMatrix k = ComplexMatrix::Zero(d, d);
    for (int r = s; r < d; ++r) {
      // binomial coefficient through lgamma; exact enough for d <= 16
      const double log_binom = std::lgamma(r + 1.0) - std::lgamma(s + 1.0) -
                               std::lgamma(r - s + 1.0);
      const double amp2 = std::exp(log_binom) *
                          std::pow(eta, static_cast<double>(r - s)) *
                          std::pow(1.0 - eta, static_cast<double>(s));
      k(r - s, r) = std::sqrt(amp2);
    }
    channel.kraus_ops.push_back(std::move(k));
  }
  return channel;
}

ComplexMatrix apply_channel(const QuantumChannel& channel,
                            const ComplexMatrix& rho,
                            const std::vector<int>& dims) {
  const Eigen::Index n = product_dim(dims);
  if (rho.rows() != n || rho.cols() != n) {
    throw ShapeError("apply_channel: state does not match the register");
  }
  const int site = channel.target_qudit;
  if (site < 0 || site >= static_cast<int>(dims.size())) {
    throw DomainError("apply_channel: target qudit out of range");
  }
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  ComplexMatrix tmp1, tmp2;
  for (const ComplexMatrix& k : channel.kraus_ops) {
    left_mul_site(rho, k, dims, site, tmp1);
    right_mul_site(tmp1, k.adjoint(), dims, site, tmp2);
    out += tmp2;
  }
  return out;
}

}  // namespace udsim
