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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "support/oracles.hpp"
#include "udsim/circuit.hpp"
#include "udsim/noise.hpp"
#include "udsim/operators.hpp"

using namespace udsim;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TfimParams sample_params() {
  TfimParams params;
  params.j_coupling = Eigen::MatrixXd::Zero(2, 2);
  params.j_coupling(0, 1) = params.j_coupling(1, 0) = 0.7;
  params.h_field = Eigen::VectorXd::Zero(2);
  params.h_field << 0.9, -0.5;
  return params;
}

ComplexMatrix circuit_unitary(const TrotterCircuit& circuit) {
  const Eigen::Index dim = Eigen::Index{1} << circuit.n_qubits;
  ComplexMatrix u = identity(dim);
  for (int step = 0; step < circuit.steps; ++step) {
    for (const CircuitLayer& layer : circuit.layers) {
      u = layer.unitary * u;
    }
  }
  return u;
}

ComplexMatrix dense_exponential(const ComplexMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  ComplexVector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(Complex(0, -es.eigenvalues()(i) * t));
  }
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("trivial parameters give the identity circuit") {
  const auto enc = build_dualrail_subspace(4);
  TfimParams params;
  params.j_coupling = Eigen::MatrixXd::Zero(2, 2);
  params.h_field = Eigen::VectorXd::Zero(2);
  const TrotterCircuit circuit = trotterize_tfim(params, enc, 1.0, 20);
  CHECK(max_abs(ComplexMatrix(circuit_unitary(circuit) - identity(16))) <
        1e-12);
}

TEST_CASE("layers are unitary and commute with the dual-rail projector") {
  const auto enc = build_dualrail_subspace(4);
  const TfimParams params = sample_params();
  for (int shift : {0, 1, 3}) {
    const TrotterCircuit circuit =
        trotterize_tfim(params, enc, 1.0, 20, {}, shift);
    const std::vector<Eigen::Index> perm = cyclic_shift_permutation(enc.dims);
    const ComplexMatrix projector =
        conjugate_by_permutation(enc.projector, perm, shift);
    for (const CircuitLayer& layer : circuit.layers) {
      CHECK(max_abs(ComplexMatrix(layer.unitary * layer.unitary.adjoint() -
                                  identity(16))) < 1e-12);
      CHECK(max_abs(ComplexMatrix(layer.unitary * projector -
                                  projector * layer.unitary)) < 1e-12);
    }
  }
}

TEST_CASE("circuit unitary converges to the dense exponential") {
  const auto enc = build_dualrail_subspace(4);
  const TfimParams params = sample_params();
  const ComplexMatrix h = build_tfim_hamiltonian(params, enc);
  const ComplexMatrix target = dense_exponential(h, 1.0);
  std::vector<double> errors;
  for (int steps : {20, 40, 80}) {
    const TrotterCircuit circuit = trotterize_tfim(params, enc, 1.0, steps);
    errors.push_back(max_abs(ComplexMatrix(circuit_unitary(circuit) - target)));
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(2.0).epsilon(0.2));
  CHECK(errors[1] / errors[2] == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("noiseless evolution is the pure unitary channel") {
  CounterRng rng(90);
  const auto enc = build_dualrail_subspace(4);
  const TfimParams params = sample_params();
  const TrotterCircuit circuit = trotterize_tfim(params, enc, 1.0, 10);
  const ComplexMatrix rho0 = udsim::testing::random_density(16, rng);
  const ComplexMatrix rho = evolve_density(circuit, rho0);
  const ComplexMatrix u = circuit_unitary(circuit);
  CHECK(max_abs(ComplexMatrix(rho - u * rho0 * u.adjoint())) < 1e-12);
}

TEST_CASE("noisy evolution preserves the trace") {
  CounterRng rng(91);
  const auto enc = build_dualrail_subspace(4);
  const TrotterCircuit circuit = trotterize_tfim(
      sample_params(), enc, 1.0, 20, {0.01, 0.012, 0.009, 0.011});
  const ComplexMatrix rho0 = udsim::testing::random_density(16, rng);
  const ComplexMatrix rho = evolve_density(circuit, rho0);
  CHECK(std::abs(rho.trace() - rho0.trace()) < 1e-10);
}

TEST_CASE("discrete channel evolution approaches the Lindblad flow") {
  const auto enc = build_dualrail_subspace(4);
  const TfimParams params = sample_params();
  const ComplexMatrix h = build_tfim_hamiltonian(params, enc);
  const std::vector<double> rates{0.011, 0.008, 0.01, 0.012};
  const LindbladModel model = relaxation_model(4, rates, h);

  ComplexMatrix rho0 = ComplexMatrix::Zero(16, 16);
  rho0(fock_index({0, 1, 0, 1}, enc.dims), fock_index({0, 1, 0, 1}, enc.dims)) =
      1.0;
  const LindbladAction action(model);
  const ComplexVector ref = expm_action(action, vectorize(rho0), 1.0, 1e-13);
  const ComplexMatrix rho_ref = devectorize(ref, 16);

  std::vector<double> errors;
  for (int steps : {20, 40, 80}) {
    const TrotterCircuit circuit =
        trotterize_tfim(params, enc, 1.0, steps, rates);
    errors.push_back(max_abs(ComplexMatrix(evolve_density(circuit, rho0) -
                                           rho_ref)));
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(2.0).epsilon(0.3));
  CHECK(errors[1] / errors[2] == doctest::Approx(2.0).epsilon(0.3));
}

TEST_CASE("sampling a pure dual-rail state accepts every shot") {
  const auto enc = build_dualrail_subspace(4);
  TfimParams params;
  params.j_coupling = Eigen::MatrixXd::Zero(2, 2);
  params.h_field = Eigen::VectorXd::Zero(2);
  const TrotterCircuit circuit = trotterize_tfim(params, enc, 1.0, 5);
  ComplexMatrix rho0 = ComplexMatrix::Zero(16, 16);
  rho0(fock_index({0, 1, 0, 1}, enc.dims), fock_index({0, 1, 0, 1}, enc.dims)) =
      1.0;
  ZBasisSpec spec;
  spec.value_qubit = 0;
  spec.parity_pairs = {{0, 1}, {2, 3}};
  spec.mode = ZEstimatorMode::kPostSelectNormalized;
  const ShotRecord rec = sample_measurements(circuit, rho0, spec, 5000, 7);
  CHECK(rec.accepted == rec.n_shots);
  CHECK(rec.estimate == doctest::Approx(1.0));  // qubit 0 reads |0>
  CHECK(rec.acceptance_rate == doctest::Approx(1.0));
}

TEST_CASE("identical seeds give identical shot records") {
  const auto enc = build_dualrail_subspace(4);
  const TrotterCircuit circuit = trotterize_tfim(
      sample_params(), enc, 1.0, 20, {0.01, 0.02, 0.015, 0.012});
  ComplexMatrix rho0 = ComplexMatrix::Zero(16, 16);
  rho0(fock_index({0, 1, 0, 1}, enc.dims), fock_index({0, 1, 0, 1}, enc.dims)) =
      1.0;
  ZBasisSpec spec;
  spec.value_qubit = 0;
  spec.parity_pairs = {{0, 1}, {2, 3}};
  spec.mode = ZEstimatorMode::kFilteredRescaled;
  spec.rescale = 1.1;
  const ShotRecord a = sample_measurements(circuit, rho0, spec, 100000, 555);
  const ShotRecord b = sample_measurements(circuit, rho0, spec, 100000, 555);
  CHECK(a.counts == b.counts);
  CHECK(a.estimate == b.estimate);
  const ShotRecord c = sample_measurements(circuit, rho0, spec, 100000, 556);
  CHECK(a.counts != c.counts);
  CHECK_THROWS_AS(sample_measurements(circuit, rho0, spec, 0, 1), DomainError);
}

TEST_CASE("acceptance counts follow the binomial statistics") {
  const auto enc = build_dualrail_subspace(4);
  const TrotterCircuit circuit = trotterize_tfim(
      sample_params(), enc, 1.0, 20, std::vector<double>(4, 0.05));
  ComplexMatrix rho0 = ComplexMatrix::Zero(16, 16);
  rho0(fock_index({0, 1, 0, 1}, enc.dims), fock_index({0, 1, 0, 1}, enc.dims)) =
      1.0;
  ZBasisSpec spec;
  spec.value_qubit = 0;
  spec.parity_pairs = {{0, 1}, {2, 3}};
  spec.mode = ZEstimatorMode::kFilteredRescaled;

  const std::uint64_t shots = 2000;
  const int n_seeds = 100;
  std::uint64_t accepted_total = 0;
  double p_exact = 0.0;
  for (int s = 0; s < n_seeds; ++s) {
    const ShotRecord rec = sample_measurements(
        circuit, rho0, spec, shots, derive_seed(31337, s));
    accepted_total += rec.accepted;
    p_exact = rec.acceptance_rate;
  }
  const double n_total = static_cast<double>(shots) * n_seeds;
  const double sigma = std::sqrt(n_total * p_exact * (1 - p_exact));
  CHECK(std::abs(static_cast<double>(accepted_total) - n_total * p_exact) <
        3 * sigma);
}

TEST_CASE("sampled estimates converge at the square-root rate") {
  const auto enc = build_dualrail_subspace(4);
  const TrotterCircuit circuit = trotterize_tfim(
      sample_params(), enc, 1.0, 20, std::vector<double>(4, 0.02));
  ComplexMatrix rho0 = ComplexMatrix::Zero(16, 16);
  rho0(fock_index({0, 1, 0, 1}, enc.dims), fock_index({0, 1, 0, 1}, enc.dims)) =
      1.0;
  const ComplexMatrix rho_final = evolve_density(circuit, rho0);
  ZBasisSpec spec;
  spec.value_qubit = 0;
  spec.mode = ZEstimatorMode::kRawZ;
  double exact = 0.0;
  for (Eigen::Index b = 0; b < 16; ++b) {
    const int bit = static_cast<int>((b >> 3) & 1);
    exact += rho_final(b, b).real() * (bit == 0 ? 1.0 : -1.0);
  }
  for (std::uint64_t shots : {std::uint64_t{1000}, std::uint64_t{100000}}) {
    double err_sum = 0.0;
    const int n_seeds = 30;
    for (int s = 0; s < n_seeds; ++s) {
      const ShotRecord rec = sample_measurements(
          circuit, rho0, spec, shots, derive_seed(999, s, shots));
      err_sum += std::abs(rec.estimate - exact);
    }
    const double mean_err = err_sum / n_seeds;
    // mean absolute error ~ sigma sqrt(2/pi) / sqrt(N); allow generous slack
    const double scale = 1.0 / std::sqrt(static_cast<double>(shots));
    CHECK(mean_err < 4.0 * scale);
    CHECK(mean_err > 0.05 * scale);
  }
}

TEST_CASE("pauli-term sampling agrees with the exact expectation") {
  const auto enc = build_dualrail_subspace(4);
  const TrotterCircuit circuit = trotterize_tfim(
      sample_params(), enc, 1.0, 20, std::vector<double>(4, 0.02));
  ComplexMatrix rho0 = ComplexMatrix::Zero(16, 16);
  rho0(fock_index({0, 1, 0, 1}, enc.dims), fock_index({0, 1, 0, 1}, enc.dims)) =
      1.0;
  // X_L(0) projected: four Pauli terms with weight one
  PauliTermsSpec spec;
  spec.terms = {PauliTerm{0.25, {1, 1, 0, 0}}, PauliTerm{0.25, {2, 2, 0, 0}},
                PauliTerm{-0.25, {1, 1, 3, 3}}, PauliTerm{-0.25, {2, 2, 3, 3}}};
  const ComplexMatrix rho_final = evolve_density(circuit, rho0);
  double exact = 0.0;
  for (const auto& term : spec.terms) {
    exact += term.coeff *
             (pauli_string_matrix(term.codes).transpose().cwiseProduct(
                  rho_final))
                 .sum()
                 .real();
  }
  const ShotRecord rec = sample_measurements(circuit, rho0, spec, 400000, 4242);
  CHECK(std::abs(rec.estimate - exact) < 4 * rec.std_error + 1e-9);
}
