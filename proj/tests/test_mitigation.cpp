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

#include "support/oracles.hpp"
#include "udsim/circuit.hpp"
#include "udsim/mitigation.hpp"
#include "udsim/noise.hpp"
#include "udsim/operators.hpp"

using namespace udsim;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

struct Fixture {
  SubspaceEncoding enc;
  ComplexMatrix h;
  ComplexMatrix rho0;
  ComplexMatrix obs;
  std::vector<int> dims;

  explicit Fixture(int n, std::uint64_t seed = 1000) {
    enc = build_dualrail_subspace(n);
    dims = enc.dims;
    CounterRng rng(seed);
    const int nl = n / 2;
    h = ComplexMatrix::Zero(enc.total_dim(), enc.total_dim());
    for (int i = 0; i < nl; ++i) {
      for (int j = i + 1; j < nl; ++j) {
        h += rng.uniform(-1, 1) * (logical_z(enc, i) * logical_z(enc, j));
      }
      h += 0.5 * rng.uniform(-1, 1) * logical_x(enc, i);
    }
    std::vector<int> zero_logical(n);
    for (int q = 0; q < n; ++q) zero_logical[q] = q % 2;
    const Eigen::Index idx = fock_index(zero_logical, dims);
    rho0 = ComplexMatrix::Zero(enc.total_dim(), enc.total_dim());
    rho0(idx, idx) = 1.0;
    obs = project_into(enc, logical_z(enc, 0));
  }

  LindbladModel model(const std::vector<double>& rates) const {
    return relaxation_model(static_cast<int>(dims.size()), rates, h);
  }

  double coherent(double t) const {
    const LindbladModel clean =
        relaxation_model(static_cast<int>(dims.size()),
                         std::vector<double>(dims.size(), 0.0), h);
    const LindbladAction action(clean);
    const ComplexVector v = expm_action(action, vectorize(rho0), t, 1e-12);
    return expectation(obs, v).real();
  }
};

}  // namespace

TEST_CASE("shift ensemble invariants") {
  Fixture fx(4);
  const LindbladModel model = fx.model(std::vector<double>(4, 0.01));
  const ShiftEnsemble ensemble =
      make_shift_ensemble(model, fx.rho0, fx.obs);
  CHECK(ensemble.order == 4);

  // T^n = I exactly
  std::vector<Eigen::Index> p(16);
  for (Eigen::Index i = 0; i < 16; ++i) p[i] = i;
  for (int k = 0; k < 4; ++k) {
    std::vector<Eigen::Index> next(16);
    for (Eigen::Index i = 0; i < 16; ++i) next[i] = ensemble.perm[p[i]];
    p.swap(next);
  }
  for (Eigen::Index i = 0; i < 16; ++i) CHECK(p[i] == i);

  // T is a unitary permutation
  CHECK(max_abs(ComplexMatrix(ensemble.shift_matrix *
                                  ensemble.shift_matrix.adjoint() -
                              identity(16))) == 0.0);

  // T commutes with the degree-k projector
  const auto degree = build_degree_subspace(fx.dims, 2);
  CHECK(max_abs(ComplexMatrix(ensemble.shift_matrix * degree.projector -
                              degree.projector * ensemble.shift_matrix)) ==
        0.0);

  // T sigma_i^- T^dag = sigma_{i+1}^-
  for (int i = 0; i < 4; ++i) {
    const ComplexMatrix lhs = conjugate_by_permutation(
        embed_site(sigma_minus(), fx.dims, i), ensemble.perm, 1);
    const ComplexMatrix rhs =
        embed_site(sigma_minus(), fx.dims, (i + 1) % 4);
    CHECK(max_abs(ComplexMatrix(lhs - rhs)) == 0.0);
  }
}

TEST_CASE("ensemble rejects families that are not shift-closed") {
  Fixture fx(4);
  std::vector<Dissipator> dissipators;
  Dissipator d;
  d.op = embed_site(sigma_minus(), fx.dims, 0);
  d.rate = 0.01;
  d.label = 0;
  dissipators.push_back(d);
  const LindbladModel lopsided =
      make_lindblad_model(fx.dims, fx.h, std::move(dissipators));
  CHECK_THROWS_AS(make_shift_ensemble(lopsided, fx.rho0, fx.obs),
                  EnsembleError);
}

TEST_CASE("shift-sum annihilation of the deviation generator") {
  Fixture fx(4);
  CounterRng rng(80);
  std::vector<double> rates;
  for (int i = 0; i < 4; ++i) rates.push_back(1e-2 + 1e-3 * rng.gaussian());
  const LindbladModel model = fx.model(rates);
  const ComplexMatrix l1 =
      assemble_dissipator(model, model.split.deviations);
  const ShiftEnsemble ensemble = make_shift_ensemble(model, fx.rho0, fx.obs);
  const ComplexMatrix t_liouville =
      kron(ensemble.shift_matrix, ensemble.shift_matrix.conjugate());
  ComplexMatrix sum = ComplexMatrix::Zero(256, 256);
  ComplexMatrix tj = identity(256);
  for (int j = 0; j < 4; ++j) {
    sum += tj.adjoint() * l1 * tj;
    tj = t_liouville * tj;
  }
  CHECK(max_abs(sum) < 1e-12);
}

TEST_CASE("uds_estimate with equal rates recovers the coherent value") {
  Fixture fx(4);
  const double gbar = 0.01;
  const LindbladModel model = fx.model(std::vector<double>(4, gbar));
  const UdsCertificate cert = verify_uds(model, fx.enc);
  REQUIRE(cert.holds);
  for (double t : {0.0, 2.0, 7.0}) {
    const EstimatorResult res =
        uds_estimate(model, fx.enc, fx.rho0, fx.obs, t, cert);
    CHECK(std::abs(res.rescaled_value - fx.coherent(t)) <= 1e-8);
    if (t == 0.0) {
      CHECK(res.raw_value ==
            doctest::Approx((fx.obs.adjoint() * fx.rho0).trace().real()));
      CHECK(res.rescaled_value == doctest::Approx(res.raw_value));
    }
  }
}

TEST_CASE("uncertified estimates require the override") {
  Fixture fx(4);
  CounterRng rng(81);
  std::vector<double> rates;
  for (int i = 0; i < 4; ++i) rates.push_back(1e-2 + 1e-3 * rng.gaussian());
  const LindbladModel model = fx.model(rates);
  const UdsCertificate cert = verify_uds(model, fx.enc);
  REQUIRE_FALSE(cert.holds);
  CHECK_THROWS_AS(uds_estimate(model, fx.enc, fx.rho0, fx.obs, 1.0, cert),
                  CertificationError);
  const EstimatorResult res =
      uds_estimate(model, fx.enc, fx.rho0, fx.obs, 1.0, cert, true);
  CHECK(res.gamma_eff ==
        doctest::Approx(cert.c_scalar * model.split.mean_rate));
}

TEST_CASE("single-encoding bias is first order in the deviation scale") {
  Fixture fx(4);
  CounterRng rng(82);
  std::vector<double> base;
  for (int i = 0; i < 4; ++i) base.push_back(1e-2 + 1e-3 * rng.gaussian());
  const RateSplit split = compute_rate_split(base);
  const double t = 5.0;
  const double coherent = fx.coherent(t);

  std::vector<double> biases;
  for (double s : {1.0, 0.5}) {
    std::vector<double> rates(4);
    for (int i = 0; i < 4; ++i) {
      rates[i] = split.mean_rate + s * split.deviations[i];
    }
    const LindbladModel model = fx.model(rates);
    const UdsCertificate cert = verify_uds(model, fx.enc);
    const EstimatorResult res =
        uds_estimate(model, fx.enc, fx.rho0, fx.obs, t, cert, true, 1e-12);
    biases.push_back(std::abs(res.rescaled_value - coherent));
  }
  CHECK(biases[0] / biases[1] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("shift averaging cancels the first order and is second order") {
  Fixture fx(4);
  CounterRng rng(83);
  std::vector<double> base;
  for (int i = 0; i < 4; ++i) base.push_back(1e-2 + 1e-3 * rng.gaussian());
  const RateSplit split = compute_rate_split(base);
  const double t = 5.0;
  const double coherent = fx.coherent(t);

  std::vector<double> avg_bias, single_bias;
  for (double s : {1.0, 0.5}) {
    std::vector<double> rates(4);
    for (int i = 0; i < 4; ++i) {
      rates[i] = split.mean_rate + s * split.deviations[i];
    }
    const LindbladModel model = fx.model(rates);
    const UdsCertificate cert = verify_uds(model, fx.enc);
    const ShiftAveragedResult res = shift_averaged_estimate(
        model, fx.enc, fx.rho0, fx.obs, t, cert, true, 1e-12);
    avg_bias.push_back(std::abs(res.combined.rescaled_value - coherent));
    single_bias.push_back(std::abs(
        std::exp(res.combined.gamma_eff * t) * res.per_shift_raw[0] -
        coherent));

    // the averaged bias obeys the second-order bound
    const double lambda = s * split.max_abs_deviation;
    CHECK(avg_bias.back() <= second_order_bound(fx.enc, fx.obs, t, lambda));
    // and is far below the single-encoding bias
    CHECK(avg_bias.back() < 0.1 * single_bias.back());
  }
  // halving the deviations quarters the averaged bias
  CHECK(avg_bias[0] / avg_bias[1] == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("equal rates make every shift identical") {
  Fixture fx(4);
  const LindbladModel model = fx.model(std::vector<double>(4, 0.02));
  const UdsCertificate cert = verify_uds(model, fx.enc);
  const ShiftAveragedResult res =
      shift_averaged_estimate(model, fx.enc, fx.rho0, fx.obs, 3.0, cert);
  for (double raw : res.per_shift_raw) {
    CHECK(std::abs(raw - res.per_shift_raw[0]) < 1e-12);
  }
}

TEST_CASE("post-selection acceptance matches e^{-gamma t}") {
  Fixture fx(4);
  const double gbar = 0.02, t = 5.0;
  const LindbladModel model = fx.model(std::vector<double>(4, gbar));
  const UdsCertificate cert = verify_uds(model, fx.enc);
  const std::uint64_t shots = 100000;
  const EstimatorResult res = postselected_estimate(
      model, fx.enc, fx.rho0, fx.obs, t, shots, 2024, cert);
  const double p = std::exp(-cert.gamma * t);
  const double freq =
      static_cast<double>(res.accepted_shots) / static_cast<double>(shots);
  const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(shots));
  CHECK(std::abs(freq - p) < 3 * sigma);
  CHECK(res.method == EstimatorMethod::kPostSelected);
  // the post-selected value estimates the coherent one
  const double se = res.std_error;
  CHECK(std::abs(res.rescaled_value - fx.coherent(t)) < 4 * se + 1e-8);
}

TEST_CASE("zero noise accepts every shot") {
  Fixture fx(4);
  const LindbladModel model = fx.model(std::vector<double>(4, 0.0));
  const UdsCertificate cert = verify_uds(model, fx.enc);
  const EstimatorResult res = postselected_estimate(
      model, fx.enc, fx.rho0, fx.obs, 4.0, 2000, 77, cert);
  CHECK(res.accepted_shots == res.n_shots);
}

TEST_CASE("post-selection with negligible acceptance degenerates") {
  Fixture fx(4);
  const LindbladModel model = fx.model(std::vector<double>(4, 2.0));
  const UdsCertificate cert = verify_uds(model, fx.enc);
  // acceptance e^{-4 * 2 * ...} ~ 1e-14: five shots will all be rejected
  CHECK_THROWS_AS(postselected_estimate(model, fx.enc, fx.rho0, fx.obs, 8.0, 5,
                                        99, cert),
                  DegenerateSampleError);
}

TEST_CASE("post-selected estimator is unbiased over seeds") {
  Fixture fx(4);
  const double gbar = 0.02, t = 4.0;
  const LindbladModel model = fx.model(std::vector<double>(4, gbar));
  const UdsCertificate cert = verify_uds(model, fx.enc);
  const double coherent = fx.coherent(t);
  const std::uint64_t shots = 2000;
  double sum = 0.0, sumsq = 0.0;
  const int n_seeds = 200;
  for (int s = 0; s < n_seeds; ++s) {
    const EstimatorResult res = postselected_estimate(
        model, fx.enc, fx.rho0, fx.obs, t, shots,
        derive_seed(4242, static_cast<std::uint64_t>(s)), cert);
    sum += res.rescaled_value;
    sumsq += res.rescaled_value * res.rescaled_value;
  }
  const double mean = sum / n_seeds;
  const double var = sumsq / n_seeds - mean * mean;
  const double se_mean = std::sqrt(var / n_seeds);
  CHECK(std::abs(mean - coherent) < 3 * se_mean + 1e-6);
}

TEST_CASE("pauli_decompose basics") {
  // Z on qubit 0 of two qubits
  const ComplexMatrix z0 = pauli_string_matrix({3, 0});
  const PauliDecomposition d = pauli_decompose(z0);
  REQUIRE(d.terms.size() == 1);
  CHECK(d.terms[0].coeff == doctest::Approx(1.0));
  CHECK(d.terms[0].codes == std::vector<int>{3, 0});
  CHECK(d.sampling_overhead == doctest::Approx(1.0));
  CHECK_THROWS_AS(pauli_decompose(ComplexMatrix::Zero(3, 3)), DomainError);
}

TEST_CASE("pauli_decompose of the projected logical X") {
  const auto enc = build_dualrail_subspace(4);
  const ComplexMatrix pxp = project_into(enc, logical_x(enc, 0));
  const PauliDecomposition d = pauli_decompose(pxp);
  REQUIRE(d.terms.size() == 4);
  double total = 0.0;
  for (const auto& term : d.terms) {
    CHECK(std::abs(term.coeff) == doctest::Approx(0.25).epsilon(1e-12));
    total += std::abs(term.coeff);
  }
  CHECK(d.sampling_overhead == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pauli_decompose round trip on a random Hermitian") {
  CounterRng rng(84);
  const ComplexMatrix o = udsim::testing::random_hermitian(4, rng);
  const PauliDecomposition d = pauli_decompose(o);
  ComplexMatrix rebuilt = ComplexMatrix::Zero(4, 4);
  for (const auto& term : d.terms) {
    rebuilt += term.coeff * pauli_string_matrix(term.codes);
  }
  CHECK(max_abs(ComplexMatrix(rebuilt - o)) < 1e-12);
}

TEST_CASE("pauli-sampled estimator converges to the uds value") {
  Fixture fx(4);
  const double gbar = 0.02, t = 3.0;
  const LindbladModel model = fx.model(std::vector<double>(4, gbar));
  const UdsCertificate cert = verify_uds(model, fx.enc);
  const EstimatorResult exact =
      uds_estimate(model, fx.enc, fx.rho0, fx.obs, t, cert);
  const EstimatorResult sampled = pauli_sampled_estimate(
      model, fx.enc, fx.rho0, fx.obs, t, 200000, 99, cert);
  CHECK(std::abs(sampled.rescaled_value - exact.rescaled_value) <
        4 * sampled.std_error + 1e-9);
  CHECK(sampled.method == EstimatorMethod::kPauliSampled);
}

TEST_CASE("second_order_bound plug-in values") {
  const auto enc = build_degree_subspace(std::vector<int>(6, 2), 3);
  const ComplexMatrix obs = project_into(
      enc, embed_site(pauli_z(), std::vector<int>(6, 2), 0));
  CHECK(second_order_bound(enc, obs, 10.0, 0.0) == 0.0);
  const double bound = second_order_bound(enc, obs, 10.0, 3.5e-3);
  // (10 * 3 * 3.5e-3)^2 / 2 * ||O||, with ||O|| = 1
  CHECK(bound == doctest::Approx(0.0055125).epsilon(1e-10));
}

namespace {

struct CircuitFixture {
  SubspaceEncoding enc;
  TfimParams params;
  ComplexMatrix rho0;
  ComplexMatrix obs;

  CircuitFixture() {
    enc = build_dualrail_subspace(4);
    params.j_coupling = Eigen::MatrixXd::Zero(2, 2);
    params.j_coupling(0, 1) = params.j_coupling(1, 0) = 0.8;
    params.h_field = Eigen::VectorXd::Zero(2);
    params.h_field << 0.6, -0.4;
    rho0 = ComplexMatrix::Zero(16, 16);
    rho0(fock_index({0, 1, 0, 1}, enc.dims), fock_index({0, 1, 0, 1}, enc.dims)) =
        1.0;
    obs = project_into(enc, logical_z(enc, 0));
  }
};

}  // namespace

TEST_CASE("pec with matching rates is unbiased within statistics") {
  CircuitFixture fx;
  const double gbar = 0.01, t = 1.0;
  const TrotterCircuit noisy = trotterize_tfim(
      fx.params, fx.enc, t, 20, std::vector<double>(4, gbar));
  const TrotterCircuit clean = trotterize_tfim(fx.params, fx.enc, t, 20);
  const double coherent =
      (vectorize(fx.obs).dot(vectorize(evolve_density(clean, fx.rho0)))).real();

  // exact (infinite-shot) estimate cancels the uniform channel entirely
  const EstimatorResult exact = pec_baseline_estimate(
      noisy, fx.enc, fx.rho0, fx.obs, gbar, 0, 0);
  CHECK(std::abs(exact.rescaled_value - coherent) < 1e-10);

  const EstimatorResult sampled = pec_baseline_estimate(
      noisy, fx.enc, fx.rho0, fx.obs, gbar, 100000, 31415);
  CHECK(std::abs(sampled.rescaled_value - coherent) <
        3 * sampled.std_error + 1e-9);
}

TEST_CASE("pec residual bias is first order in the rate deviations") {
  CircuitFixture fx;
  CounterRng rng(85);
  std::vector<double> base;
  for (int i = 0; i < 4; ++i) base.push_back(1e-2 + 1e-3 * rng.gaussian());
  const RateSplit split = compute_rate_split(base);
  const TrotterCircuit clean = trotterize_tfim(fx.params, fx.enc, 1.0, 20);
  const double coherent =
      (vectorize(fx.obs).dot(vectorize(evolve_density(clean, fx.rho0)))).real();

  std::vector<double> biases;
  for (double s : {1.0, 0.5}) {
    std::vector<double> rates(4);
    for (int i = 0; i < 4; ++i) {
      rates[i] = split.mean_rate + s * split.deviations[i];
    }
    const TrotterCircuit noisy =
        trotterize_tfim(fx.params, fx.enc, 1.0, 20, rates);
    const EstimatorResult res = pec_baseline_estimate(
        noisy, fx.enc, fx.rho0, fx.obs, split.mean_rate, 0, 0);
    biases.push_back(std::abs(res.rescaled_value - coherent));
  }
  CHECK(biases[0] / biases[1] == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("zero-noise pec is the identity inversion") {
  CircuitFixture fx;
  const TrotterCircuit clean = trotterize_tfim(fx.params, fx.enc, 1.0, 20);
  const double coherent =
      (vectorize(fx.obs).dot(vectorize(evolve_density(clean, fx.rho0)))).real();
  const EstimatorResult res =
      pec_baseline_estimate(clean, fx.enc, fx.rho0, fx.obs, 0.0, 0, 0);
  CHECK(std::abs(res.rescaled_value - coherent) < 1e-12);
}

TEST_CASE("pec refuses absurd overheads") {
  CircuitFixture fx;
  const TrotterCircuit noisy = trotterize_tfim(
      fx.params, fx.enc, 1.0, 20, std::vector<double>(4, 0.01));
  CHECK_THROWS_AS(pec_baseline_estimate(noisy, fx.enc, fx.rho0, fx.obs, 50.0,
                                        1000, 1, 10.0),
                  OverheadError);
}
