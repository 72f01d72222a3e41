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

#include "udsim/circuit.hpp"
#include "udsim/liouville.hpp"
#include "udsim/subspace.hpp"
#include "udsim/types.hpp"

namespace udsim {

enum class EstimatorMethod { kExact, kPauliSampled, kPostSelected, kPec };

struct EstimatorResult {
  double raw_value = 0.0;       // direct average before any rescale
  double rescaled_value = 0.0;  // estimate on the coherent scale
  std::uint64_t n_shots = 0;    // 0 for exact (infinite-shot) estimates
  std::uint64_t accepted_shots = 0;
  double std_error = 0.0;       // on the rescaled scale
  EstimatorMethod method = EstimatorMethod::kExact;
  std::uint64_t seed = 0;
  double gamma_eff = 0.0;       // decay rate used for rescaling
};

/// Cyclic-shift ensemble: the shifted Hamiltonians, states and observables
/// for j = 0..n-1, run against the fixed noise model.
struct ShiftFrame {
  int power = 0;
  ComplexMatrix hamiltonian;
  ComplexMatrix rho0;
  ComplexMatrix observable;
};

struct ShiftEnsemble {
  ComplexMatrix shift_matrix;       // T
  std::vector<Eigen::Index> perm;   // T e_i = e_{perm[i]}
  int order = 0;                    // number of shifts (qudit count)
  std::vector<ShiftFrame> frames;
};

/// Builds the ensemble and verifies that conjugation by T permutes the
/// dissipator family into itself; throws EnsembleError naming the offending
/// operator otherwise.
ShiftEnsemble make_shift_ensemble(const LindbladModel& model,
                                  const ComplexMatrix& rho0,
                                  const ComplexMatrix& observable);

/// gamma used for rescaling: the certified uniform rate when the certificate
/// holds, c * gammabar of the model's rate split otherwise (the override
/// path for perturbed rates).
double effective_decay_rate(const LindbladModel& model,
                            const UdsCertificate& cert);

/// Exact (infinite-shot) subspace expectation; rescaled_value =
/// e^{gamma_eff t} <<O | e^{Lt} | rho0>>. rho0 and O must be pre-projected.
EstimatorResult uds_estimate(const LindbladModel& model,
                             const SubspaceEncoding& enc,
                             const ComplexMatrix& rho0, const ComplexMatrix& o,
                             double t, const UdsCertificate& cert,
                             bool allow_uncertified = false,
                             double tol = kDefaultExpmTol);

struct ShiftAveragedResult {
  EstimatorResult combined;
  std::vector<double> per_shift_raw;
};

/// Runs the n shifted evolutions against the fixed noise, averages the raw
/// values and rescales the mean; cancels the first-order rate-deviation bias.
ShiftAveragedResult shift_averaged_estimate(
    const LindbladModel& model, const SubspaceEncoding& enc,
    const ComplexMatrix& rho0, const ComplexMatrix& o, double t,
    const UdsCertificate& cert, bool allow_uncertified = false,
    double tol = kDefaultExpmTol);

/// Finite-shot post-selection: acceptance is a binomial draw with success
/// probability tr(P rho(t) P); the conditional state is projected,
/// renormalized, and sampled in the eigenbasis of O.
EstimatorResult postselected_estimate(const LindbladModel& model,
                                      const SubspaceEncoding& enc,
                                      const ComplexMatrix& rho0,
                                      const ComplexMatrix& o, double t,
                                      std::uint64_t n_shots,
                                      std::uint64_t rng_seed,
                                      const UdsCertificate& cert,
                                      bool allow_uncertified = false,
                                      double tol = kDefaultExpmTol);

/// Circuit-model variant of the above, applied to the circuit's final state.
EstimatorResult postselected_estimate(const TrotterCircuit& circuit,
                                      const SubspaceEncoding& enc,
                                      const ComplexMatrix& rho0,
                                      const ComplexMatrix& o,
                                      std::uint64_t n_shots,
                                      std::uint64_t rng_seed);

/// Finite-shot Monte-Carlo estimate over the Pauli expansion of O: each shot
/// draws a term with probability |alpha|/sum|alpha| and measures it; overhead
/// (sum |alpha|)^2.
EstimatorResult pauli_sampled_estimate(const LindbladModel& model,
                                       const SubspaceEncoding& enc,
                                       const ComplexMatrix& rho0,
                                       const ComplexMatrix& o, double t,
                                       std::uint64_t n_shots,
                                       std::uint64_t rng_seed,
                                       const UdsCertificate& cert,
                                       bool allow_uncertified = false,
                                       double tol = kDefaultExpmTol);

struct PauliDecomposition {
  std::vector<PauliTerm> terms;
  double sampling_overhead = 0.0;  // (sum |alpha|)^2
};

/// Exact Pauli expansion of a Hermitian qubit operator via trace inner
/// products; reconstruction error <= 1e-12.
PauliDecomposition pauli_decompose(const ComplexMatrix& o);

/// Probabilistic error cancellation against the uniform-rate damping channel
/// E(exp(-dt gammabar)) per qubit per step, knowing only the average rate.
/// The inverse map is decomposed over {identity, Z measurement, reset} with
/// quasi-probabilities; sampling overhead is the product of per-slot 1-norms
/// and must stay below overhead_cap. n_shots = 0 gives the exact
/// (infinite-shot) quasi-probability expectation.
EstimatorResult pec_baseline_estimate(const TrotterCircuit& circuit,
                                      const SubspaceEncoding& enc,
                                      const ComplexMatrix& rho0,
                                      const ComplexMatrix& o,
                                      double assumed_rate,
                                      std::uint64_t n_shots,
                                      std::uint64_t rng_seed,
                                      double overhead_cap = 100.0);

/// t^2 k^2 lambda^2 ||O||_op / 2.
double second_order_bound(const SubspaceEncoding& enc, const ComplexMatrix& o,
                          double t, double lambda_max);

}  // namespace udsim
