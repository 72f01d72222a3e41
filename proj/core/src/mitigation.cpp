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

#include "udsim/mitigation.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "udsim/operators.hpp"
#include "udsim/rng.hpp"

namespace udsim {

namespace {

LindbladModel with_hamiltonian(const LindbladModel& model, ComplexMatrix h) {
  LindbladModel shifted = model;
  shifted.hamiltonian = std::move(h);
  return shifted;
}

void require_encoding(const LindbladModel& model,
                      const SubspaceEncoding& enc) {
  if (model.total_dim() != enc.total_dim()) {
    throw ShapeError("estimator: model and encoding dimensions differ");
  }
}

void require_certified(const UdsCertificate& cert, bool allow_uncertified) {
  if (!cert.holds && !allow_uncertified) {
    throw CertificationError(
        "estimator: encoding is not UDS-certified for this model "
        "(residual_scalar = " +
        std::to_string(cert.residual_scalar) +
        "); pass allow_uncertified to override");
  }
}

struct SpectralOutcomes {
  std::vector<double> values;
  std::vector<double> probs;
};

// Outcome distribution of a projective measurement of Hermitian o on rho.
SpectralOutcomes measurement_distribution(const ComplexMatrix& o,
                                          const ComplexMatrix& rho) {
  if ((o - o.adjoint()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(norm_inf(o), 1e-30)) {
    throw DomainError("measurement: observable is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(o);
  SpectralOutcomes out;
  const Eigen::Index n = o.rows();
  out.values.reserve(static_cast<std::size_t>(n));
  out.probs.reserve(static_cast<std::size_t>(n));
  double total = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    const ComplexVector v = es.eigenvectors().col(a);
    const double p = std::max((v.adjoint() * rho * v)(0, 0).real(), 0.0);
    out.values.push_back(es.eigenvalues()(a));
    out.probs.push_back(p);
    total += p;
  }
  if (total > 0.0) {
    for (double& p : out.probs) p /= total;
  }
  return out;
}

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
};

SampleStats counted_stats(const std::vector<std::uint64_t>& counts,
                          const std::vector<double>& values,
                          std::uint64_t n) {
  SampleStats s;
  if (n == 0) return s;
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double c = static_cast<double>(counts[i]);
    m1 += c * values[i];
    m2 += c * values[i] * values[i];
  }
  m1 /= static_cast<double>(n);
  m2 /= static_cast<double>(n);
  s.mean = m1;
  const double var = std::max(m2 - m1 * m1, 0.0);
  s.std_error = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
  return s;
}

}  // namespace

ShiftEnsemble make_shift_ensemble(const LindbladModel& model,
                                  const ComplexMatrix& rho0,
                                  const ComplexMatrix& observable) {
  ShiftEnsemble ensemble;
  ensemble.perm = cyclic_shift_permutation(model.dims);
  ensemble.shift_matrix = permutation_matrix(ensemble.perm);
  ensemble.order = static_cast<int>(model.dims.size());

  // the family must be closed under conjugation by T
  for (const auto& d : model.dissipators) {
    const ComplexMatrix conj = conjugate_by_permutation(d.op, ensemble.perm, 1);
    const double scale = std::max(norm_inf(d.op), 1.0);
    bool matched = false;
    for (const auto& other : model.dissipators) {
      if ((conj - other.op).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw EnsembleError(
          "shift ensemble: dissipator " + std::to_string(d.label) +
          " is not mapped into the family by the cyclic shift");
    }
  }

  ensemble.frames.reserve(static_cast<std::size_t>(ensemble.order));
  for (int j = 0; j < ensemble.order; ++j) {
    ShiftFrame frame;
    frame.power = j;
    frame.hamiltonian =
        conjugate_by_permutation(model.hamiltonian, ensemble.perm, j);
    frame.rho0 = conjugate_by_permutation(rho0, ensemble.perm, j);
    frame.observable = conjugate_by_permutation(observable, ensemble.perm, j);
    ensemble.frames.push_back(std::move(frame));
  }
  return ensemble;
}

double effective_decay_rate(const LindbladModel& model,
                            const UdsCertificate& cert) {
  if (cert.holds) return cert.gamma;
  return cert.c_scalar * model.split.mean_rate;
}

EstimatorResult uds_estimate(const LindbladModel& model,
                             const SubspaceEncoding& enc,
                             const ComplexMatrix& rho0, const ComplexMatrix& o,
                             double t, const UdsCertificate& cert,
                             bool allow_uncertified, double tol) {
  require_encoding(model, enc);
  require_certified(cert, allow_uncertified);
  const LindbladAction action(model);
  const ComplexVector v = expm_action(action, vectorize(rho0), t, tol);
  EstimatorResult result;
  result.method = EstimatorMethod::kExact;
  result.gamma_eff = effective_decay_rate(model, cert);
  result.raw_value = expectation(o, v).real();
  result.rescaled_value = std::exp(result.gamma_eff * t) * result.raw_value;
  return result;
}

ShiftAveragedResult shift_averaged_estimate(const LindbladModel& model,
                                            const SubspaceEncoding& enc,
                                            const ComplexMatrix& rho0,
                                            const ComplexMatrix& o, double t,
                                            const UdsCertificate& cert,
                                            bool allow_uncertified,
                                            double tol) {
  require_encoding(model, enc);
  require_certified(cert, allow_uncertified);
  const ShiftEnsemble ensemble = make_shift_ensemble(model, rho0, o);
  ShiftAveragedResult out;
  out.per_shift_raw.reserve(ensemble.frames.size());
  double sum = 0.0;
  for (const ShiftFrame& frame : ensemble.frames) {
    const LindbladModel shifted = with_hamiltonian(model, frame.hamiltonian);
    const LindbladAction action(shifted);
    const ComplexVector v =
        expm_action(action, vectorize(frame.rho0), t, tol);
    const double raw = expectation(frame.observable, v).real();
    out.per_shift_raw.push_back(raw);
    sum += raw;  // fixed j order: deterministic reduction
  }
  EstimatorResult& result = out.combined;
  result.method = EstimatorMethod::kExact;
  result.gamma_eff = effective_decay_rate(model, cert);
  result.raw_value = sum / static_cast<double>(ensemble.frames.size());
  result.rescaled_value = std::exp(result.gamma_eff * t) * result.raw_value;
  return out;
}

namespace {

EstimatorResult postselect_from_state(const SubspaceEncoding& enc,
                                      const ComplexMatrix& rho,
                                      const ComplexMatrix& o,
                                      std::uint64_t n_shots,
                                      std::uint64_t rng_seed,
                                      double gamma_eff) {
  const ComplexMatrix projected = project_into(enc, rho);
  double p_acc = projected.trace().real();
  p_acc = std::min(std::max(p_acc, 0.0), 1.0);

  CounterRng rng(rng_seed);
  const std::uint64_t accepted = rng.binomial(n_shots, p_acc);
  if (accepted == 0) {
    throw DegenerateSampleError(
        "postselected_estimate: zero accepted shots (acceptance ~ " +
            std::to_string(p_acc) + ")",
        p_acc);
  }
  const ComplexMatrix rho_post = projected / projected.trace();
  const SpectralOutcomes outcomes =
      measurement_distribution(project_into(enc, o), rho_post);
  const std::vector<std::uint64_t> counts =
      rng.multinomial(accepted, outcomes.probs);
  const SampleStats stats = counted_stats(counts, outcomes.values, accepted);

  EstimatorResult result;
  result.method = EstimatorMethod::kPostSelected;
  result.n_shots = n_shots;
  result.accepted_shots = accepted;
  result.seed = rng_seed;
  result.gamma_eff = gamma_eff;
  result.raw_value = stats.mean;
  result.rescaled_value = stats.mean;  // normalization replaces the rescale
  result.std_error = stats.std_error;
  return result;
}

}  // namespace

EstimatorResult postselected_estimate(const LindbladModel& model,
                                      const SubspaceEncoding& enc,
                                      const ComplexMatrix& rho0,
                                      const ComplexMatrix& o, double t,
                                      std::uint64_t n_shots,
                                      std::uint64_t rng_seed,
                                      const UdsCertificate& cert,
                                      bool allow_uncertified, double tol) {
  require_encoding(model, enc);
  require_certified(cert, allow_uncertified);
  if (n_shots == 0) {
    throw DomainError("postselected_estimate: n_shots must be positive");
  }
  const LindbladAction action(model);
  const ComplexVector v = expm_action(action, vectorize(rho0), t, tol);
  const ComplexMatrix rho = devectorize(v, model.total_dim());
  return postselect_from_state(enc, rho, o, n_shots, rng_seed,
                               effective_decay_rate(model, cert));
}

EstimatorResult postselected_estimate(const TrotterCircuit& circuit,
                                      const SubspaceEncoding& enc,
                                      const ComplexMatrix& rho0,
                                      const ComplexMatrix& o,
                                      std::uint64_t n_shots,
                                      std::uint64_t rng_seed) {
  if (n_shots == 0) {
    throw DomainError("postselected_estimate: n_shots must be positive");
  }
  const ComplexMatrix rho = evolve_density(circuit, rho0);
  return postselect_from_state(enc, rho, o, n_shots, rng_seed, 0.0);
}

EstimatorResult pauli_sampled_estimate(const LindbladModel& model,
                                       const SubspaceEncoding& enc,
                                       const ComplexMatrix& rho0,
                                       const ComplexMatrix& o, double t,
                                       std::uint64_t n_shots,
                                       std::uint64_t rng_seed,
                                       const UdsCertificate& cert,
                                       bool allow_uncertified, double tol) {
  require_encoding(model, enc);
  require_certified(cert, allow_uncertified);
  if (n_shots == 0) {
    throw DomainError("pauli_sampled_estimate: n_shots must be positive");
  }
  const LindbladAction action(model);
  const ComplexVector v = expm_action(action, vectorize(rho0), t, tol);
  const ComplexMatrix rho = devectorize(v, model.total_dim());

  const PauliDecomposition decomp = pauli_decompose(o);
  double weight = 0.0;
  for (const auto& term : decomp.terms) weight += std::abs(term.coeff);

  const std::size_t k = decomp.terms.size();
  std::vector<double> probs(2 * k), values(2 * k);
  for (std::size_t s = 0; s < k; ++s) {
    const ComplexMatrix sigma = pauli_string_matrix(decomp.terms[s].codes);
    const double exp_s = (sigma.transpose().cwiseProduct(rho)).sum().real();
    const double p_term = std::abs(decomp.terms[s].coeff) / weight;
    const double p_plus = std::min(std::max((1.0 + exp_s) / 2.0, 0.0), 1.0);
    probs[s] = p_term * p_plus;
    probs[k + s] = p_term * (1.0 - p_plus);
    const double sw = weight * (decomp.terms[s].coeff >= 0 ? 1.0 : -1.0);
    values[s] = sw;
    values[k + s] = -sw;
  }

  CounterRng rng(rng_seed);
  const std::vector<std::uint64_t> counts = rng.multinomial(n_shots, probs);
  const SampleStats stats = counted_stats(counts, values, n_shots);

  EstimatorResult result;
  result.method = EstimatorMethod::kPauliSampled;
  result.n_shots = n_shots;
  result.accepted_shots = n_shots;
  result.seed = rng_seed;
  result.gamma_eff = effective_decay_rate(model, cert);
  const double scale = std::exp(result.gamma_eff * t);
  result.raw_value = stats.mean;
  result.rescaled_value = scale * stats.mean;
  result.std_error = scale * stats.std_error;
  return result;
}

PauliDecomposition pauli_decompose(const ComplexMatrix& o) {
  const Eigen::Index dim = o.rows();
  if (dim != o.cols()) throw ShapeError("pauli_decompose: matrix not square");
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw DomainError("pauli_decompose: dimension is not a power of two");
  }
  if ((o - o.adjoint()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(norm_inf(o), 1e-30)) {
    throw DomainError("pauli_decompose: observable is not Hermitian");
  }

  PauliDecomposition decomp;
  double weight = 0.0;
  std::vector<int> codes(static_cast<std::size_t>(n), 0);
  const std::uint64_t n_strings = std::uint64_t{1} << (2 * n);
  for (std::uint64_t word = 0; word < n_strings; ++word) {
    for (int q = 0; q < n; ++q) {
      codes[static_cast<std::size_t>(q)] =
          static_cast<int>((word >> (2 * (n - 1 - q))) & 3);
    }
    // tr(sigma O): each sigma row has a single nonzero entry
    Complex trace(0, 0);
    for (Eigen::Index r = 0; r < dim; ++r) {
      Eigen::Index c = 0;
      Complex phase(1, 0);
      for (int q = 0; q < n; ++q) {
        const int bit = static_cast<int>((r >> (n - 1 - q)) & 1);
        int out_bit = bit;
        switch (codes[static_cast<std::size_t>(q)]) {
          case 0:
            break;
          case 1:
            out_bit = 1 - bit;
            break;
          case 2:
            out_bit = 1 - bit;
            phase *= (bit == 0) ? Complex(0, -1) : Complex(0, 1);
            break;
          case 3:
            phase *= (bit == 0) ? 1.0 : -1.0;
            break;
        }
        c = (c << 1) | out_bit;
      }
      trace += phase * o(c, r);
    }
    const double coeff = trace.real() / static_cast<double>(dim);
    if (std::abs(coeff) > 1e-13) {
      decomp.terms.push_back(PauliTerm{coeff, codes});
      weight += std::abs(coeff);
    }
  }
  decomp.sampling_overhead = weight * weight;
  return decomp;
}

namespace {

void dephase_qubit(ComplexMatrix& rho, int n_qubits, int qubit) {
  const int bitpos = n_qubits - 1 - qubit;
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      if (((r >> bitpos) & 1) != ((c >> bitpos) & 1)) rho(r, c) = Complex(0, 0);
    }
  }
}

QuantumChannel reset_channel(int qubit) {
  QuantumChannel channel;
  channel.target_qudit = qubit;
  channel.parameter = 0.0;
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k1(0, 1) = 1.0;
  channel.kraus_ops = {k0, k1};
  return channel;
}

}  // namespace

EstimatorResult pec_baseline_estimate(const TrotterCircuit& circuit,
                                      const SubspaceEncoding& enc,
                                      const ComplexMatrix& rho0,
                                      const ComplexMatrix& o,
                                      double assumed_rate,
                                      std::uint64_t n_shots,
                                      std::uint64_t rng_seed,
                                      double overhead_cap) {
  const int n = circuit.n_qubits;
  if (enc.total_dim() != rho0.rows() || o.rows() != rho0.rows()) {
    throw ShapeError("pec_baseline_estimate: dimension mismatch");
  }
  const double eta_bar = std::exp(-circuit.dt * assumed_rate);

  // E(eta)^{-1} = a * Id + m * Mz + r * Reset with a = 1/sqrt(eta),
  // m = 1/eta - 1/sqrt(eta), r = -(1 - eta)/eta; 1-norm (2 - eta)/eta.
  const double w_id = 1.0 / std::sqrt(eta_bar);
  const double w_mz = 1.0 / eta_bar - w_id;
  const double w_rs = -(1.0 - eta_bar) / eta_bar;
  const double slot_norm = w_id + w_mz + std::abs(w_rs);
  const double total_norm =
      std::pow(slot_norm, static_cast<double>(n) * circuit.steps);
  if (total_norm > overhead_cap) {
    throw OverheadError("pec_baseline_estimate: sampling overhead " +
                        std::to_string(total_norm) + " exceeds the cap");
  }

  auto branch_apply = [&](ComplexMatrix& rho, int qubit, bool signed_branch) {
    const double r_w = signed_branch ? w_rs : std::abs(w_rs);
    ComplexMatrix dephased = rho;
    dephase_qubit(dephased, n, qubit);
    const ComplexMatrix reset =
        apply_channel(reset_channel(qubit), rho, circuit.dims);
    rho = (w_id * rho + w_mz * dephased + r_w * reset) / slot_norm;
  };

  ComplexMatrix rho_abs = rho0;
  ComplexMatrix rho_sgn = rho0;
  for (int step = 0; step < circuit.steps; ++step) {
    for (const CircuitLayer& layer : circuit.layers) {
      rho_abs = layer.unitary * rho_abs * layer.unitary.adjoint();
      rho_sgn = layer.unitary * rho_sgn * layer.unitary.adjoint();
    }
    for (const QuantumChannel& channel : circuit.channels) {
      rho_abs = apply_channel(channel, rho_abs, circuit.dims);
      rho_sgn = apply_channel(channel, rho_sgn, circuit.dims);
    }
    for (int q = 0; q < n; ++q) {
      branch_apply(rho_abs, q, false);
      branch_apply(rho_sgn, q, true);
    }
  }

  // outcome distribution of O under both branches
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(o);
  const Eigen::Index dim = o.rows();
  std::vector<double> values, probs;
  double signed_expect = 0.0;
  for (Eigen::Index a = 0; a < dim; ++a) {
    const ComplexVector v = es.eigenvectors().col(a);
    const double pa = std::max((v.adjoint() * rho_abs * v)(0, 0).real(), 0.0);
    const double ps = (v.adjoint() * rho_sgn * v)(0, 0).real();
    const double outcome = es.eigenvalues()(a);
    signed_expect += outcome * ps;
    // categories: (sign +1, a) and (sign -1, a)
    values.push_back(total_norm * outcome);
    probs.push_back(std::max(0.5 * (pa + ps), 0.0));
    values.push_back(-total_norm * outcome);
    probs.push_back(std::max(0.5 * (pa - ps), 0.0));
  }

  EstimatorResult result;
  result.method = EstimatorMethod::kPec;
  result.seed = rng_seed;
  result.gamma_eff = 0.0;  // the inversion removes the decay factor
  if (n_shots == 0) {
    result.raw_value = total_norm * signed_expect;
    result.rescaled_value = result.raw_value;
    result.std_error = 0.0;
    return result;
  }

  CounterRng rng(rng_seed);
  const std::vector<std::uint64_t> counts = rng.multinomial(n_shots, probs);
  const SampleStats stats = counted_stats(counts, values, n_shots);
  result.n_shots = n_shots;
  std::uint64_t nonzero = n_shots;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (std::abs(values[i]) < 1e-12 * std::max(total_norm, 1.0))
      nonzero -= counts[i];
  }
  result.accepted_shots = nonzero;
  result.raw_value = stats.mean;
  result.rescaled_value = stats.mean;
  result.std_error = stats.std_error;
  return result;
}

double second_order_bound(const SubspaceEncoding& enc, const ComplexMatrix& o,
                          double t, double lambda_max) {
  const double k = static_cast<double>(enc.degree_k);
  return 0.5 * t * t * k * k * lambda_max * lambda_max * operator_norm(o);
}

}  // namespace udsim
