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

#include "udsim/liouville.hpp"

#include <cmath>

#include <Eigen/LU>

#include "udsim/operators.hpp"

namespace udsim {

Eigen::Index LindbladModel::total_dim() const { return product_dim(dims); }

RateSplit compute_rate_split(const std::vector<double>& rates) {
  RateSplit split;
  if (rates.empty()) return split;
  double sum = 0.0;
  for (double r : rates) sum += r;
  split.mean_rate = sum / static_cast<double>(rates.size());
  split.deviations.reserve(rates.size());
  for (double r : rates) {
    const double dev = r - split.mean_rate;
    split.deviations.push_back(dev);
    split.max_abs_deviation = std::max(split.max_abs_deviation, std::abs(dev));
  }
  return split;
}

LindbladModel make_lindblad_model(std::vector<int> dims, ComplexMatrix h,
                                  std::vector<Dissipator> dissipators) {
  const Eigen::Index n = product_dim(dims);
  if (h.rows() != n || h.cols() != n) {
    throw ShapeError("lindblad model: Hamiltonian does not match the register");
  }
  const double hscale = norm_inf(h);
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(hscale, 1e-30)) {
    throw DomainError("lindblad model: Hamiltonian is not Hermitian");
  }
  std::vector<double> rates;
  rates.reserve(dissipators.size());
  for (const auto& d : dissipators) {
    if (d.op.rows() != n || d.op.cols() != n) {
      throw ShapeError("lindblad model: jump operator dimension mismatch");
    }
    if (d.rate < 0.0) {
      throw DomainError("lindblad model: negative rate");
    }
    rates.push_back(d.rate);
  }
  LindbladModel model{std::move(dims), std::move(h), std::move(dissipators),
                      compute_rate_split(rates)};
  return model;
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw ShapeError("vectorize: matrix must be square");
  }
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix devectorize(const ComplexVector& v, Eigen::Index n) {
  if (n * n != v.size()) {
    throw ShapeError("devectorize: length " + std::to_string(v.size()) +
                     " is not " + std::to_string(n) + "^2");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

namespace {

void check_superop_size(Eigen::Index n) {
  const std::int64_t entries = std::int64_t{n} * n * n * n;
  if (entries > kMaxDenseEntries) {
    throw DimensionError("superoperator of dim " + std::to_string(n * n) +
                         " exceeds the dense entry cap");
  }
}

}  // namespace

ComplexMatrix assemble_dissipator(const LindbladModel& model,
                                  const std::vector<double>& rates_override) {
  if (rates_override.size() != model.dissipators.size()) {
    throw ShapeError("assemble_dissipator: expected " +
                     std::to_string(model.dissipators.size()) + " rates, got " +
                     std::to_string(rates_override.size()));
  }
  const Eigen::Index n = model.total_dim();
  check_superop_size(n);
  const ComplexMatrix eye = identity(n);
  ComplexMatrix d = ComplexMatrix::Zero(n * n, n * n);
  for (std::size_t i = 0; i < model.dissipators.size(); ++i) {
    const double g = rates_override[i];
    if (g == 0.0) continue;
    const ComplexMatrix& a = model.dissipators[i].op;
    const ComplexMatrix ada = a.adjoint() * a;
    d += g * (kron(a, a.conjugate()) -
              0.5 * (kron(ada, eye) + kron(eye, ada.transpose())));
  }
  return d;
}

ComplexMatrix assemble_liouvillian(const LindbladModel& model) {
  const Eigen::Index n = model.total_dim();
  check_superop_size(n);
  const ComplexMatrix eye = identity(n);
  ComplexMatrix l = Complex(0, -1) * (kron(model.hamiltonian, eye) -
                                      kron(eye, model.hamiltonian.transpose()));
  std::vector<double> rates;
  rates.reserve(model.dissipators.size());
  for (const auto& dis : model.dissipators) rates.push_back(dis.rate);
  l += assemble_dissipator(model, rates);
  return l;
}

Complex expectation(const ComplexMatrix& observable,
                    const ComplexVector& state_vec) {
  if (observable.size() != state_vec.size()) {
    throw ShapeError("expectation: observable and state dimension mismatch");
  }
  return vectorize(observable).dot(state_vec);  // dot conjugates the left arg
}

std::vector<Complex> spectral_expectation(const ComplexMatrix& liouvillian,
                                          const ComplexMatrix& rho0,
                                          const ComplexMatrix& observable,
                                          const std::vector<double>& times) {
  const EigResult es = eig(liouvillian);
  Eigen::PartialPivLU<ComplexMatrix> lu(es.right_vectors);
  const double rc = lu.rcond();
  if (!(rc > 1e-10)) {
    throw SpectralError(
        "spectral_expectation: eigenbasis too ill-conditioned "
        "(rcond = " +
        std::to_string(rc) + "); use the integrator path");
  }
  const ComplexVector weights = lu.solve(vectorize(rho0));  // <<l_a|rho0>>
  const ComplexVector obs_components =
      es.right_vectors.adjoint() * vectorize(observable);  // conj of <<O|r_a>>

  std::vector<Complex> out;
  out.reserve(times.size());
  for (double t : times) {
    Complex acc(0, 0);
    for (Eigen::Index a = 0; a < es.values.size(); ++a) {
      acc += std::exp(es.values(a) * t) * weights(a) *
             std::conj(obs_components(a));
    }
    out.push_back(acc);
  }
  return out;
}

void left_mul_site(const ComplexMatrix& in, const ComplexMatrix& local,
                   const std::vector<int>& dims, int site, ComplexMatrix& out) {
  const int d = dims[site];
  Eigen::Index left = 1, right = 1;
  for (int i = 0; i < site; ++i) left *= dims[i];
  for (int i = site + 1; i < static_cast<int>(dims.size()); ++i)
    right *= dims[i];
  out.resize(in.rows(), in.cols());
  for (Eigen::Index l = 0; l < left; ++l) {
    for (int a = 0; a < d; ++a) {
      for (Eigen::Index r = 0; r < right; ++r) {
        const Eigen::Index row = (l * d + a) * right + r;
        out.row(row).setZero();
        for (int b = 0; b < d; ++b) {
          const Complex amp = local(a, b);
          if (amp == Complex(0, 0)) continue;
          out.row(row) += amp * in.row((l * d + b) * right + r);
        }
      }
    }
  }
}

void right_mul_site(const ComplexMatrix& in, const ComplexMatrix& local,
                    const std::vector<int>& dims, int site, ComplexMatrix& out) {
  const int d = dims[site];
  Eigen::Index left = 1, right = 1;
  for (int i = 0; i < site; ++i) left *= dims[i];
  for (int i = site + 1; i < static_cast<int>(dims.size()); ++i)
    right *= dims[i];
  out.resize(in.rows(), in.cols());
  for (Eigen::Index l = 0; l < left; ++l) {
    for (int a = 0; a < d; ++a) {
      for (Eigen::Index r = 0; r < right; ++r) {
        const Eigen::Index col = (l * d + a) * right + r;
        out.col(col).setZero();
        for (int b = 0; b < d; ++b) {
          const Complex amp = local(b, a);  // (X M)(:,a) = sum_b X(:,b) M(b,a)
          if (amp == Complex(0, 0)) continue;
          out.col(col) += amp * in.col((l * d + b) * right + r);
        }
      }
    }
  }
}

LindbladAction::LindbladAction(const LindbladModel& model)
    : n_(model.total_dim()), dims_(model.dims), h_(model.hamiltonian) {
  gsum_ = ComplexMatrix::Zero(n_, n_);
  double jump_bound = 0.0;
  for (const auto& d : model.dissipators) {
    if (d.rate == 0.0) continue;
    jumps_.push_back(Jump{d.rate, d.op, d.factors});
    const ComplexMatrix ada = d.op.adjoint() * d.op;
    gsum_ += d.rate * ada;
    jump_bound += d.rate * (norm_1(d.op) * norm_1(d.op) +
                            0.5 * (norm_1(ada) + norm_inf(ada)));
  }
  gdiag_ = gsum_.diagonal().real();
  ComplexMatrix offdiag = gsum_;
  offdiag.diagonal().setZero();
  gsum_diagonal_ = gsum_.size() == 0 || offdiag.cwiseAbs().maxCoeff() == 0.0;
  norm_bound_ = norm_1(h_) + norm_inf(h_) + jump_bound;
}

void LindbladAction::apply(const ComplexVector& in, ComplexVector& out) const {
  const ComplexMatrix rho = Eigen::Map<const ComplexMatrix>(in.data(), n_, n_);
  out.resize(n_ * n_);
  Eigen::Map<ComplexMatrix> res(out.data(), n_, n_);

  // -i [H, rho]
  ComplexMatrix acc = h_ * rho;
  acc.noalias() -= rho * h_;
  res = Complex(0, -1) * acc;

  ComplexMatrix work1, work2;
  for (const auto& jump : jumps_) {
    if (jump.factors.empty()) {
      work1.noalias() = jump.op * rho;
      res.noalias() += jump.rate * (work1 * jump.op.adjoint());
      continue;
    }
    // A = f0 f1 ... (f0 leftmost); A rho applies the last factor first, and
    // (A rho) A^dag applies the daggered factors in the same reversed order.
    auto it = jump.factors.rbegin();
    left_mul_site(rho, it->local, dims_, it->site, work1);
    for (++it; it != jump.factors.rend(); ++it) {
      left_mul_site(work1, it->local, dims_, it->site, work2);
      work1.swap(work2);
    }
    for (auto jt = jump.factors.rbegin(); jt != jump.factors.rend(); ++jt) {
      right_mul_site(work1, jt->local.adjoint(), dims_, jt->site, work2);
      work1.swap(work2);
    }
    res.noalias() += jump.rate * work1;
  }

  // -1/2 {G, rho}
  if (gsum_diagonal_) {
    for (Eigen::Index r = 0; r < n_; ++r) {
      res.row(r).array() -=
          (0.5 * (gdiag_(r) + gdiag_.transpose().array())).cast<Complex>() *
          rho.row(r).array();
    }
  } else {
    res.noalias() -= 0.5 * (gsum_ * rho);
    res.noalias() -= 0.5 * (rho * gsum_);
  }
}

}  // namespace udsim
