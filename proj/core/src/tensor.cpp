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

#include "udsim/tensor.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace udsim {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   std::int64_t max_entries) {
  const std::int64_t rows = std::int64_t{a.rows()} * b.rows();
  const std::int64_t cols = std::int64_t{a.cols()} * b.cols();
  if (rows <= 0 || cols <= 0 || rows * cols > max_entries) {
    throw DimensionError("kron: result of " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " exceeds the entry cap");
  }
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors,
                       std::int64_t max_entries) {
  if (factors.empty()) {
    return ComplexMatrix::Identity(1, 1);
  }
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) {
    out = kron(out, factors[i], max_entries);
  }
  return out;
}

double norm_1(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double norm_inf(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

namespace {

// Deterministic pseudo-random start vector for the Lanczos iteration.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexVector lanczos_start(Eigen::Index n) {
  std::uint64_t s = 0x5DEECE66DULL;
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = static_cast<double>(splitmix64(s) >> 11) * 0x1p-53;
    const double im = static_cast<double>(splitmix64(s) >> 11) * 0x1p-53;
    v(i) = Complex(2 * re - 1, 2 * im - 1);
  }
  v.normalize();
  return v;
}

// Largest eigenvalue of m^dag m via Lanczos with full reorthogonalization.
double largest_gram_eigenvalue(const ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  const int max_iters = static_cast<int>(std::min<Eigen::Index>(n, 300));
  std::vector<ComplexVector> basis;
  basis.reserve(max_iters);
  std::vector<double> alpha, beta;

  ComplexVector v = lanczos_start(n);
  ComplexVector w(n);
  double theta = 0.0;
  for (int j = 0; j < max_iters; ++j) {
    basis.push_back(v);
    w.noalias() = m.adjoint() * (m * v);
    double a = std::real(v.dot(w));
    w -= a * v;
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    // full reorthogonalization keeps the Ritz values honest
    for (const auto& u : basis) w -= u.dot(w) * u;
    alpha.push_back(a);
    const double b = w.norm();

    // Ritz extraction on the tridiagonal section
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(j + 1, j + 1);
    for (int i = 0; i <= j; ++i) tri(i, i) = alpha[i];
    for (int i = 0; i + 1 <= j; ++i) {
      tri(i, i + 1) = beta[i];
      tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    theta = es.eigenvalues().maxCoeff();
    int top = 0;
    es.eigenvalues().maxCoeff(&top);
    const double resid = b * std::abs(es.eigenvectors()(j, top));
    if (resid <= 1e-13 * std::max(theta, 1e-300) || b <= 1e-300) {
      return std::max(theta, 0.0);
    }
    beta.push_back(b);
    v = w / b;
  }
  return std::max(theta, 0.0);
}

}  // namespace

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  if (m.rows() <= 256 && m.cols() <= 256) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
  }
  // the Gram problem is cheaper on the narrow side
  if (m.cols() > m.rows()) {
    return std::sqrt(largest_gram_eigenvalue(m.adjoint()));
  }
  return std::sqrt(largest_gram_eigenvalue(m));
}

double operator_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("operator_norm: matrix must be square");
  }
  return spectral_norm(m);
}

DenseMap::DenseMap(const ComplexMatrix& m) : m_(&m), norm1_(norm_1(m)) {
  if (m.rows() != m.cols()) {
    throw ShapeError("expm_action: matrix must be square");
  }
}

void DenseMap::apply(const ComplexVector& in, ComplexVector& out) const {
  out.noalias() = (*m_) * in;
}

ComplexVector expm_action(const LinearMap& op, const ComplexVector& v,
                          double t, double tol) {
  if (op.dim() != v.size()) {
    throw ShapeError("expm_action: operator dim " + std::to_string(op.dim()) +
                     " vs vector dim " + std::to_string(v.size()));
  }
  if (!(tol > 0.0)) {
    throw DomainError("expm_action: tol must be positive");
  }
  const double anorm = op.norm_bound();
  if (t == 0.0 || anorm == 0.0 || v.norm() == 0.0) {
    return v;
  }

  const double total = std::abs(t);
  const double dir = t < 0 ? -1.0 : 1.0;
  constexpr double theta = 3.5;  // target ||M h|| per substep
  constexpr int max_terms = 48;
  const double h_cap = 6.0 / anorm;

  double h = std::min(total, theta / anorm);
  double done = 0.0;
  ComplexVector w = v;
  ComplexVector term(v.size()), tmp(v.size()), acc(v.size());

  while (total - done > total * 1e-15) {
    h = std::min({h, h_cap, total - done});
    const double eps = 0.5 * tol * (h / total);
    acc = w;
    term = w;
    bool converged = false;
    int used = 0;
    for (int j = 1; j <= max_terms; ++j) {
      op.apply(term, tmp);
      term = tmp * Complex(dir * h / j, 0.0);
      acc += term;
      used = j;
      // accept once the remaining tail is geometrically dominated
      if (static_cast<double>(j) > h * anorm &&
          term.norm() <= eps * acc.norm()) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      h *= 0.5;
      if (h < total * 1e-15 || h < 1e-300) {
        throw ConvergenceError("expm_action: step underflow at t = " +
                                   std::to_string(dir * done),
                               dir * done);
      }
      continue;
    }
    w.swap(acc);
    done += h;
    if (used < 20) h *= 2.0;
  }
  return w;
}

ComplexVector expm_action(const ComplexMatrix& m, const ComplexVector& v,
                          double t, double tol) {
  DenseMap map(m);
  return expm_action(map, v, t, tol);
}

EigResult eig(const ComplexMatrix& m, Eigen::Index dim_limit) {
  if (m.rows() != m.cols()) {
    throw ShapeError("eig: matrix must be square");
  }
  if (m.rows() > dim_limit) {
    throw DimensionError("eig: dim " + std::to_string(m.rows()) +
                         " exceeds the spectral limit " +
                         std::to_string(dim_limit));
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw SpectralError("eig: QR iteration failed to converge");
  }
  EigResult result{solver.eigenvalues(), solver.eigenvectors()};

  // residual check ||m v - lambda v|| <= 1e-8 * scale per pair
  const double scale = std::max(norm_inf(m), 1e-300);
  ComplexMatrix resid = m * result.right_vectors -
                        result.right_vectors * result.values.asDiagonal();
  for (Eigen::Index i = 0; i < resid.cols(); ++i) {
    if (resid.col(i).norm() > 1e-8 * scale) {
      throw SpectralError("eig: residual " +
                          std::to_string(resid.col(i).norm()) +
                          " too large for eigenpair " + std::to_string(i));
    }
  }
  return result;
}

}  // namespace udsim
