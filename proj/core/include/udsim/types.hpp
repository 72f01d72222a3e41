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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace udsim {

using Complex = std::complex<double>;

// Row-major storage throughout, so that vectorize() is row stacking and the
// superoperator convention A rho B <-> (A kron B^T) |rho>> holds verbatim.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::Matrix<double, Eigen::Dynamic, 1>;

inline constexpr double kDefaultExpmTol = 1e-10;
inline constexpr double kDefaultCertTol = 1e-10;
inline constexpr std::int64_t kMaxDenseEntries = std::int64_t{1} << 26;
inline constexpr Eigen::Index kSpectralDimLimit = 4096;

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integrator could not reach the requested time; carries how far it got.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_time(achieved) {}
  double achieved_time;
};

struct SpectralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnsembleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OverheadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Post-selection kept zero shots; carries the estimated acceptance rate.
struct DegenerateSampleError : std::runtime_error {
  DegenerateSampleError(const std::string& what, double acceptance)
      : std::runtime_error(what), acceptance_estimate(acceptance) {}
  double acceptance_estimate;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace udsim
