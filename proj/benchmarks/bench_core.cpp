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

#include <benchmark/benchmark.h>

#include "udsim/circuit.hpp"
#include "udsim/liouville.hpp"
#include "udsim/mitigation.hpp"
#include "udsim/noise.hpp"
#include "udsim/operators.hpp"
#include "udsim/subspace.hpp"

namespace {

using namespace udsim;

struct BenchSetup {
  SubspaceEncoding enc;
  TfimParams params;
  LindbladModel model;
  ComplexMatrix rho0;

  explicit BenchSetup(int n) {
    enc = build_dualrail_subspace(n);
    const int nl = n / 2;
    params.j_coupling = Eigen::MatrixXd::Constant(nl, nl, 0.5);
    params.j_coupling.diagonal().setZero();
    params.h_field = Eigen::VectorXd::Constant(nl, 0.4);
    const ComplexMatrix h = build_tfim_hamiltonian(params, enc);
    model = relaxation_model(n, std::vector<double>(n, 1e-2), h);
    rho0 = ComplexMatrix::Zero(enc.total_dim(), enc.total_dim());
    rho0(0, 0) = 1.0;
  }
};

void BM_Kron(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const ComplexMatrix a = ComplexMatrix::Random(n, n);
  const ComplexMatrix b = ComplexMatrix::Random(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kron(a, b));
  }
}
BENCHMARK(BM_Kron)->Arg(16)->Arg(64);

void BM_GeneratorApply(benchmark::State& state) {
  const BenchSetup setup(static_cast<int>(state.range(0)));
  const LindbladAction action(setup.model);
  ComplexVector v = vectorize(setup.rho0);
  ComplexVector out(v.size());
  for (auto _ : state) {
    action.apply(v, out);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_GeneratorApply)->Arg(4)->Arg(6);

void BM_ExpmAction(benchmark::State& state) {
  const BenchSetup setup(static_cast<int>(state.range(0)));
  const LindbladAction action(setup.model);
  const ComplexVector v = vectorize(setup.rho0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm_action(action, v, 1.0));
  }
}
BENCHMARK(BM_ExpmAction)->Arg(4)->Arg(6);

void BM_AssembleLiouvillian(benchmark::State& state) {
  const BenchSetup setup(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_liouvillian(setup.model));
  }
}
BENCHMARK(BM_AssembleLiouvillian)->Arg(4);

void BM_VerifyUds(benchmark::State& state) {
  const BenchSetup setup(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_uds(setup.model, setup.enc));
  }
}
BENCHMARK(BM_VerifyUds)->Arg(4)->Arg(6);

void BM_EvolveDensity(benchmark::State& state) {
  const BenchSetup setup(4);
  const TrotterCircuit circuit =
      trotterize_tfim(setup.params, setup.enc, 1.0,
                      static_cast<int>(state.range(0)),
                      std::vector<double>(4, 1e-2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_density(circuit, setup.rho0));
  }
}
BENCHMARK(BM_EvolveDensity)->Arg(20)->Arg(80);

void BM_PauliDecompose(benchmark::State& state) {
  const BenchSetup setup(4);
  const ComplexMatrix obs = project_into(setup.enc, logical_x(setup.enc, 0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pauli_decompose(obs));
  }
}
BENCHMARK(BM_PauliDecompose);

}  // namespace

BENCHMARK_MAIN();
