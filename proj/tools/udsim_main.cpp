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

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "udsim/experiment.hpp"
#include "udsim/mitigation.hpp"
#include "udsim/noise.hpp"
#include "udsim/operators.hpp"
#include "udsim/subspace.hpp"

namespace {

using udsim::ComplexMatrix;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<udsim::Method> parse_methods(const std::string& csv) {
  std::vector<udsim::Method> methods;
  std::stringstream ss(csv);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) methods.push_back(udsim::method_from_name(token));
  }
  return methods;
}

void print_summary(const udsim::BiasReport& report,
                   const std::vector<std::string>& paths, double elapsed) {
  const double t_last = report.config.time_grid.back();
  std::printf("%-14s %14s %14s\n", "method", "mean |bias|", "max |bias|");
  for (udsim::Method m : report.config.methods) {
    double sum = 0.0, mx = 0.0;
    int count = 0;
    for (const auto& row : report.rows) {
      if (row.method != m || row.time != t_last) continue;
      sum += row.abs_bias;
      mx = std::max(mx, row.abs_bias);
      ++count;
    }
    if (count == 0) continue;
    std::printf("%-14s %14.6e %14.6e\n", udsim::method_name(m).c_str(),
                sum / count, mx);
  }
  if (!report.instance_errors.empty()) {
    std::printf("%zu instance(s) failed:\n", report.instance_errors.size());
    for (const auto& err : report.instance_errors) {
      std::printf("  %s\n", err.c_str());
    }
  }
  for (const auto& p : paths) std::printf("wrote %s\n", p.c_str());
  std::printf("done in %.1f s\n", elapsed);
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  const Eigen::Index dim = j.at("dim").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != dim * dim) {
    throw udsim::IoError("matrix data length does not match dim^2");
  }
  ComplexMatrix m(dim, dim);
  Eigen::Index k = 0;
  for (const auto& entry : data) {
    m(k / dim, k % dim) =
        udsim::Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    ++k;
  }
  return m;
}

int run_verify(const std::string& model_path, double tol,
               const std::string& json_out) {
  std::ifstream in(model_path);
  if (!in) {
    std::fprintf(stderr, "cannot open %s\n", model_path.c_str());
    return 1;
  }
  nlohmann::json j = nlohmann::json::parse(in);
  const auto dims = j.at("dims").get<std::vector<int>>();
  const Eigen::Index dim = udsim::product_dim(dims);

  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  if (j.contains("hamiltonian")) {
    const auto& hj = j.at("hamiltonian");
    const std::string type = hj.value("type", std::string("zero"));
    if (type == "matrix") {
      h = matrix_from_json(hj);
    } else if (type == "tfim") {
      udsim::TfimParams params;
      const auto rows = hj.at("j").get<std::vector<std::vector<double>>>();
      const int nl = static_cast<int>(rows.size());
      params.j_coupling = Eigen::MatrixXd::Zero(nl, nl);
      for (int r = 0; r < nl; ++r) {
        for (int c = 0; c < nl; ++c) params.j_coupling(r, c) = rows[r][c];
      }
      const auto hs = hj.at("h").get<std::vector<double>>();
      params.h_field = Eigen::Map<const Eigen::VectorXd>(
          hs.data(), static_cast<Eigen::Index>(hs.size()));
      const auto enc = udsim::build_dualrail_subspace(
          static_cast<int>(dims.size()));
      h = udsim::build_tfim_hamiltonian(params, enc);
    } else if (type != "zero") {
      throw udsim::IoError("hamiltonian.type must be zero, tfim or matrix");
    }
  }

  udsim::LindbladModel model;
  const std::string family = j.value("family", std::string("relaxation"));
  if (family == "relaxation") {
    model = udsim::relaxation_model(static_cast<int>(dims.size()),
                                    j.at("rates").get<std::vector<double>>(), h);
  } else if (family == "qudit-damping") {
    model = udsim::qudit_damping_model(
        dims, j.at("rates").get<std::vector<double>>(), h);
  } else if (family == "correlated") {
    model = udsim::correlated_decay_model(
        dims, j.at("pair_rates").get<std::vector<double>>(), h,
        j.value("include_diagonal", true));
  } else if (family == "explicit") {
    std::vector<udsim::Dissipator> dissipators;
    int label = 0;
    for (const auto& dj : j.at("dissipators")) {
      udsim::Dissipator d;
      d.rate = dj.at("rate").get<double>();
      d.op = matrix_from_json(dj.at("matrix"));
      d.label = label++;
      dissipators.push_back(std::move(d));
    }
    model = udsim::make_lindblad_model(dims, h, std::move(dissipators));
  } else {
    throw udsim::IoError("family must be relaxation, qudit-damping, "
                         "correlated or explicit");
  }

  const auto& ej = j.at("encoding");
  const std::string flavor = ej.at("flavor").get<std::string>();
  udsim::SubspaceEncoding enc;
  if (flavor == "degree") {
    enc = udsim::build_degree_subspace(dims, ej.at("k").get<int>());
  } else if (flavor == "dual-rail") {
    enc = udsim::build_dualrail_subspace(static_cast<int>(dims.size()));
  } else {
    throw udsim::IoError("encoding.flavor must be degree or dual-rail");
  }

  const udsim::UdsCertificate cert = udsim::verify_uds(model, enc, tol);
  const udsim::DfsReport dfs = udsim::verify_dfs(model, enc, tol);

  std::printf("uds.holds           %s\n", cert.holds ? "true" : "false");
  std::printf("uds.gamma           %.12e\n", cert.gamma);
  std::printf("uds.c_scalar        %.12e\n", cert.c_scalar);
  std::printf("uds.residual_scalar %.12e\n", cert.residual_scalar);
  std::printf("uds.residual_leak   %.12e\n", cert.residual_leak);
  std::printf("uds.tolerance       %.12e\n", cert.tolerance);
  std::printf("dfs.holds           %s\n", dfs.holds ? "true" : "false");
  if (!dfs.holds) std::printf("dfs.diagnostic      %s\n", dfs.diagnostic.c_str());

  if (!json_out.empty()) {
    nlohmann::ordered_json out;
    out["schema"] = 1;
    out["uds"] = {{"holds", cert.holds},
                  {"gamma", cert.gamma},
                  {"c_scalar", cert.c_scalar},
                  {"residual_scalar", cert.residual_scalar},
                  {"residual_leak", cert.residual_leak},
                  {"tolerance", cert.tolerance}};
    out["dfs"] = {{"holds", dfs.holds}, {"diagnostic", dfs.diagnostic}};
    std::ofstream os(json_out);
    if (!os) throw udsim::IoError("cannot write " + json_out);
    os << out.dump(2) << "\n";
    std::printf("wrote %s\n", json_out.c_str());
  }
  return 0;
}

int run_bench(int n_qubits, int reps) {
  using udsim::ComplexVector;
  const auto enc = udsim::build_dualrail_subspace(n_qubits);
  udsim::TfimParams params;
  const int nl = n_qubits / 2;
  params.j_coupling = Eigen::MatrixXd::Constant(nl, nl, 0.5);
  params.j_coupling.diagonal().setZero();
  params.h_field = Eigen::VectorXd::Constant(nl, 0.5);
  const ComplexMatrix h = udsim::build_tfim_hamiltonian(params, enc);
  const udsim::LindbladModel model = udsim::relaxation_model(
      n_qubits, std::vector<double>(n_qubits, 1e-2), h);

  auto time_block = [&](const char* name, auto&& fn) {
    const double t0 = now_seconds();
    for (int r = 0; r < reps; ++r) fn();
    const double dt = (now_seconds() - t0) / reps;
    std::printf("%-28s %10.3f ms\n", name, dt * 1e3);
  };

  time_block("kron (register x register)", [&] {
    volatile auto x = udsim::kron(h, udsim::identity(4)).sum();
    (void)x;
  });
  const udsim::LindbladAction action(model);
  ComplexVector v = udsim::vectorize(
      ComplexMatrix(ComplexMatrix::Identity(h.rows(), h.cols()) /
                    static_cast<double>(h.rows())));
  time_block("generator apply", [&] {
    ComplexVector out;
    action.apply(v, out);
    volatile auto x = out.norm();
    (void)x;
  });
  time_block("expm_action to t=1", [&] {
    volatile auto x = udsim::expm_action(action, v, 1.0).norm();
    (void)x;
  });
  if (n_qubits <= 4) {
    time_block("assemble_liouvillian", [&] {
      volatile auto x = udsim::assemble_liouvillian(model).norm();
      (void)x;
    });
  }
  time_block("verify_uds", [&] {
    volatile auto x = udsim::verify_uds(model, enc).gamma;
    (void)x;
  });
  const auto circuit = udsim::trotterize_tfim(
      params, enc, 1.0, 20, std::vector<double>(n_qubits, 1e-2));
  ComplexMatrix rho0 = ComplexMatrix::Zero(h.rows(), h.cols());
  rho0(0, 0) = 1.0;
  time_block("evolve_density (20 steps)", [&] {
    volatile auto x = udsim::evolve_density(circuit, rho0).trace();
    (void)x;
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindblad open-system simulator with uniformly-decaying-"
               "subspace error mitigation"};
  app.require_subcommand(1);

  // shared experiment options
  struct ExperimentArgs {
    std::string config_path;
    std::string out_dir = "out";
    int threads = -1;
    std::int64_t instances = -1;
    std::int64_t shots = -1;
    std::int64_t trotter = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string observable;
    std::string methods;
    double scale = -1.0;
    bool equal_rates = false;
    bool no_aggregates = false;
    std::vector<double> times;
  };

  auto add_experiment_options = [](CLI::App* cmd, ExperimentArgs& args) {
    cmd->add_option("--config", args.config_path,
                    "JSON config (bare config or an emitted report.json)");
    cmd->add_option("--out-dir", args.out_dir, "output directory");
    cmd->add_option("--threads", args.threads, "worker threads (0 = auto)");
    cmd->add_option("--instances", args.instances, "number of random instances");
    cmd->add_option("--shots", args.shots, "shots per method (0 = exact)");
    cmd->add_option("--trotter", args.trotter, "Trotter steps (circuit)");
    cmd->add_option("--seed", args.seed, "base RNG seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--observable", args.observable, "z0 or x0");
    cmd->add_option("--methods", args.methods,
                    "comma list: unmitigated,dualrail,uds-averaged,pec");
    cmd->add_option("--scale", args.scale, "rate-deviation scale factor s");
    cmd->add_flag("--equal-rates", args.equal_rates,
                  "force all decay rates to gamma_mean");
    cmd->add_flag("--no-aggregates", args.no_aggregates,
                  "skip the per-figure aggregate CSVs");
    cmd->add_option("--times", args.times, "explicit time grid");
  };

  ExperimentArgs analog_args, circuit_args;
  CLI::App* analog = app.add_subcommand(
      "analog", "continuous Lindblad evolution experiment (TFIM, dual-rail)");
  add_experiment_options(analog, analog_args);
  CLI::App* circuit = app.add_subcommand(
      "circuit", "Trotterized circuit experiment with damping channels");
  add_experiment_options(circuit, circuit_args);

  std::string verify_model, verify_json;
  double verify_tol = udsim::kDefaultCertTol;
  CLI::App* verify = app.add_subcommand(
      "verify", "certify a model file for uniform decay and DFS conditions");
  verify->add_option("--model", verify_model, "model JSON file")->required();
  verify->add_option("--tol", verify_tol, "certificate tolerance");
  verify->add_option("--json", verify_json, "write the result as JSON");

  int bench_qubits = 6;
  int bench_reps = 3;
  CLI::App* bench = app.add_subcommand("bench", "quick performance timings");
  bench->add_option("--qubits", bench_qubits, "register size");
  bench->add_option("--reps", bench_reps, "repetitions per timing");

  CLI11_PARSE(app, argc, argv);

  auto run = [&](const ExperimentArgs& args, udsim::ExperimentKind kind) {
    udsim::ExperimentConfig config;
    if (!args.config_path.empty()) {
      config = udsim::load_config_file(args.config_path);
    } else {
      config.kind = kind;
      if (kind == udsim::ExperimentKind::kCircuit) {
        config.n_physical = 4;
        config.n_logical = 2;
        config.degree_k = 2;
        config.methods = {udsim::Method::kDualRail, udsim::Method::kUdsAveraged};
      }
    }
    config.kind = kind;
    if (args.instances >= 0) config.n_instances = static_cast<int>(args.instances);
    if (args.shots >= 0) config.n_shots = static_cast<std::uint64_t>(args.shots);
    if (args.trotter >= 0) config.n_trotter = static_cast<int>(args.trotter);
    if (args.seed_set) config.seed = args.seed;
    if (!args.observable.empty()) config.observable = args.observable;
    if (!args.methods.empty()) config.methods = parse_methods(args.methods);
    if (args.scale >= 0.0) config.deviation_scale = args.scale;
    if (args.equal_rates) config.equal_rates = true;
    if (args.threads >= 0) config.threads = args.threads;
    if (!args.times.empty()) config.time_grid = args.times;

    const double t0 = now_seconds();
    const udsim::BiasReport report =
        kind == udsim::ExperimentKind::kAnalog
            ? udsim::run_analog_experiment(config)
            : udsim::run_circuit_experiment(config);
    const auto paths =
        udsim::emit_report(report, args.out_dir, !args.no_aggregates);
    print_summary(report, paths, now_seconds() - t0);
    return 0;
  };

  try {
    if (analog->parsed()) return run(analog_args, udsim::ExperimentKind::kAnalog);
    if (circuit->parsed())
      return run(circuit_args, udsim::ExperimentKind::kCircuit);
    if (verify->parsed()) return run_verify(verify_model, verify_tol, verify_json);
    if (bench->parsed()) return run_bench(bench_qubits, bench_reps);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
