// SPDX-License-Identifier: Apache-2.0
//
// csadc - compressive acquisition and sparse recovery toolkit
// Copyright (C) 2026 The csadc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "csadc_cli/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csadc/errors.hpp"
#include "csadc/evaluation.hpp"
#include "csadc/experiment.hpp"
#include "csadc/rng.hpp"
#include "csadc/serialize.hpp"
#include "csadc/solvers.hpp"

namespace csadc::cli {

namespace fs = std::filesystem;

namespace {

// Sub-seed streams, shared with the sweep harness.
constexpr std::uint64_t kBasisStream = 0;
constexpr std::uint64_t kCoeffStream = 1;
constexpr std::uint64_t kOperatorStream = 2;
constexpr std::uint64_t kNoiseStream = 3;

struct Globals {
  Seed seed = 0;
  bool seed_given = false;
  std::string out = ".";
  std::string config;
};

struct GenerateArgs {
  std::size_t n = 0;
  std::size_t k = 0;
  std::string basis = "identity";
  double amp_low = 1.0;
  double amp_high = 2.0;
  bool one_signed = false;
};

struct AcquireArgs {
  std::string signal;
  std::string truth;
  std::string basis = "identity";
  Seed basis_seed = 0;
  std::string mode = "discrete";
  std::size_t l = 0;
  std::string matrix = "gaussian";
  std::size_t m = 0;
  std::size_t segments = 0;
  std::size_t fingers = 0;
  std::size_t overlap = 0;
  std::string window = "rectangular";
  double noise = 0.0;
};

struct ReconstructArgs {
  std::string in;
  std::string truth;
  std::string solver = "omp";
  std::size_t kmax = 0;
  std::optional<double> tol;
  std::optional<double> epsilon;
  std::optional<double> p;
  std::optional<double> lambda;
  std::optional<std::size_t> max_iters;
  std::string step = "backtracking";
  bool continuation = false;
};

struct SweepArgs {
  unsigned threads = 0;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::string load_config(const Globals& g, std::initializer_list<std::string_view> allowed) {
  const std::string text = read_text_file(g.config);
  const std::string mode = config_mode(text);
  for (std::string_view a : allowed)
    if (mode == a) return text;
  std::string want;
  for (std::string_view a : allowed) want += (want.empty() ? "" : "|") + std::string(a);
  throw ValidationError("config '" + g.config + "': mode '" + mode + "' does not fit this command (expected " + want +
                        ")");
}

int cmd_generate(const Globals& g, const GenerateArgs& a, std::ostream& out) {
  if (!g.config.empty()) throw ValidationError("generate takes its settings from flags, not --config");
  const SparsityProfile profile{a.k, a.amp_low, a.amp_high, !a.one_signed};
  if (a.k > a.n) throw ValidationError("k exceeds n");
  const Basis basis = make_basis(parse_basis_kind(a.basis), a.n, derive_seed(g.seed, kBasisStream));
  TruthRecord truth{basis.meta(), profile, g.seed,
                    sample_sparse_coefficients(profile, a.n, derive_seed(g.seed, kCoeffStream))};
  const SignalVector x = synthesize(basis, truth.alpha);

  const fs::path dir(g.out);
  ensure_dir(dir);
  write_text_file(dir / "signal.csv", vector_csv(x.samples));
  write_text_file(dir / "truth.json", truth_json(truth));
  out << "generated n=" << a.n << " k=" << a.k << " in " << (dir / "").string() << '\n';
  return kOk;
}

AcquireConfig acquire_config_from_flags(const Globals& g, const AcquireArgs& a, std::size_t n, const BasisMeta& basis) {
  AcquireConfig c;
  c.mode = parse_acquire_mode(a.mode);
  c.n = n;
  c.basis = basis;
  c.noise_sigma = a.noise;
  c.noise_seed = derive_seed(g.seed, kNoiseStream);
  const Seed op_seed = derive_seed(g.seed, kOperatorStream);
  switch (c.mode) {
    case AcquireMode::discrete:
      if (a.l == 0) throw ValidationError("--mode discrete needs --l");
      c.l = a.l;
      c.matrix = parse_matrix_kind(a.matrix);
      c.matrix_seed = op_seed;
      break;
    case AcquireMode::serial:
      if (a.m == 0) throw ValidationError("--mode serial needs --m");
      c.demod.n = n;
      c.demod.m = a.m;
      c.demod.chip_seed = op_seed;
      break;
    case AcquireMode::pscs:
      if (a.segments == 0 || a.fingers == 0) throw ValidationError("--mode pscs needs --segments and --fingers");
      c.plan = WindowPlan::tiling(n, a.segments, a.overlap, parse_window_kind(a.window));
      c.bank = FingerBank::with_seeds(a.fingers, op_seed);
      break;
  }
  return c;
}

int cmd_acquire(const Globals& g, const AcquireArgs& a, std::ostream& out) {
  std::optional<AcquireConfig> from_file;
  if (!g.config.empty()) from_file = parse_acquire_config(load_config(g, {"discrete", "serial", "pscs"}));
  if (a.signal.empty()) throw ValidationError("acquire needs --signal");

  const SignalVector x{parse_vector_csv(read_text_file(a.signal))};
  const auto n = static_cast<std::size_t>(x.samples.size());
  AcquireConfig c;
  if (from_file) {
    c = *from_file;
    if (c.n != n) throw DimensionError("config n does not match the signal length");
  } else {
    BasisMeta basis{parse_basis_kind(a.basis), n, a.basis_seed};
    if (!a.truth.empty()) basis = parse_truth(read_text_file(a.truth)).basis;
    c = acquire_config_from_flags(g, a, n, basis);
  }
  c.validate();
  const Acquisition acq = run_acquisition(c, x);

  const fs::path dir(g.out);
  ensure_dir(dir);
  if (c.mode == AcquireMode::pscs)
    write_text_file(dir / "measurements.csv", pscs_csv(PscsMeasurement{acq.y, c.plan, c.bank}));
  else
    write_text_file(dir / "measurements.csv", vector_csv(acq.y));
  write_text_file(dir / "operator.csv", matrix_csv(acq.op.matrix()));
  write_text_file(dir / "acquisition.json", acquire_config_json(c));
  out << "acquired " << acq.y.size() << " measurements from n=" << n << " (" << to_string(c.mode) << ") in "
      << (dir / "").string() << '\n';
  return kOk;
}

SolverConfig solver_from_flags(const ReconstructArgs& a) {
  SolverConfig c;
  c.kind = parse_solver_kind(a.solver);
  c.k_max = a.kmax;
  if (a.tol) c.residual_tol = *a.tol;
  c.epsilon = a.epsilon;
  if (a.p) c.p = *a.p;
  c.lambda = a.lambda;
  if (a.max_iters) c.max_iters = *a.max_iters;
  c.step_rule = parse_step_rule(a.step);
  c.continuation = a.continuation;
  return c;
}

int cmd_reconstruct(const Globals& g, const ReconstructArgs& a, std::ostream& out) {
  const SolverConfig solver = g.config.empty() ? solver_from_flags(a) : parse_solver_config(load_config(g, {"solver"}));
  solver.validate();
  if (a.in.empty()) throw ValidationError("reconstruct needs --in (an acquire output directory)");

  const fs::path in(a.in);
  const AcquireConfig acq = parse_acquire_config(read_text_file(in / "acquisition.json"));
  const std::string meas = read_text_file(in / "measurements.csv");
  const Vector y = acq.mode == AcquireMode::pscs ? parse_pscs_csv(meas) : parse_vector_csv(meas);
  const Matrix phi = parse_matrix_csv(read_text_file(in / "operator.csv"));
  if (static_cast<std::size_t>(phi.cols()) != acq.n || phi.rows() != y.size())
    throw DimensionError("operator.csv does not match measurements.csv and acquisition.json");

  std::optional<TruthRecord> truth;
  if (!a.truth.empty()) {
    truth = parse_truth(read_text_file(a.truth));
    if (!(truth->basis == acq.basis)) throw ValidationError("truth basis does not match the acquisition basis");
  }

  const Basis basis = make_basis(acq.basis);
  const Matrix system = phi * basis.matrix();
  const ReconstructionResult r = solve(system, y, solver);
  const SignalVector xhat = synthesize(basis, r.alpha_star);

  std::optional<RecoveryMetrics> metrics;
  if (truth) metrics = score(truth->alpha, r, basis);

  const fs::path dir(g.out);
  ensure_dir(dir);
  write_text_file(dir / "alpha_star.csv", vector_csv(r.alpha_star.values));
  write_text_file(dir / "xhat.csv", vector_csv(xhat.samples));
  write_text_file(dir / "metrics.json", reconstruction_report_json(r, solver, metrics));
  write_text_file(dir / "trace.csv", trace_csv(r));
  write_text_file(dir / "solver.json", solver_config_json(solver));
  out << to_string(solver.kind) << ": " << (r.converged ? "converged" : "not converged") << " ("
      << to_string(r.stop_reason) << ") after " << r.iterations << " iterations, residual "
      << format_double(r.residual_norm) << '\n';
  return kOk;
}

int cmd_sweep(const Globals& g, const SweepArgs& a, std::ostream& out) {
  if (g.config.empty()) throw ValidationError("sweep needs --config");
  SweepSpec spec = parse_sweep_spec(load_config(g, {"sweep"}));
  if (g.seed_given) spec.base_seed = g.seed;
  const auto rows = run_sweep(spec, a.threads);
  const fs::path dir(g.out);
  ensure_dir(dir);
  write_text_file(dir / "sweep.csv", sweep_csv(rows));
  write_text_file(dir / "sweep_config.json", sweep_spec_json(spec));
  out << "sweep: " << rows.size() << " rows in " << (dir / "sweep.csv").string() << '\n';
  return kOk;
}

int cmd_energy(const Globals& g, std::ostream& out) {
  const EnergyStudy study = g.config.empty() ? EnergyStudy{} : parse_energy_study(load_config(g, {"energy"}));
  const EnergyStudyReport report = run_energy_study(study);
  const fs::path dir(g.out);
  ensure_dir(dir);
  write_text_file(dir / "energy.json", energy_study_report_json(study, report));
  write_text_file(dir / "energy_config.json", energy_study_json(study));
  out << "energy ratio (low/high power) " << format_double(report.energy_ratio) << ", savings "
      << format_double(report.high_power.savings_fraction) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"csadc: compressive acquisition and sparse recovery experiments", "csadc"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Base seed for every random draw")->each([&g](const std::string&) {
    g.seed_given = true;
  });
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--config", g.config, "JSON config with a top-level \"mode\" field");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Plant a sparse signal");
  generate->add_option("--n", gen.n, "Signal length")->required();
  generate->add_option("--k", gen.k, "Nonzero coefficients")->required();
  generate->add_option("--basis", gen.basis, "identity | dft_real | random_orthonormal")->capture_default_str();
  generate->add_option("--amp-low", gen.amp_low, "Smallest nonzero magnitude")->capture_default_str();
  generate->add_option("--amp-high", gen.amp_high, "Largest nonzero magnitude")->capture_default_str();
  generate->add_flag("--positive", gen.one_signed, "Keep all nonzeros positive");

  AcquireArgs acq;
  auto* acquire = app.add_subcommand("acquire", "Measure a signal with one of the acquisition pipelines");
  acquire->add_option("--signal", acq.signal, "signal.csv from generate");
  acquire->add_option("--truth", acq.truth, "truth.json; supplies the sparsity basis");
  acquire->add_option("--basis", acq.basis, "Sparsity basis when no truth file is given")->capture_default_str();
  acquire->add_option("--basis-seed", acq.basis_seed, "Seed of a random_orthonormal basis");
  acquire->add_option("--mode", acq.mode, "discrete | serial | pscs")->capture_default_str();
  acquire->add_option("--l", acq.l, "Measurements (discrete)");
  acquire->add_option("--matrix", acq.matrix, "gaussian | bernoulli (discrete)")->capture_default_str();
  acquire->add_option("--m", acq.m, "Decimation factor (serial)");
  acquire->add_option("--segments", acq.segments, "Segments (pscs)");
  acquire->add_option("--fingers", acq.fingers, "Fingers per segment (pscs)");
  acquire->add_option("--overlap", acq.overlap, "Samples shared by adjacent segments (pscs)");
  acquire->add_option("--window", acq.window, "rectangular | triangular (pscs)")->capture_default_str();
  acquire->add_option("--noise", acq.noise, "Measurement noise standard deviation");

  ReconstructArgs rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "Recover the sparse coefficients");
  reconstruct->add_option("--in", rec.in, "Directory written by acquire");
  reconstruct->add_option("--truth", rec.truth, "truth.json for recovery metrics");
  reconstruct->add_option("--solver", rec.solver, "omp | sl1gd | pnormgd")->capture_default_str();
  reconstruct->add_option("--kmax", rec.kmax, "OMP atom limit (0 = number of measurements)");
  reconstruct->add_option("--tol", rec.tol, "Residual (OMP) or gradient (GD) tolerance");
  reconstruct->add_option("--epsilon", rec.epsilon, "Smoothing width");
  reconstruct->add_option("--p", rec.p, "Penalty order, 1 < p <= 1.5");
  reconstruct->add_option("--lambda", rec.lambda, "Penalty weight");
  reconstruct->add_option("--max-iters", rec.max_iters, "Iteration cap for GD");
  reconstruct->add_option("--step", rec.step, "backtracking | fixed_lipschitz")->capture_default_str();
  reconstruct->add_flag("--continuation", rec.continuation, "Shrink epsilon in three stages");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Success-rate sweep over (k, l)");
  sweep->add_option("--threads", sw.threads, "Worker threads (0 = hardware concurrency)");

  auto* energy = app.add_subcommand("energy", "Transmission energy for raw vs compressed samples");

  // CLI11 consumes arguments from the back.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    if (generate->parsed()) return cmd_generate(g, gen, out);
    if (acquire->parsed()) return cmd_acquire(g, acq, out);
    if (reconstruct->parsed()) return cmd_reconstruct(g, rec, out);
    if (sweep->parsed()) return cmd_sweep(g, sw, out);
    if (energy->parsed()) return cmd_energy(g, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}

}  // namespace csadc::cli
