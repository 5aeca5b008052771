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

#include "csadc/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "csadc/demodulator.hpp"
#include "csadc/errors.hpp"
#include "csadc/pscs.hpp"
#include "csadc/serialize.hpp"

namespace csadc {

std::vector<std::size_t> thresholded_support(const Vector& v, double rel) {
  const double peak = v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
  const double threshold = rel * std::max(1.0, peak);
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > threshold) out.push_back(static_cast<std::size_t>(i));
  return out;
}

double reconstruction_snr_db(const Vector& x, const Vector& x_hat) {
  if (x.size() != x_hat.size()) throw DimensionError("reconstruction_snr_db: length mismatch");
  const double err = (x - x_hat).squaredNorm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(x.squaredNorm() / err);
}

RecoveryMetrics score(const CoefficientVector& alpha_true, const ReconstructionResult& result, const Basis& basis) {
  const Vector& est = result.alpha_star.values;
  if (alpha_true.n() != basis.n() || static_cast<std::size_t>(est.size()) != basis.n())
    throw DimensionError("score: dimensions disagree");
  RecoveryMetrics m;
  m.support_exact = thresholded_support(est) == alpha_true.support();
  m.coeff_err_inf = (est - alpha_true.values).cwiseAbs().maxCoeff();
  m.reconstruction_snr_db = reconstruction_snr_db(basis.matrix() * alpha_true.values, basis.matrix() * est);
  m.iterations = result.iterations;
  return m;
}

std::string_view to_string(Pipeline p) {
  switch (p) {
    case Pipeline::discrete: return "discrete";
    case Pipeline::serial_demod: return "serial_demod";
    case Pipeline::pscs: return "pscs";
  }
  return "unknown";
}

Pipeline parse_pipeline(std::string_view name) {
  if (name == "discrete") return Pipeline::discrete;
  if (name == "serial_demod" || name == "serial") return Pipeline::serial_demod;
  if (name == "pscs") return Pipeline::pscs;
  throw ValidationError("unknown pipeline '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  if (n < 2) throw ValidationError("sweep: n must be at least 2");
  if (trials == 0) throw ValidationError("sweep: trials must be at least 1");
  if (k_list.empty() || l_list.empty()) throw ValidationError("sweep: k_list and l_list must be non-empty");
  for (const std::size_t k : k_list)
    if (k == 0 || k > n) throw ValidationError("sweep: every k must be in [1, n]");
  for (const std::size_t l : l_list) {
    if (l == 0 || l >= n) throw ValidationError("sweep: every l must satisfy 1 <= l < n");
    if (pipeline == Pipeline::serial_demod && n % l != 0)
      throw ValidationError("sweep: serial_demod needs l dividing n (l=" + std::to_string(l) + ")");
    if (pipeline == Pipeline::pscs && l % segments != 0)
      throw ValidationError("sweep: pscs needs l divisible by segments (l=" + std::to_string(l) + ")");
  }
  if (pipeline == Pipeline::pscs && (segments == 0 || n % segments != 0))
    throw ValidationError("sweep: pscs needs segments dividing n");
  if (!(amplitude_low > 0.0) || !(amplitude_low <= amplitude_high))
    throw ValidationError("sweep: amplitude range must be positive and non-empty");
  if (!(noise_sigma >= 0.0)) throw ValidationError("sweep: noise_sigma must be nonnegative");
  solver.validate();
}

TrialInstance make_trial(const SweepSpec& spec, std::size_t k, std::size_t l, std::size_t trial) {
  const Seed seed = spec.base_seed + trial;
  Basis basis = make_basis(spec.basis, spec.n, derive_seed(seed, 0));
  CoefficientVector truth = sample_sparse_coefficients(
      SparsityProfile{k, spec.amplitude_low, spec.amplitude_high, spec.sign_symmetric}, spec.n, derive_seed(seed, 1));
  SignalVector signal = synthesize(basis, truth);
  const Seed op_seed = derive_seed(seed, 2);

  Matrix a;
  Vector y;
  switch (spec.pipeline) {
    case Pipeline::discrete: {
      const MeasurementOperator phi = make_measurement_matrix(spec.matrix, l, spec.n, op_seed);
      a = compose(phi, basis).matrix();
      y = phi.matrix() * signal.samples;
      break;
    }
    case Pipeline::serial_demod: {
      const SerialDemodulator demod(DemodConfig{spec.n, spec.n / l, DemodFilter::integrate_and_dump(), op_seed});
      a = demod.build_v_matrix(basis).matrix;
      y = demod.acquire(signal.samples);
      break;
    }
    case Pipeline::pscs: {
      const WindowPlan plan = WindowPlan::tiling(spec.n, spec.segments);
      const FingerBank bank = FingerBank::with_seeds(l / spec.segments, op_seed);
      a = build_pscs_matrix(basis, plan, bank).matrix();
      y = acquire_pscs(signal, plan, bank).y_joint;
      break;
    }
  }
  if (spec.noise_sigma > 0.0) {
    Rng rng(derive_seed(seed, 3));
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += spec.noise_sigma * rng.normal();
  }
  return TrialInstance{std::move(basis), std::move(truth), std::move(signal), std::move(a), std::move(y)};
}

TrialOutcome run_trial(const SweepSpec& spec, std::size_t k, std::size_t l, std::size_t trial) {
  TrialOutcome out;
  try {
    const TrialInstance inst = make_trial(spec, k, l, trial);
    const ReconstructionResult result = solve(inst.a, inst.y, spec.solver);
    out.metrics = score(inst.truth, result, inst.basis);
    out.success = out.metrics.support_exact && out.metrics.coeff_err_inf < 1e-6;
  } catch (const std::exception&) {
    out.success = false;
    out.metrics = RecoveryMetrics{false, std::numeric_limits<double>::infinity(), 0.0, 0};
  }
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  struct Job {
    std::size_t k, l, trial;
  };
  std::vector<Job> jobs;
  for (const std::size_t k : spec.k_list)
    for (const std::size_t l : spec.l_list)
      for (std::size_t t = 0; t < spec.trials; ++t) jobs.push_back({k, l, t});

  std::vector<TrialOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) outcomes[j] = run_trial(spec, jobs[j].k, jobs[j].l, jobs[j].trial);
  };
  unsigned count = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  count = static_cast<unsigned>(std::min<std::size_t>(count, jobs.size()));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  }

  // Reduce in (k, l, trial) order regardless of completion order.
  std::vector<SweepRow> rows;
  std::size_t j = 0;
  for (const std::size_t k : spec.k_list) {
    for (const std::size_t l : spec.l_list) {
      SweepRow row{k, l, spec.trials, 0.0, 0.0, 0.0};
      std::size_t successes = 0;
      double snr_sum = 0.0;
      double iter_sum = 0.0;
      for (std::size_t t = 0; t < spec.trials; ++t, ++j) {
        const TrialOutcome& o = outcomes[j];
        successes += o.success ? 1 : 0;
        snr_sum += std::clamp(o.metrics.reconstruction_snr_db, -kSnrCapDb, kSnrCapDb);
        iter_sum += static_cast<double>(o.metrics.iterations);
      }
      const auto trials = static_cast<double>(spec.trials);
      row.success_rate = static_cast<double>(successes) / trials;
      row.mean_snr_db = snr_sum / trials;
      row.mean_iters = iter_sum / trials;
      rows.push_back(row);
    }
  }
  // Lexicographic (k, l) order even when the lists are given unsorted.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.k != b.k ? a.k < b.k : a.l < b.l; });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "k,l,trials,success_rate,mean_snr_db,mean_iters\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.k) + ',' + std::to_string(r.l) + ',' + std::to_string(r.trials) + ',' +
           format_double(r.success_rate) + ',' + format_double(r.mean_snr_db) + ',' + format_double(r.mean_iters) +
           '\n';
  }
  return out;
}

void EnergyModel::validate() const {
  if (!(current_ma > 0.0) || !std::isfinite(current_ma)) throw ValidationError("energy model: current_ma must be positive");
  if (!(voltage_v > 0.0) || !std::isfinite(voltage_v)) throw ValidationError("energy model: voltage_v must be positive");
  if (!(bitrate_bps > 0.0) || !std::isfinite(bitrate_bps))
    throw ValidationError("energy model: bitrate_bps must be positive");
  if (bits_per_sample == 0) throw ValidationError("energy model: bits_per_sample must be positive");
}

double airtime_seconds(std::size_t samples_sent, const EnergyModel& model) {
  model.validate();
  return static_cast<double>(samples_sent) * static_cast<double>(model.bits_per_sample) / model.bitrate_bps;
}

double estimate_energy(std::size_t samples_sent, const EnergyModel& model) {
  return model.current_ma / 1000.0 * model.voltage_v * airtime_seconds(samples_sent, model);
}

RateReductionReport rate_reduction_report(std::size_t n, std::size_t l, const EnergyModel& model) {
  model.validate();
  if (l == 0) throw ValidationError("rate reduction: l must be at least 1");
  if (l >= n) throw ValidationError("rate reduction: l must be below n");
  RateReductionReport r;
  r.n = n;
  r.l = l;
  r.compression_ratio = static_cast<double>(l) / static_cast<double>(n);
  r.raw_airtime_s = airtime_seconds(n, model);
  r.compressed_airtime_s = airtime_seconds(l, model);
  r.raw_energy_j = estimate_energy(n, model);
  r.compressed_energy_j = estimate_energy(l, model);
  r.savings_fraction = 1.0 - r.compression_ratio;
  r.model = model;
  return r;
}

}  // namespace csadc
