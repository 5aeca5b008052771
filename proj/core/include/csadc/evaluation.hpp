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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "csadc/model.hpp"
#include "csadc/sensing.hpp"
#include "csadc/solvers.hpp"

namespace csadc {

struct RecoveryMetrics {
  bool support_exact = false;
  double coeff_err_inf = 0.0;
  /// 10 log10(|x|^2 / |x - x*|^2) in the signal domain; +inf when x* == x.
  double reconstruction_snr_db = 0.0;
  std::size_t iterations = 0;
};

/// Support of alpha* is {i : |alpha*_i| > 1e-6 * max(1, max |alpha*|)}.
RecoveryMetrics score(const CoefficientVector& alpha_true, const ReconstructionResult& result, const Basis& basis);

/// Indices with |v_i| > rel * max(1, max |v|).
std::vector<std::size_t> thresholded_support(const Vector& v, double rel = 1e-6);

double reconstruction_snr_db(const Vector& x, const Vector& x_hat);

enum class Pipeline { discrete, serial_demod, pscs };

std::string_view to_string(Pipeline p);
Pipeline parse_pipeline(std::string_view name);

struct SweepSpec {
  std::size_t n = 64;
  std::vector<std::size_t> k_list{1};
  std::vector<std::size_t> l_list{32};
  std::size_t trials = 10;
  Seed base_seed = 0;
  Pipeline pipeline = Pipeline::discrete;
  SolverConfig solver;
  BasisKind basis = BasisKind::identity;
  /// discrete pipeline only
  MatrixKind matrix = MatrixKind::gaussian;
  /// pscs pipeline only; fingers per segment = l / segments
  std::size_t segments = 4;
  double amplitude_low = 1.0;
  double amplitude_high = 2.0;
  bool sign_symmetric = true;
  double noise_sigma = 0.0;

  void validate() const;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// One seeded problem: truth, operator acting on coefficients, measurements.
struct TrialInstance {
  Basis basis;
  CoefficientVector truth;
  SignalVector signal;
  Matrix a;
  Vector y;
};

/// Trial t draws everything from seed base_seed + t, split into
/// independent streams with derive_seed: 0 basis, 1 coefficients,
/// 2 operator/chips, 3 noise.
TrialInstance make_trial(const SweepSpec& spec, std::size_t k, std::size_t l, std::size_t trial);

struct TrialOutcome {
  bool success = false;
  RecoveryMetrics metrics;
};

/// Success means exact support and coeff_err_inf < 1e-6. Solver exceptions
/// count as failure.
TrialOutcome run_trial(const SweepSpec& spec, std::size_t k, std::size_t l, std::size_t trial);

struct SweepRow {
  std::size_t k = 0;
  std::size_t l = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  /// Per-trial SNR is clipped to kSnrCapDb before averaging.
  double mean_snr_db = 0.0;
  double mean_iters = 0.0;
};

inline constexpr double kSnrCapDb = 400.0;

/// Rows in (k, l) lexicographic order. threads == 0 uses the hardware
/// concurrency; output never depends on the thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Radio energy model: E = current * voltage * airtime,
/// airtime = samples * bits_per_sample / bitrate.
struct EnergyModel {
  double current_ma = 17.4;
  double voltage_v = 3.0;
  double bitrate_bps = 250000.0;
  std::size_t bits_per_sample = 12;

  void validate() const;
  friend bool operator==(const EnergyModel&, const EnergyModel&) = default;
};

/// CC2420 transmit currents (TelosB) at -10 dBm and 0 dBm output power.
inline constexpr double kCc2420CurrentMinus10DbmMa = 11.0;
inline constexpr double kCc2420Current0DbmMa = 17.4;

double airtime_seconds(std::size_t samples_sent, const EnergyModel& model);
double estimate_energy(std::size_t samples_sent, const EnergyModel& model);

struct RateReductionReport {
  std::size_t n = 0;
  std::size_t l = 0;
  double compression_ratio = 0.0;
  double raw_airtime_s = 0.0;
  double compressed_airtime_s = 0.0;
  double raw_energy_j = 0.0;
  double compressed_energy_j = 0.0;
  double savings_fraction = 0.0;
  EnergyModel model;
};

/// Energy for sending n raw samples versus l compressed measurements per
/// block. Processor energy for compression is not modeled.
RateReductionReport rate_reduction_report(std::size_t n, std::size_t l, const EnergyModel& model);

}  // namespace csadc
