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
#include <string_view>

#include "csadc/demodulator.hpp"
#include "csadc/evaluation.hpp"
#include "csadc/model.hpp"
#include "csadc/pscs.hpp"
#include "csadc/sensing.hpp"

/// File-level experiment records shared by the command-line front end and
/// anything else that wants to replay its runs.
namespace csadc {

enum class AcquireMode { discrete, serial, pscs };

std::string_view to_string(AcquireMode mode);
AcquireMode parse_acquire_mode(std::string_view name);

/// Fully resolved acquisition setup. Only the block matching `mode` is used.
struct AcquireConfig {
  AcquireMode mode = AcquireMode::discrete;
  std::size_t n = 0;
  /// Basis the signal is sparse in; carried along so reconstruction can
  /// compose the operator without a separate file.
  BasisMeta basis;

  std::size_t l = 0;
  MatrixKind matrix = MatrixKind::gaussian;
  Seed matrix_seed = 0;

  DemodConfig demod;

  WindowPlan plan;
  FingerBank bank;

  double noise_sigma = 0.0;
  Seed noise_seed = 0;

  std::size_t measurements() const;
  void validate() const;
};

struct Acquisition {
  Vector y;
  /// Signal-domain operator (acts on samples, not coefficients).
  MeasurementOperator op;
};

MeasurementOperator acquisition_operator(const AcquireConfig& config);

/// Runs the configured pipeline on x and adds seeded white noise.
Acquisition run_acquisition(const AcquireConfig& config, const SignalVector& x);

/// Planted ground truth written next to a generated signal.
struct TruthRecord {
  BasisMeta basis;
  SparsityProfile profile;
  Seed seed = 0;
  CoefficientVector alpha;
};

/// Two transmit settings compared at the same airtime.
struct EnergyStudy {
  std::size_t n = 256;
  std::size_t l = 64;
  double voltage_v = 3.0;
  double bitrate_bps = 250000.0;
  std::size_t bits_per_sample = 12;
  double low_power_current_ma = kCc2420CurrentMinus10DbmMa;
  double high_power_current_ma = kCc2420Current0DbmMa;

  EnergyModel model(double current_ma) const;
  void validate() const;
  friend bool operator==(const EnergyStudy&, const EnergyStudy&) = default;
};

struct EnergyStudyReport {
  RateReductionReport low_power;
  RateReductionReport high_power;
  /// Energy at the low setting over energy at the high one, same samples.
  double energy_ratio = 0.0;
};

EnergyStudyReport run_energy_study(const EnergyStudy& study);

}  // namespace csadc
