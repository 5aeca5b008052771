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

#include "csadc/experiment.hpp"

#include <array>

#include "csadc/errors.hpp"
#include "csadc/rng.hpp"

namespace csadc {

namespace {

constexpr std::array<std::string_view, 3> kModeNames{"discrete", "serial", "pscs"};

}  // namespace

std::string_view to_string(AcquireMode mode) { return kModeNames[static_cast<std::size_t>(mode)]; }

AcquireMode parse_acquire_mode(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    if (kModeNames[i] == name) return static_cast<AcquireMode>(i);
  throw ValidationError("unknown acquisition mode '" + std::string(name) + "'");
}

std::size_t AcquireConfig::measurements() const {
  switch (mode) {
    case AcquireMode::discrete:
      return l;
    case AcquireMode::serial:
      return demod.l();
    case AcquireMode::pscs:
      return plan.num_segments * bank.fingers_per_segment;
  }
  return 0;
}

void AcquireConfig::validate() const {
  if (n == 0) throw ValidationError("acquisition: n must be positive");
  if (basis.n != n) throw DimensionError("acquisition: basis dimension does not match n");
  if (!(noise_sigma >= 0.0)) throw ValidationError("acquisition: noise_sigma must be nonnegative");
  switch (mode) {
    case AcquireMode::discrete:
      if (l == 0 || l >= n) throw ValidationError("acquisition: need 1 <= l < n (L < N)");
      break;
    case AcquireMode::serial:
      if (demod.n != n) throw DimensionError("acquisition: demodulator n does not match n");
      demod.validate();
      break;
    case AcquireMode::pscs:
      plan.validate_for(n);
      bank.validate();
      if (measurements() >= n) throw ValidationError("acquisition: segments * fingers must be below n (L < N)");
      break;
  }
}

MeasurementOperator acquisition_operator(const AcquireConfig& config) {
  config.validate();
  const Basis identity = make_basis(BasisKind::identity, config.n, 0);
  switch (config.mode) {
    case AcquireMode::discrete:
      return make_measurement_matrix(config.matrix, config.l, config.n, config.matrix_seed);
    case AcquireMode::serial: {
      const MeasurementOperator v = build_v_matrix(identity, config.demod).as_operator();
      return MeasurementOperator(v.matrix(), Provenance::demodulator, config.demod.chip_seed);
    }
    case AcquireMode::pscs: {
      const MeasurementOperator p = build_pscs_matrix(identity, config.plan, config.bank);
      return MeasurementOperator(p.matrix(), Provenance::pscs, p.seed());
    }
  }
  throw ValidationError("acquisition: unknown mode");
}

Acquisition run_acquisition(const AcquireConfig& config, const SignalVector& x) {
  MeasurementOperator op = acquisition_operator(config);
  if (static_cast<std::size_t>(x.samples.size()) != config.n)
    throw DimensionError("acquisition: signal length does not match n");
  Vector y;
  switch (config.mode) {
    case AcquireMode::discrete:
      y = op.matrix() * x.samples;
      break;
    case AcquireMode::serial:
      y = acquire_serial(x, config.demod);
      break;
    case AcquireMode::pscs:
      y = acquire_pscs(x, config.plan, config.bank).y_joint;
      break;
  }
  if (config.noise_sigma > 0.0) {
    Rng rng(config.noise_seed);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += config.noise_sigma * rng.normal();
  }
  return {std::move(y), std::move(op)};
}

EnergyModel EnergyStudy::model(double current_ma) const {
  return EnergyModel{current_ma, voltage_v, bitrate_bps, bits_per_sample};
}

void EnergyStudy::validate() const {
  model(low_power_current_ma).validate();
  model(high_power_current_ma).validate();
  if (l == 0 || l >= n) throw ValidationError("energy: need 1 <= l < n");
}

EnergyStudyReport run_energy_study(const EnergyStudy& study) {
  study.validate();
  EnergyStudyReport r;
  r.low_power = rate_reduction_report(study.n, study.l, study.model(study.low_power_current_ma));
  r.high_power = rate_reduction_report(study.n, study.l, study.model(study.high_power_current_ma));
  r.energy_ratio = r.low_power.raw_energy_j / r.high_power.raw_energy_j;
  return r;
}

}  // namespace csadc
