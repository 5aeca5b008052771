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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "csadc/demodulator.hpp"
#include "csadc/evaluation.hpp"
#include "csadc/experiment.hpp"
#include "csadc/model.hpp"
#include "csadc/pscs.hpp"
#include "csadc/sensing.hpp"
#include "csadc/solvers.hpp"

// Text formats. CSV files are comma separated with a header row, one record
// per line, newline terminated, and reals printed with 17 significant
// digits so every double round-trips exactly. JSON parsers are strict:
// unknown keys and wrongly typed values raise ValidationError. A top-level
// "mode" key is accepted when it carries the document's expected tag.
namespace csadc {

std::string format_double(double v);
double parse_double(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// header "index,value"
std::string vector_csv(const Vector& v);
Vector parse_vector_csv(std::string_view text);

/// header "c0,c1,...", one line per matrix row
std::string matrix_csv(const Matrix& m);
Matrix parse_matrix_csv(std::string_view text);

/// header "segment,finger,value", segment-major
std::string pscs_csv(const PscsMeasurement& m);
Vector parse_pscs_csv(std::string_view text, std::size_t* segments = nullptr, std::size_t* fingers = nullptr);

/// header "iteration,objective,residual"
std::string trace_csv(const ReconstructionResult& r);

std::string basis_meta_json(const BasisMeta& meta);
BasisMeta parse_basis_meta(std::string_view json);

/// {kind, l, n, seed, effective_seed, noise_sigma, composed_with?}
std::string operator_meta_json(const MeasurementOperator& op, double noise_sigma);

/// {n, m, filter_kind, taps?, chip_seed}
std::string demod_config_json(const DemodConfig& c);
DemodConfig parse_demod_config(std::string_view json);

std::string window_plan_json(const WindowPlan& plan);
WindowPlan parse_window_plan(std::string_view json);

std::string finger_bank_json(const FingerBank& bank);
FingerBank parse_finger_bank(std::string_view json);

/// Tagged with "mode": "solver". Unset lambda / epsilon are written as null.
std::string solver_config_json(const SolverConfig& c);
SolverConfig parse_solver_config(std::string_view json);

/// Tagged with "mode": "sweep".
std::string sweep_spec_json(const SweepSpec& s);
SweepSpec parse_sweep_spec(std::string_view json);

std::string energy_model_json(const EnergyModel& m);
EnergyModel parse_energy_model(std::string_view json);

std::string rate_report_json(const RateReductionReport& r);

/// support_exact, coeff_err_inf, reconstruction_snr_db ("+inf" when exact), iterations
std::string recovery_metrics_json(const RecoveryMetrics& m);

/// Solver diagnostics, plus truth-based metrics when they are available.
std::string reconstruction_report_json(const ReconstructionResult& r, const SolverConfig& solver,
                                       const std::optional<RecoveryMetrics>& metrics);

std::string acquire_config_json(const AcquireConfig& c);
AcquireConfig parse_acquire_config(std::string_view json);

std::string truth_json(const TruthRecord& t);
TruthRecord parse_truth(std::string_view json);

std::string energy_study_json(const EnergyStudy& s);
EnergyStudy parse_energy_study(std::string_view json);
std::string energy_study_report_json(const EnergyStudy& s, const EnergyStudyReport& r);

/// Value of the top-level "mode" field, or an empty string when absent.
std::string config_mode(std::string_view json);

}  // namespace csadc
