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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csadc/model.hpp"

namespace csadc {

enum class SolverKind { omp, smooth_l1_gd, pnorm_gd };
enum class StepRule { fixed_lipschitz, backtracking };
enum class StopReason { zero_measurements, residual_tol, atom_limit, degenerate, gradient_tol, stalled, max_iters };

std::string_view to_string(SolverKind kind);
std::string_view to_string(StepRule rule);
std::string_view to_string(StopReason reason);
SolverKind parse_solver_kind(std::string_view name);
StepRule parse_step_rule(std::string_view name);

struct SolverConfig {
  SolverKind kind = SolverKind::omp;
  std::size_t max_iters = 20000;
  /// omp: absolute bound on |A alpha - y|. gd: stop once |grad F| <= residual_tol * (1 + |y|).
  double residual_tol = 1e-9;
  /// Smoothing width (smooth_l1_gd, and pnorm_gd warm-up); unset means 1e-3 * |A^T y|_inf.
  std::optional<double> epsilon;
  /// Penalty order for pnorm_gd, 1 < p <= 1.5.
  double p = 1.05;
  /// Penalty weight; unset means 1e-3 * |A^T y|_inf.
  std::optional<double> lambda;
  StepRule step_rule = StepRule::backtracking;
  /// Re-solve with epsilon/10 and epsilon/100, warm-started. For pnorm_gd
  /// these are smoothing warm-up stages ahead of the exact penalty.
  bool continuation = false;
  /// omp atom budget; 0 means rows(A).
  std::size_t k_max = 0;

  void validate() const;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct ReconstructionResult {
  CoefficientVector alpha_star;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::max_iters;
  /// Objective after each iteration; entry 0 is the starting point.
  /// omp records 0.5 |r|^2, the gd solvers 0.5 |r|^2 + lambda * penalty.
  std::vector<double> objective_trace;
  /// |A alpha - y| alongside objective_trace.
  std::vector<double> residual_trace;
  /// Trace offsets where each continuation stage begins.
  std::vector<std::size_t> stage_starts;
  double lambda = 0.0;
  double epsilon = 0.0;
  std::string message;
};

/// Orthogonal matching pursuit. Each step adds the column with the largest
/// |<a_j, r>| / |a_j| (ties to the lowest index), refits least squares on
/// the active set by column-pivoted QR (pivot tolerance 1e-12), and stops at
/// |r| <= residual_tol or after k_max atoms.
ReconstructionResult omp(const Matrix& a, const Vector& y, std::size_t k_max, double residual_tol);

/// rho_eps(x) = sum_i sqrt(x_i^2 + eps^2) - eps
double smooth_l1(const Vector& x, double epsilon);
Vector smooth_l1_grad(const Vector& x, double epsilon);

/// g(x) = sum_i |x_i|^p
double pnorm_penalty(const Vector& x, double p);
Vector pnorm_penalty_grad(const Vector& x, double p);

/// sum_i (x_i^2 + width^2)^(p/2) - width^p; equals pnorm_penalty at width 0.
double smoothed_pnorm_penalty(const Vector& x, double p, double width);
Vector smoothed_pnorm_penalty_grad(const Vector& x, double p, double width);

/// Gradient descent on 0.5 |A alpha - y|^2 + lambda * rho_eps(alpha) from
/// alpha = 0 (or `warm_start`).
ReconstructionResult smooth_l1_gd(const Matrix& a, const Vector& y, const SolverConfig& config,
                                  const Vector* warm_start = nullptr);
/// Gradient descent on 0.5 |A alpha - y|^2 + lambda * sum |alpha_i|^p.
/// With config.continuation the exact stage is preceded by three stages on
/// smoothed_pnorm_penalty with width epsilon, epsilon/10, epsilon/100.
ReconstructionResult pnorm_gd(const Matrix& a, const Vector& y, const SolverConfig& config,
                              const Vector* warm_start = nullptr);

/// Dispatches on config.kind.
ReconstructionResult solve(const Matrix& a, const Vector& y, const SolverConfig& config);

/// Runs a gd solver once per lambda, in the given order, each solve
/// warm-started from the previous solution. Returns one result per lambda.
std::vector<ReconstructionResult> solve_lambda_path(const Matrix& a, const Vector& y, const SolverConfig& config,
                                                    std::span<const double> lambdas);

/// 1e-3 * |A^T y|_inf, the default lambda and epsilon scale.
double default_penalty_scale(const Matrix& a, const Vector& y);

/// Largest singular value of a.
double spectral_norm(const Matrix& a);

}  // namespace csadc
