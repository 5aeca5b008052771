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

#include "csadc/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "csadc/errors.hpp"

namespace csadc {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::omp: return "omp";
    case SolverKind::smooth_l1_gd: return "smooth_l1_gd";
    case SolverKind::pnorm_gd: return "pnorm_gd";
  }
  return "unknown";
}

std::string_view to_string(StepRule rule) {
  return rule == StepRule::fixed_lipschitz ? "fixed_lipschitz" : "backtracking";
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::zero_measurements: return "zero_measurements";
    case StopReason::residual_tol: return "residual_tol";
    case StopReason::atom_limit: return "atom_limit";
    case StopReason::degenerate: return "degenerate";
    case StopReason::gradient_tol: return "gradient_tol";
    case StopReason::stalled: return "stalled";
    case StopReason::max_iters: return "max_iters";
  }
  return "unknown";
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "omp") return SolverKind::omp;
  if (name == "smooth_l1_gd" || name == "sl1gd") return SolverKind::smooth_l1_gd;
  if (name == "pnorm_gd" || name == "pnormgd") return SolverKind::pnorm_gd;
  throw ValidationError("unknown solver '" + std::string(name) + "'");
}

StepRule parse_step_rule(std::string_view name) {
  if (name == "fixed_lipschitz") return StepRule::fixed_lipschitz;
  if (name == "backtracking") return StepRule::backtracking;
  throw ValidationError("unknown step rule '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (max_iters == 0) throw ValidationError("max_iters must be at least 1");
  if (!(residual_tol > 0.0) || !std::isfinite(residual_tol)) throw ValidationError("residual_tol must be positive");
  if (lambda && (!(*lambda > 0.0) || !std::isfinite(*lambda))) throw ValidationError("lambda must be positive");
  if (kind != SolverKind::omp && epsilon && (!(*epsilon > 0.0) || !std::isfinite(*epsilon)))
    throw ValidationError("epsilon must be positive");
  if (kind == SolverKind::pnorm_gd) {
    if (!(p > 1.0)) throw ValidationError("p must exceed 1 (the p-norm penalty is not convex below 1)");
    if (p > 1.5) throw ValidationError("p must not exceed 1.5");
    // |x|^p has unbounded curvature at 0, so no global Lipschitz step exists.
    if (step_rule == StepRule::fixed_lipschitz)
      throw ValidationError("pnorm_gd requires the backtracking step rule");
  }
}

double default_penalty_scale(const Matrix& a, const Vector& y) {
  if (y.size() == 0) return 0.0;
  return 1e-3 * (a.transpose() * y).cwiseAbs().maxCoeff();
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Matrix gram = a.rows() <= a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

namespace {

void check_system(const Matrix& a, const Vector& y) {
  if (a.rows() != y.size())
    throw DimensionError("solver: measurement length " + std::to_string(y.size()) + " does not match operator rows " +
                         std::to_string(a.rows()));
  if (a.cols() == 0) throw DimensionError("solver: operator has no columns");
}

}  // namespace

ReconstructionResult omp(const Matrix& a, const Vector& y, std::size_t k_max, double residual_tol) {
  check_system(a, y);
  if (k_max == 0 || k_max > static_cast<std::size_t>(a.rows()))
    throw ValidationError("omp: k_max must be in [1, rows]");
  if (!(residual_tol > 0.0)) throw ValidationError("omp: residual_tol must be positive");

  const Eigen::Index n = a.cols();
  ReconstructionResult out;
  out.alpha_star.values = Vector::Zero(n);
  out.stage_starts = {0};

  Vector residual = y;
  double rnorm = residual.norm();
  out.objective_trace.push_back(0.5 * rnorm * rnorm);
  out.residual_trace.push_back(rnorm);

  if (rnorm <= residual_tol) {
    out.converged = true;
    out.stop_reason = y.isZero(0.0) ? StopReason::zero_measurements : StopReason::residual_tol;
    out.residual_norm = rnorm;
    return out;
  }

  const Vector col_norms = a.colwise().norm().transpose();
  std::vector<Eigen::Index> active;
  std::vector<bool> in_active(static_cast<std::size_t>(n), false);
  Vector coeffs;
  bool done = false;

  while (!done && active.size() < k_max) {
    const Vector corr = a.transpose() * residual;
    Eigen::Index best = -1;
    double best_score = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (in_active[static_cast<std::size_t>(j)] || col_norms[j] == 0.0) continue;
      const double score = std::abs(corr[j]) / col_norms[j];
      if (score > best_score) {  // strict: ties keep the lower index
        best_score = score;
        best = j;
      }
    }
    if (best < 0) {
      out.stop_reason = StopReason::stalled;
      out.message = "residual is orthogonal to every remaining column";
      break;
    }

    active.push_back(best);
    Matrix sub(a.rows(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t s = 0; s < active.size(); ++s) sub.col(static_cast<Eigen::Index>(s)) = a.col(active[s]);
    Eigen::ColPivHouseholderQR<Matrix> qr(sub);
    qr.setThreshold(1e-12);
    if (qr.rank() < sub.cols()) {
      active.pop_back();
      out.stop_reason = StopReason::degenerate;
      out.message = "rank-deficient active set at column " + std::to_string(best);
      break;
    }
    in_active[static_cast<std::size_t>(best)] = true;
    coeffs = qr.solve(y);
    residual = y - sub * coeffs;
    rnorm = residual.norm();
    ++out.iterations;
    out.objective_trace.push_back(0.5 * rnorm * rnorm);
    out.residual_trace.push_back(rnorm);
    if (rnorm <= residual_tol) {
      out.converged = true;
      out.stop_reason = StopReason::residual_tol;
      done = true;
    }
  }
  if (!done && out.stop_reason != StopReason::degenerate && out.stop_reason != StopReason::stalled) {
    out.converged = true;
    out.stop_reason = StopReason::atom_limit;
  }

  for (std::size_t s = 0; s < active.size(); ++s) out.alpha_star.values[active[s]] = coeffs[static_cast<Eigen::Index>(s)];
  out.residual_norm = (a * out.alpha_star.values - y).norm();
  return out;
}

double smooth_l1(const Vector& x, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("smooth_l1: epsilon must be positive");
  double acc = 0.0;
  // sqrt(x^2 + e^2) - e rewritten as x^2 / (sqrt(x^2 + e^2) + e): no cancellation for |x| << e.
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    acc += xi * xi / (std::sqrt(xi * xi + epsilon * epsilon) + epsilon);
  }
  return acc;
}

Vector smooth_l1_grad(const Vector& x, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("smooth_l1_grad: epsilon must be positive");
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = x[i] / std::sqrt(x[i] * x[i] + epsilon * epsilon);
  return g;
}

double pnorm_penalty(const Vector& x, double p) {
  if (!(p > 0.0)) throw ValidationError("pnorm_penalty: p must be positive");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]), p);
  return acc;
}

Vector pnorm_penalty_grad(const Vector& x, double p) {
  if (!(p > 1.0)) throw ValidationError("pnorm_penalty_grad: p must exceed 1");
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double ax = std::abs(x[i]);
    g[i] = ax == 0.0 ? 0.0 : std::copysign(p * std::pow(ax, p - 1.0), x[i]);
  }
  return g;
}

double smoothed_pnorm_penalty(const Vector& x, double p, double width) {
  if (width == 0.0) return pnorm_penalty(x, p);
  const double floor = std::pow(width, p);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(x[i] * x[i] + width * width, 0.5 * p) - floor;
  return acc;
}

Vector smoothed_pnorm_penalty_grad(const Vector& x, double p, double width) {
  if (width == 0.0) return pnorm_penalty_grad(x, p);
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = p * x[i] * std::pow(x[i] * x[i] + width * width, 0.5 * p - 1.0);
  return g;
}

namespace {

struct Penalty {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;
};

struct DescentSettings {
  double lambda = 0.0;
  StepRule step_rule = StepRule::backtracking;
  double fixed_step = 0.0;    // used with fixed_lipschitz
  double initial_step = 0.0;  // first backtracking trial
  std::size_t max_iters = 0;
  double grad_tol = 0.0;
};

constexpr double kArmijo = 1e-4;
constexpr double kShrink = 0.5;
constexpr int kMaxHalvings = 80;
constexpr std::size_t kResync = 64;

// One gradient-descent stage. Appends to out's traces and leaves the final
// iterate in alpha.
void descend(const Matrix& a, const Vector& y, const Penalty& penalty, const DescentSettings& s, Vector& alpha,
             ReconstructionResult& out) {
  out.stage_starts.push_back(out.objective_trace.size());
  Vector r = a * alpha - y;
  double f = 0.5 * r.squaredNorm() + s.lambda * penalty.value(alpha);
  out.objective_trace.push_back(f);
  out.residual_trace.push_back(r.norm());

  double step = s.step_rule == StepRule::fixed_lipschitz ? s.fixed_step : s.initial_step;
  Vector prev_alpha;
  Vector prev_grad;
  for (std::size_t it = 0; it < s.max_iters; ++it) {
    Vector grad = a.transpose() * r + s.lambda * penalty.grad(alpha);
    const double gnorm2 = grad.squaredNorm();
    if (std::sqrt(gnorm2) <= s.grad_tol) {
      out.converged = true;
      out.stop_reason = StopReason::gradient_tol;
      return;
    }
    const Vector ag = a * grad;

    Vector trial;
    Vector trial_r;
    double trial_f = 0.0;
    if (s.step_rule == StepRule::fixed_lipschitz) {
      trial = alpha - step * grad;
      trial_r = r - step * ag;
      trial_f = 0.5 * trial_r.squaredNorm() + s.lambda * penalty.value(trial);
    } else {
      // First trial step: Barzilai-Borwein estimate of the inverse local
      // curvature when available, otherwise twice the last accepted step.
      double bb = 0.0;
      if (prev_grad.size() == grad.size()) {
        const Vector ds = alpha - prev_alpha;
        const Vector dg = grad - prev_grad;
        const double curv = ds.dot(dg);
        if (curv > 0.0) bb = ds.squaredNorm() / curv;
      }
      step = bb > 0.0 && std::isfinite(bb) ? bb : 2.0 * step;
      bool accepted = false;
      for (int h = 0; h < kMaxHalvings; ++h) {
        trial = alpha - step * grad;
        trial_r = r - step * ag;
        trial_f = 0.5 * trial_r.squaredNorm() + s.lambda * penalty.value(trial);
        if (trial_f <= f - kArmijo * step * gnorm2) {
          accepted = true;
          break;
        }
        step *= kShrink;
      }
      if (!accepted) {
        out.stop_reason = StopReason::stalled;
        out.message = "line search found no sufficient decrease";
        return;
      }
    }
    prev_alpha = std::move(alpha);
    prev_grad = std::move(grad);
    alpha = std::move(trial);
    ++out.iterations;
    if (out.iterations % kResync == 0) {
      r = a * alpha - y;
      f = 0.5 * r.squaredNorm() + s.lambda * penalty.value(alpha);
    } else {
      r = std::move(trial_r);
      f = trial_f;
    }
    out.objective_trace.push_back(f);
    out.residual_trace.push_back(r.norm());
  }
  out.stop_reason = StopReason::max_iters;
}

ReconstructionResult zero_solution(const Matrix& a, const Vector& y) {
  ReconstructionResult out;
  out.alpha_star.values = Vector::Zero(a.cols());
  out.converged = true;
  out.stop_reason = StopReason::zero_measurements;
  out.objective_trace = {0.5 * y.squaredNorm()};
  out.residual_trace = {y.norm()};
  out.stage_starts = {0};
  out.residual_norm = y.norm();
  return out;
}

Vector start_point(const Matrix& a, const Vector* warm_start) {
  if (warm_start == nullptr) return Vector::Zero(a.cols());
  if (warm_start->size() != a.cols()) throw DimensionError("warm start length does not match operator width");
  return *warm_start;
}

}  // namespace

ReconstructionResult smooth_l1_gd(const Matrix& a, const Vector& y, const SolverConfig& config,
                                  const Vector* warm_start) {
  check_system(a, y);
  config.validate();
  const double scale = default_penalty_scale(a, y);
  if (scale == 0.0 && (warm_start == nullptr || warm_start->isZero(0.0))) return zero_solution(a, y);

  const double lambda = config.lambda.value_or(scale);
  const double eps0 = config.epsilon.value_or(scale);
  if (!(lambda > 0.0) || !(eps0 > 0.0)) return zero_solution(a, y);

  const double sigma = spectral_norm(a);
  const double data_lipschitz = std::max(sigma * sigma, std::numeric_limits<double>::min());

  ReconstructionResult out;
  out.lambda = lambda;
  Vector alpha = start_point(a, warm_start);
  const int stages = config.continuation ? 3 : 1;
  double eps = eps0;
  for (int stage = 0; stage < stages; ++stage, eps /= 10.0) {
    Penalty penalty{[eps](const Vector& x) { return smooth_l1(x, eps); },
                    [eps](const Vector& x) { return smooth_l1_grad(x, eps); }};
    DescentSettings s;
    s.lambda = lambda;
    s.step_rule = config.step_rule;
    s.fixed_step = 1.0 / (data_lipschitz + lambda / eps);
    s.initial_step = 0.5 / data_lipschitz;
    s.max_iters = config.max_iters;
    s.grad_tol = config.residual_tol * (1.0 + y.norm());
    out.converged = false;
    descend(a, y, penalty, s, alpha, out);
    out.epsilon = eps;
  }
  out.alpha_star.values = std::move(alpha);
  out.residual_norm = (a * out.alpha_star.values - y).norm();
  return out;
}

ReconstructionResult pnorm_gd(const Matrix& a, const Vector& y, const SolverConfig& config, const Vector* warm_start) {
  check_system(a, y);
  config.validate();
  const double scale = default_penalty_scale(a, y);
  if (scale == 0.0 && (warm_start == nullptr || warm_start->isZero(0.0))) return zero_solution(a, y);
  const double lambda = config.lambda.value_or(scale);
  if (!(lambda > 0.0)) return zero_solution(a, y);

  const double sigma = spectral_norm(a);
  const double p = config.p;
  DescentSettings s;
  s.lambda = lambda;
  s.step_rule = StepRule::backtracking;
  s.initial_step = 0.5 / std::max(sigma * sigma, std::numeric_limits<double>::min());
  s.max_iters = config.max_iters;
  s.grad_tol = config.residual_tol * (1.0 + y.norm());

  ReconstructionResult out;
  out.lambda = lambda;
  Vector alpha = start_point(a, warm_start);

  // |x|^p has a near-kink at 0 for p close to 1 that stalls plain descent.
  // With continuation, warm up on sum (x^2 + d^2)^(p/2) - d^p for
  // d = eps, eps/10, eps/100 before the final stage on the exact penalty.
  if (config.continuation) {
    double width = config.epsilon.value_or(scale);
    for (int stage = 0; stage < 3 && width > 0.0; ++stage, width /= 10.0) {
      Penalty smoothed{[p, width](const Vector& x) { return smoothed_pnorm_penalty(x, p, width); },
                       [p, width](const Vector& x) { return smoothed_pnorm_penalty_grad(x, p, width); }};
      out.converged = false;
      descend(a, y, smoothed, s, alpha, out);
      out.epsilon = width;
    }
  }
  Penalty exact{[p](const Vector& x) { return pnorm_penalty(x, p); },
                [p](const Vector& x) { return pnorm_penalty_grad(x, p); }};
  out.converged = false;
  descend(a, y, exact, s, alpha, out);
  out.epsilon = 0.0;
  out.alpha_star.values = std::move(alpha);
  out.residual_norm = (a * out.alpha_star.values - y).norm();
  return out;
}

ReconstructionResult solve(const Matrix& a, const Vector& y, const SolverConfig& config) {
  config.validate();
  switch (config.kind) {
    case SolverKind::omp: {
      const std::size_t k = config.k_max == 0 ? static_cast<std::size_t>(a.rows()) : config.k_max;
      return omp(a, y, k, config.residual_tol);
    }
    case SolverKind::smooth_l1_gd: return smooth_l1_gd(a, y, config);
    case SolverKind::pnorm_gd: return pnorm_gd(a, y, config);
  }
  throw ValidationError("unknown solver kind");
}

std::vector<ReconstructionResult> solve_lambda_path(const Matrix& a, const Vector& y, const SolverConfig& config,
                                                    std::span<const double> lambdas) {
  if (config.kind == SolverKind::omp) throw ValidationError("lambda path applies to the gradient solvers only");
  std::vector<ReconstructionResult> path;
  path.reserve(lambdas.size());
  Vector warm = Vector::Zero(a.cols());
  for (const double lambda : lambdas) {
    SolverConfig stage = config;
    stage.lambda = lambda;
    ReconstructionResult r = config.kind == SolverKind::smooth_l1_gd ? smooth_l1_gd(a, y, stage, &warm)
                                                                     : pnorm_gd(a, y, stage, &warm);
    warm = r.alpha_star.values;
    path.push_back(std::move(r));
  }
  return path;
}

}  // namespace csadc
