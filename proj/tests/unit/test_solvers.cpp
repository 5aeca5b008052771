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

#include "doctest.h"

#include <array>
#include <cmath>

#include "csadc/errors.hpp"
#include "csadc/rng.hpp"
#include "csadc/sensing.hpp"
#include "csadc/solvers.hpp"
#include "oracles.hpp"

using namespace csadc;
namespace oracle = csadc::testing;

namespace {

Vector random_vector(std::size_t n, Seed seed, double scale = 1.0) {
  Rng rng(seed);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

struct Planted {
  Matrix a;
  Vector y;
  CoefficientVector truth;
};

Planted planted(std::size_t n, std::size_t l, std::size_t k, Seed op_seed, Seed coeff_seed, double low = 1.0,
                double high = 1.0) {
  const auto op = make_measurement_matrix(MatrixKind::gaussian, l, n, op_seed);
  CoefficientVector truth = sample_sparse_coefficients({k, low, high, true}, n, coeff_seed);
  Vector y = op.matrix() * truth.values;
  return {op.matrix(), y, truth};
}

std::vector<std::size_t> thresholded(const Vector& v, double rel) {
  const double cut = rel * v.cwiseAbs().maxCoeff();
  std::vector<std::size_t> s;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > cut) s.push_back(static_cast<std::size_t>(i));
  return s;
}

SolverConfig gd_config(SolverKind kind, double lambda, double eps) {
  SolverConfig c;
  c.kind = kind;
  c.lambda = lambda;
  c.epsilon = eps;
  c.residual_tol = 1e-9;
  return c;
}

}  // namespace

TEST_CASE("SolverConfig validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.kind = SolverKind::pnorm_gd;
  c.p = 0.9;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("p must exceed 1"), ValidationError);
  c.p = 1.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.p = 1.6;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.p = 1.5;
  CHECK_NOTHROW(c.validate());
  c.step_rule = StepRule::fixed_lipschitz;
  CHECK_THROWS_AS(c.validate(), ValidationError);

  SolverConfig s;
  s.kind = SolverKind::smooth_l1_gd;
  s.epsilon = 0.0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.epsilon = 1e-3;
  s.lambda = -1.0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.lambda = 1e-3;
  s.max_iters = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.max_iters = 10;
  s.residual_tol = 0.0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("omp: identity operator") {
  // A square operator is accepted here; omp does not require compression.
  Vector y = Vector::Zero(4);
  y[1] = 3.0;
  const ReconstructionResult r = omp(Matrix::Identity(4, 4), y, 4, 1e-12);
  CHECK(r.alpha_star.values == y);
  CHECK(r.iterations == 1);
  CHECK(r.converged);
  CHECK(r.stop_reason == StopReason::residual_tol);
}

TEST_CASE("omp: zero measurements") {
  const ReconstructionResult r = omp(random_vector(12, 1).reshaped(3, 4), Vector::Zero(3), 3, 1e-9);
  CHECK(r.alpha_star.values.isZero(0.0));
  CHECK(r.iterations == 0);
  CHECK(r.converged);
  CHECK(r.stop_reason == StopReason::zero_measurements);
}

TEST_CASE("omp: ties break toward the lowest index") {
  Matrix a(2, 3);
  a << 1, 0, 1, 0, 1, 0;
  Vector y(2);
  y << 1, 1;
  const ReconstructionResult r = omp(a, y, 1, 1e-12);
  CHECK(r.alpha_star.support(0.0) == std::vector<std::size_t>{0});
  CHECK(r.stop_reason == StopReason::atom_limit);
}

TEST_CASE("omp: preconditions") {
  const Matrix a = random_vector(24, 2).reshaped(4, 6);
  CHECK_THROWS_AS(omp(a, Vector::Zero(3), 2, 1e-9), DimensionError);
  CHECK_THROWS_AS(omp(a, Vector::Ones(4), 5, 1e-9), ValidationError);
  CHECK_THROWS_AS(omp(a, Vector::Ones(4), 0, 1e-9), ValidationError);
  CHECK_THROWS_AS(omp(a, Vector::Ones(4), 2, 0.0), ValidationError);
}

TEST_CASE("omp: degenerate active set is reported") {
  Matrix a(2, 3);
  a << 1, 2, 0, 0, 0, 0;  // columns 0 and 1 are parallel
  Vector y(2);
  y << 1, 0;
  Matrix b = a;
  b(1, 2) = 1.0;
  Vector z(2);
  z << 1, 1;
  // After picking column 2 and column 0, the residual is zero; no degeneracy.
  CHECK(omp(b, z, 2, 1e-12).converged);
  // Zero column plus duplicate directions: once the residual lives outside
  // the column span the refit cannot make progress.
  Matrix c = Matrix::Zero(2, 3);
  c(0, 0) = 1.0;
  c(0, 1) = 1.0;
  Vector w(2);
  w << 1, 1;
  const ReconstructionResult r = omp(c, w, 2, 1e-12);
  CHECK_FALSE(r.converged);
  CHECK((r.stop_reason == StopReason::degenerate || r.stop_reason == StopReason::stalled));
  CHECK(r.residual_norm == doctest::Approx(1.0));
}

TEST_CASE("omp: matches the exhaustive oracle on the reference instance") {
  const Planted p = planted(16, 8, 2, 5, 7);
  const ReconstructionResult r = omp(p.a, p.y, 8, 1e-9);
  CHECK(r.alpha_star.support(1e-9) == oracle::best_support_exhaustive(p.a, p.y, 2));
  CHECK(r.alpha_star.support(1e-9) == p.truth.support());
}

TEST_CASE("property: omp agrees with the exhaustive oracle when it fits the data") {
  // With l >= 2k a k-sparse exact fit is unique, so any zero-residual omp
  // answer must be the oracle's support. Greedy misses (nonzero residual
  // after k atoms) are possible and are tallied by the acceptance suite.
  int fitted = 0;
  for (Seed t = 0; t < 100; ++t) {
    const std::size_t k = 1 + t % 2;
    const Planted p = planted(16, 8, k, derive_seed(t, 2), derive_seed(t, 1), 1.0, 2.0);
    const ReconstructionResult r = omp(p.a, p.y, k, 1e-9);
    if (k == 1) REQUIRE(r.stop_reason == StopReason::residual_tol);
    if (r.stop_reason != StopReason::residual_tol) continue;
    ++fitted;
    REQUIRE(r.alpha_star.support(1e-9) == oracle::best_support_exhaustive(p.a, p.y, k));
  }
  CHECK(fitted >= 50);
}

TEST_CASE("property: omp recovers easy instances") {
  int ok = 0;
  for (Seed t = 0; t < 100; ++t) {
    const Planted p = planted(256, 64, 5, derive_seed(t, 2), derive_seed(t, 1), 1.0, 2.0);
    const ReconstructionResult r = omp(p.a, p.y, 64, 1e-9);
    ok += r.alpha_star.support(1e-6) == p.truth.support() &&
          (r.alpha_star.values - p.truth.values).cwiseAbs().maxCoeff() < 1e-6;
  }
  CHECK(ok >= 95);
}

TEST_CASE("property: reported residual matches recomputation") {
  for (Seed t = 0; t < 30; ++t) {
    const Planted p = planted(32, 12, 3, t, t + 100, 0.5, 2.0);
    const Vector y = p.y + random_vector(12, t, 0.01);
    for (SolverKind kind : {SolverKind::omp, SolverKind::smooth_l1_gd, SolverKind::pnorm_gd}) {
      SolverConfig c = gd_config(kind, 1e-2, 1e-2);
      c.kind = kind;
      c.max_iters = 300;
      if (kind == SolverKind::omp) c = SolverConfig{};
      const ReconstructionResult r = solve(p.a, y, c);
      REQUIRE(std::abs(r.residual_norm - (p.a * r.alpha_star.values - y).norm()) < 1e-10);
    }
  }
}

TEST_CASE("smooth_l1: values") {
  CHECK(smooth_l1(Vector::Zero(5), 0.3) == 0.0);
  Vector x(2);
  x << 1, 0;
  CHECK(smooth_l1(x, 0.1) == doctest::Approx(0.9049875621).epsilon(1e-10));
  CHECK(smooth_l1(x, 0.1) == doctest::Approx(oracle::smooth_l1_direct(x, 0.1)).epsilon(1e-14));
  for (Seed s = 0; s < 50; ++s) {
    const Vector v = random_vector(6, s);
    CHECK(smooth_l1(v, 0.01) >= smooth_l1(v, 0.1));
  }
  // Tiny entries must not lose all precision to cancellation.
  Vector tiny = Vector::Constant(1, 1e-9);
  CHECK(smooth_l1(tiny, 1.0) == doctest::Approx(5e-19).epsilon(1e-6));
}

TEST_CASE("smooth_l1_grad: values and range") {
  CHECK(smooth_l1_grad(Vector::Zero(3), 0.2).isZero(0.0));
  for (double t : {1.0, -3.0, 25.0}) {
    Vector x = Vector::Zero(2);
    x[0] = t;
    const double eps = 1e-2;
    const double g = smooth_l1_grad(x, eps)[0];
    CHECK(std::abs(g - (t > 0 ? 1.0 : -1.0)) <= eps * eps / (2 * t * t) + 1e-15);
  }
  for (Seed s = 0; s < 100; ++s) {
    const Vector g = smooth_l1_grad(random_vector(8, s, 10.0), 0.05);
    REQUIRE(g.cwiseAbs().maxCoeff() < 1.0);
  }
}

TEST_CASE("smooth_l1_grad matches central differences") {
  for (Seed s = 0; s < 100; ++s) {
    const Vector x = random_vector(7, s);
    const Vector fd = oracle::central_difference([](const Vector& v) { return smooth_l1(v, 0.05); }, x, 1e-6);
    REQUIRE(oracle::relative_error(smooth_l1_grad(x, 0.05), fd) < 1e-6);
  }
}

TEST_CASE("pnorm penalty: values and gradient") {
  Vector x(2);
  x << 2, 0;
  CHECK(pnorm_penalty(x, 1.5) == doctest::Approx(2.8284271247).epsilon(1e-10));
  CHECK(pnorm_penalty(x, 1.5) == doctest::Approx(oracle::pnorm_direct(x, 1.5)).epsilon(1e-14));
  CHECK(pnorm_penalty_grad(Vector::Zero(3), 1.05).isZero(0.0));
  for (Seed s = 0; s < 100; ++s) {
    const double p = 1.01 + 0.49 * static_cast<double>(s) / 99.0;
    const Vector v = random_vector(6, s + 7);
    const Vector fd = oracle::central_difference([p](const Vector& z) { return pnorm_penalty(z, p); }, v, 1e-6);
    REQUIRE(oracle::relative_error(pnorm_penalty_grad(v, p), fd) < 1e-6);
  }
}

TEST_CASE("smoothed pnorm penalty: gradient and limits") {
  for (Seed s = 0; s < 50; ++s) {
    const Vector v = random_vector(5, s);
    const Vector fd =
        oracle::central_difference([](const Vector& z) { return smoothed_pnorm_penalty(z, 1.05, 0.1); }, v, 1e-6);
    REQUIRE(oracle::relative_error(smoothed_pnorm_penalty_grad(v, 1.05, 0.1), fd) < 1e-6);
  }
  CHECK(smoothed_pnorm_penalty(Vector::Zero(4), 1.2, 0.5) == 0.0);
  const Vector v = random_vector(5, 3);
  CHECK(smoothed_pnorm_penalty(v, 1.2, 1e-9) == doctest::Approx(pnorm_penalty(v, 1.2)).epsilon(1e-6));
}

TEST_CASE("property: smoothing bound") {
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    for (Seed s = 0; s < 1000; ++s) {
      const Vector x = random_vector(1 + s % 20, s, s % 3 == 0 ? 1e-3 : 1.0);
      const double gap = x.lpNorm<1>() - smooth_l1(x, eps);
      REQUIRE(gap >= 0.0);
      REQUIRE(gap <= static_cast<double>(x.size()) * eps);
    }
  }
}

TEST_CASE("property: convexity witness") {
  for (Seed s = 0; s < 200; ++s) {
    const Vector x = random_vector(6, 2 * s), z = random_vector(6, 2 * s + 1);
    for (double th : {0.25, 0.5, 0.75}) {
      const Vector mid = th * x + (1 - th) * z;
      REQUIRE(smooth_l1(mid, 0.05) <= th * smooth_l1(x, 0.05) + (1 - th) * smooth_l1(z, 0.05) + 1e-12);
      REQUIRE(pnorm_penalty(mid, 1.05) <= th * pnorm_penalty(x, 1.05) + (1 - th) * pnorm_penalty(z, 1.05) + 1e-12);
    }
  }
}

TEST_CASE("smooth_l1_gd: zero measurements give zero") {
  const Matrix a = random_vector(20, 1).reshaped(4, 5);
  const ReconstructionResult r = smooth_l1_gd(a, Vector::Zero(4), gd_config(SolverKind::smooth_l1_gd, 1e-3, 1e-3));
  CHECK(r.alpha_star.values.isZero(0.0));
  CHECK(r.converged);
}

TEST_CASE("smooth_l1_gd: planted instance") {
  const Planted p = planted(16, 8, 2, 5, 7);
  const ReconstructionResult r = smooth_l1_gd(p.a, p.y, gd_config(SolverKind::smooth_l1_gd, 1e-3, 1e-3));
  CHECK(thresholded(r.alpha_star.values, 1e-2) == p.truth.support());
  CHECK(r.objective_trace.back() < r.objective_trace.front());
  CHECK(r.lambda == 1e-3);
  CHECK(r.epsilon == 1e-3);
}

TEST_CASE("smooth_l1_gd: fixed Lipschitz step also descends") {
  const Planted p = planted(16, 8, 2, 5, 7);
  SolverConfig c = gd_config(SolverKind::smooth_l1_gd, 1e-2, 1e-1);
  c.step_rule = StepRule::fixed_lipschitz;
  c.max_iters = 2000;
  const ReconstructionResult r = smooth_l1_gd(p.a, p.y, c);
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
    REQUIRE(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-12);
}

TEST_CASE("smooth_l1_gd: non-convergence is reported") {
  const Planted p = planted(64, 20, 4, 3, 4);
  SolverConfig c = gd_config(SolverKind::smooth_l1_gd, 1e-4, 1e-4);
  c.max_iters = 3;
  c.residual_tol = 1e-14;
  const ReconstructionResult r = smooth_l1_gd(p.a, p.y, c);
  CHECK_FALSE(r.converged);
  CHECK(r.stop_reason == StopReason::max_iters);
  CHECK(r.iterations == 3);
  CHECK(r.objective_trace.size() == 4);
}

TEST_CASE("smooth_l1_gd: default lambda and epsilon scale with the data") {
  const Planted p = planted(16, 8, 2, 5, 7);
  SolverConfig c;
  c.kind = SolverKind::smooth_l1_gd;
  const ReconstructionResult r = smooth_l1_gd(p.a, p.y, c);
  const double s = default_penalty_scale(p.a, p.y);
  CHECK(s == doctest::Approx((p.a.transpose() * p.y).cwiseAbs().maxCoeff() * 1e-3));
  CHECK(r.lambda == s);
  CHECK(r.epsilon == s);
}

TEST_CASE("smooth_l1_gd: continuation runs three stages") {
  const Planted p = planted(16, 8, 2, 5, 7);
  SolverConfig c = gd_config(SolverKind::smooth_l1_gd, 1e-3, 1e-2);
  c.continuation = true;
  const ReconstructionResult r = smooth_l1_gd(p.a, p.y, c);
  CHECK(r.stage_starts.size() == 3);
  CHECK(r.epsilon == doctest::Approx(1e-4));
  CHECK(thresholded(r.alpha_star.values, 1e-2) == p.truth.support());
}

TEST_CASE("pnorm_gd: zero measurements and planted instance") {
  const Matrix a = random_vector(20, 1).reshaped(4, 5);
  SolverConfig z = gd_config(SolverKind::pnorm_gd, 1e-3, 1e-3);
  z.p = 1.01;
  CHECK(pnorm_gd(a, Vector::Zero(4), z).alpha_star.values.isZero(0.0));

  const Planted p = planted(16, 8, 2, 5, 7);
  SolverConfig c = gd_config(SolverKind::pnorm_gd, 1e-3, 1e-3);
  c.p = 1.05;
  c.continuation = true;
  const ReconstructionResult r = pnorm_gd(p.a, p.y, c);
  CHECK(thresholded(r.alpha_star.values, 1e-2) == p.truth.support());
}

TEST_CASE("property: backtracking traces never increase") {
  for (Seed t = 0; t < 20; ++t) {
    const Planted p = planted(48, 16, 3, t + 10, t + 20, 1.0, 2.0);
    for (SolverKind kind : {SolverKind::smooth_l1_gd, SolverKind::pnorm_gd}) {
      SolverConfig c = gd_config(kind, 1e-3, 1e-3);
      c.max_iters = 2000;
      const ReconstructionResult r = solve(p.a, p.y, c);
      for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        REQUIRE(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("solve_lambda_path: residual shrinks with lambda") {
  const Planted p = planted(32, 16, 3, 2, 9, 1.0, 2.0);
  SolverConfig c = gd_config(SolverKind::smooth_l1_gd, 1.0, 1e-3);
  c.continuation = true;
  c.residual_tol = 1e-7;
  const double s = (p.a.transpose() * p.y).cwiseAbs().maxCoeff();
  const std::array<double, 4> grid{s * 1e-1, s * 1e-2, s * 1e-3, s * 1e-4};
  const auto path = solve_lambda_path(p.a, p.y, c, grid);
  REQUIRE(path.size() == 4);
  for (std::size_t i = 0; i < path.size(); ++i) CHECK(path[i].lambda == grid[i]);
  CHECK(path.back().residual_norm < path.front().residual_norm);
  CHECK(thresholded(path.back().alpha_star.values, 1e-2) == p.truth.support());
}

TEST_CASE("spectral_norm agrees with the singular values") {
  const Matrix a = random_vector(30, 4).reshaped(5, 6);
  const Eigen::JacobiSVD<Matrix> svd(a);
  CHECK(spectral_norm(a) == doctest::Approx(svd.singularValues()[0]).epsilon(1e-10));
}

TEST_CASE("solver names parse with aliases") {
  CHECK(parse_solver_kind("omp") == SolverKind::omp);
  CHECK(parse_solver_kind("sl1gd") == SolverKind::smooth_l1_gd);
  CHECK(parse_solver_kind("pnormgd") == SolverKind::pnorm_gd);
  CHECK(parse_solver_kind(to_string(SolverKind::pnorm_gd)) == SolverKind::pnorm_gd);
  CHECK(parse_step_rule(to_string(StepRule::fixed_lipschitz)) == StepRule::fixed_lipschitz);
  CHECK_THROWS_AS(parse_solver_kind("lasso"), ValidationError);
}
