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

#include "csadc/sensing.hpp"

#include <cmath>
#include <string>

#include "csadc/errors.hpp"

namespace csadc {

std::string_view to_string(MatrixKind kind) {
  return kind == MatrixKind::gaussian ? "gaussian" : "bernoulli";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::gaussian: return "gaussian";
    case Provenance::bernoulli: return "bernoulli";
    case Provenance::demodulator: return "demodulator";
    case Provenance::pscs: return "pscs";
  }
  return "unknown";
}

MatrixKind parse_matrix_kind(std::string_view name) {
  if (name == "gaussian") return MatrixKind::gaussian;
  if (name == "bernoulli") return MatrixKind::bernoulli;
  throw ValidationError("unknown measurement matrix kind '" + std::string(name) + "'");
}

Provenance parse_provenance(std::string_view name) {
  if (name == "gaussian") return Provenance::gaussian;
  if (name == "bernoulli") return Provenance::bernoulli;
  if (name == "demodulator") return Provenance::demodulator;
  if (name == "pscs") return Provenance::pscs;
  throw ValidationError("unknown operator provenance '" + std::string(name) + "'");
}

MeasurementOperator::MeasurementOperator(Matrix matrix, Provenance provenance, Seed seed,
                                         std::optional<BasisMeta> composed_with, Seed effective_seed)
    : matrix_(std::move(matrix)),
      provenance_(provenance),
      seed_(seed),
      effective_seed_(effective_seed == 0 ? seed : effective_seed),
      composed_with_(composed_with) {
  if (matrix_.rows() < 1 || matrix_.cols() < 1)
    throw ValidationError("measurement operator must be non-empty");
  if (matrix_.rows() >= matrix_.cols())
    throw ValidationError("measurement count L=" + std::to_string(matrix_.rows()) +
                          " must be below N=" + std::to_string(matrix_.cols()) + " (L < N)");
  if (composed_with_ && composed_with_->n != static_cast<std::size_t>(matrix_.cols()))
    throw DimensionError("composed basis dimension does not match operator width");
}

namespace {

Matrix draw_matrix(MatrixKind kind, std::size_t l, std::size_t n, Seed seed) {
  Rng rng(seed);
  const auto rows = static_cast<Eigen::Index>(l);
  const auto cols = static_cast<Eigen::Index>(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(l));
  Matrix m(rows, cols);
  // Row-major fill order is part of the reproducibility contract.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = scale * (kind == MatrixKind::gaussian ? rng.normal() : rng.sign());
  return m;
}

}  // namespace

MeasurementOperator make_measurement_matrix(MatrixKind kind, std::size_t l, std::size_t n, Seed seed) {
  if (l == 0) throw ValidationError("make_measurement_matrix: l must be at least 1");
  if (l >= n)
    throw ValidationError("L < N violated: l=" + std::to_string(l) + ", n=" + std::to_string(n));
  Seed effective = seed;
  Matrix m = draw_matrix(kind, l, n, effective);
  // Rank deficiency is vanishingly rare for gaussian draws but real for tiny
  // bernoulli ones; bound the retries anyway.
  for (int attempt = 0; !has_full_row_rank(m) && attempt < 1000; ++attempt) {
    ++effective;
    m = draw_matrix(kind, l, n, effective);
  }
  if (!has_full_row_rank(m)) throw ValidationError("make_measurement_matrix: no full-rank draw found");
  const Provenance prov = kind == MatrixKind::gaussian ? Provenance::gaussian : Provenance::bernoulli;
  return MeasurementOperator(std::move(m), prov, seed, std::nullopt, effective);
}

AcquisitionRecord measure(const MeasurementOperator& op, const Vector& x, double noise_sigma, Seed seed) {
  if (static_cast<std::size_t>(x.size()) != op.n())
    throw DimensionError("measure: input length " + std::to_string(x.size()) +
                         " does not match operator width " + std::to_string(op.n()));
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw ValidationError("measure: noise_sigma must be finite and nonnegative");
  Vector y = op.matrix() * x;
  if (noise_sigma > 0.0) {
    Rng rng(seed);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += noise_sigma * rng.normal();
  }
  return AcquisitionRecord{std::move(y), op, op.composed_with(), noise_sigma, seed};
}

MeasurementOperator compose(const MeasurementOperator& op, const Basis& basis) {
  if (op.n() != basis.n())
    throw DimensionError("compose: operator width " + std::to_string(op.n()) +
                         " does not match basis dimension " + std::to_string(basis.n()));
  if (op.composed()) throw ValidationError("compose: operator is already composed with a basis");
  Matrix product = basis.kind() == BasisKind::identity ? op.matrix() : Matrix(op.matrix() * basis.matrix());
  return MeasurementOperator(std::move(product), op.provenance(), op.seed(), basis.meta(), op.effective_seed());
}

bool has_full_row_rank(const Matrix& m, double tol) {
  if (m.rows() == 0) return false;
  if (m.rows() > m.cols()) return false;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv[0] == 0.0) return false;
  return sv[sv.size() - 1] > tol * sv[0];
}

double mutual_coherence(const Matrix& phi, const Basis& basis) {
  if (static_cast<std::size_t>(phi.cols()) != basis.n())
    throw DimensionError("mutual_coherence: dimension mismatch");
  Matrix rows = phi;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) rows.row(i) /= norm;
  }
  return (rows * basis.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace csadc
