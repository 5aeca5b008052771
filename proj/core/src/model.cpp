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

#include "csadc/model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "csadc/errors.hpp"

namespace csadc {

std::string_view to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::identity: return "identity";
    case BasisKind::dft_real: return "dft_real";
    case BasisKind::random_orthonormal: return "random_orthonormal";
  }
  return "unknown";
}

BasisKind parse_basis_kind(std::string_view name) {
  if (name == "identity") return BasisKind::identity;
  if (name == "dft_real") return BasisKind::dft_real;
  if (name == "random_orthonormal") return BasisKind::random_orthonormal;
  throw ValidationError("unknown basis kind '" + std::string(name) + "'");
}

namespace {

Matrix dft_real_matrix(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  Matrix m(size, size);
  const double nd = static_cast<double>(n);
  const double dc = 1.0 / std::sqrt(nd);
  const double ac = std::sqrt(2.0 / nd);
  m.col(0).setConstant(dc);
  Eigen::Index col = 1;
  for (std::size_t freq = 1; 2 * freq < n; ++freq) {
    for (Eigen::Index t = 0; t < size; ++t) {
      // Reduce the phase index first so large n keeps full accuracy.
      const auto phase_idx = static_cast<double>((freq * static_cast<std::size_t>(t)) % n);
      const double angle = 2.0 * std::numbers::pi * phase_idx / nd;
      m(t, col) = ac * std::cos(angle);
      m(t, col + 1) = ac * std::sin(angle);
    }
    col += 2;
  }
  if (n % 2 == 0 && n > 1) {
    for (Eigen::Index t = 0; t < size; ++t) m(t, col) = (t % 2 == 0) ? dc : -dc;
  }
  return m;
}

Matrix random_orthonormal_matrix(std::size_t n, Seed seed) {
  const auto size = static_cast<Eigen::Index>(n);
  Rng rng(seed);
  Matrix g(size, size);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < size; ++j)
    for (Eigen::Index i = 0; i < size; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(size, size);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < size; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

Basis make_basis(BasisKind kind, std::size_t n, Seed seed) {
  if (n == 0) throw ValidationError("make_basis: n must be at least 1");
  const auto size = static_cast<Eigen::Index>(n);
  Matrix m;
  switch (kind) {
    case BasisKind::identity: m = Matrix::Identity(size, size); break;
    case BasisKind::dft_real: m = dft_real_matrix(n); break;
    case BasisKind::random_orthonormal: m = random_orthonormal_matrix(n, seed); break;
  }
  return Basis(std::move(m), BasisMeta{kind, n, seed});
}

std::size_t CoefficientVector::sparsity() const {
  return static_cast<std::size_t>((values.array() != 0.0).count());
}

std::vector<std::size_t> CoefficientVector::support(double threshold) const {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (std::abs(values[i]) > threshold) out.push_back(static_cast<std::size_t>(i));
  return out;
}

CoefficientVector sample_sparse_coefficients(const SparsityProfile& profile, std::size_t n, Seed seed) {
  if (n == 0) throw ValidationError("sample_sparse_coefficients: n must be at least 1");
  if (profile.k == 0) throw ValidationError("sample_sparse_coefficients: k must be at least 1");
  if (profile.k > n) throw ValidationError("k exceeds n");
  if (!(profile.amplitude_low <= profile.amplitude_high))
    throw ValidationError("sample_sparse_coefficients: empty amplitude range");
  if (!(profile.amplitude_low > 0.0) || !std::isfinite(profile.amplitude_high))
    throw ValidationError("sample_sparse_coefficients: amplitudes must be positive and finite");

  Rng rng(seed);
  // Partial Fisher-Yates: the first k slots are a uniform k-subset.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < profile.k; ++i) {
    const std::size_t j = i + rng.index(n - i);
    std::swap(idx[i], idx[j]);
  }
  CoefficientVector alpha{Vector::Zero(static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < profile.k; ++i) {
    double value = rng.uniform(profile.amplitude_low, profile.amplitude_high);
    if (profile.sign_symmetric) value *= rng.sign();
    alpha.values[static_cast<Eigen::Index>(idx[i])] = value;
  }
  return alpha;
}

SignalVector synthesize(const Basis& basis, const CoefficientVector& alpha) {
  if (alpha.n() != basis.n())
    throw DimensionError("synthesize: coefficient length " + std::to_string(alpha.n()) +
                         " does not match basis dimension " + std::to_string(basis.n()));
  return SignalVector{basis.matrix() * alpha.values};
}

CoefficientVector analyze(const Basis& basis, const SignalVector& f) {
  if (f.n() != basis.n())
    throw DimensionError("analyze: signal length " + std::to_string(f.n()) +
                         " does not match basis dimension " + std::to_string(basis.n()));
  return CoefficientVector{basis.matrix().transpose() * f.samples};
}

double orthonormality_error(const Matrix& m) {
  const Matrix gram = m.transpose() * m;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace csadc
