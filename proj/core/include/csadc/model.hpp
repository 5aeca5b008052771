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

#include <Eigen/Dense>

#include "csadc/rng.hpp"

namespace csadc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class BasisKind { identity, dft_real, random_orthonormal };

std::string_view to_string(BasisKind kind);
BasisKind parse_basis_kind(std::string_view name);

/// Enough to regenerate a basis bit-for-bit.
struct BasisMeta {
  BasisKind kind = BasisKind::identity;
  std::size_t n = 0;
  Seed seed = 0;

  friend bool operator==(const BasisMeta&, const BasisMeta&) = default;
};

/// Orthonormal N x N synthesis basis. Column i is the i-th basis signal
/// sampled on the Nyquist grid.
class Basis {
 public:
  const Matrix& matrix() const { return matrix_; }
  BasisKind kind() const { return meta_.kind; }
  std::size_t n() const { return meta_.n; }
  Seed seed() const { return meta_.seed; }
  const BasisMeta& meta() const { return meta_; }
  Vector column(std::size_t i) const { return matrix_.col(static_cast<Eigen::Index>(i)); }

 private:
  friend Basis make_basis(BasisKind, std::size_t, Seed);
  Basis(Matrix m, BasisMeta meta) : matrix_(std::move(m)), meta_(meta) {}

  Matrix matrix_;
  BasisMeta meta_;
};

/// Builds a basis. identity ignores the seed; dft_real is the real
/// orthonormal Fourier basis ordered [dc, cos 1, sin 1, cos 2, sin 2, ...,
/// nyquist (even n)]; random_orthonormal is the Q factor of a seeded
/// Gaussian matrix with the sign of diag(R) folded in.
Basis make_basis(BasisKind kind, std::size_t n, Seed seed);
inline Basis make_basis(const BasisMeta& meta) { return make_basis(meta.kind, meta.n, meta.seed); }

struct CoefficientVector {
  Vector values;

  std::size_t n() const { return static_cast<std::size_t>(values.size()); }
  std::size_t sparsity() const;
  /// Indices with |value| > threshold, ascending.
  std::vector<std::size_t> support(double threshold = 0.0) const;
};

struct SignalVector {
  Vector samples;

  std::size_t n() const { return static_cast<std::size_t>(samples.size()); }
};

struct SparsityProfile {
  std::size_t k = 1;
  double amplitude_low = 1.0;
  double amplitude_high = 1.0;
  bool sign_symmetric = true;
};

/// Exactly k nonzeros at distinct uniformly drawn indices, magnitudes
/// uniform in [amplitude_low, amplitude_high], random signs when
/// sign_symmetric.
CoefficientVector sample_sparse_coefficients(const SparsityProfile& profile, std::size_t n, Seed seed);

/// f = Psi * alpha
SignalVector synthesize(const Basis& basis, const CoefficientVector& alpha);
/// alpha = Psi^T * f
CoefficientVector analyze(const Basis& basis, const SignalVector& f);

/// max |Psi^T Psi - I|
double orthonormality_error(const Matrix& m);

}  // namespace csadc
