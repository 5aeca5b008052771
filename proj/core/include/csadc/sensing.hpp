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
#include <string_view>

#include "csadc/model.hpp"

namespace csadc {

enum class MatrixKind { gaussian, bernoulli };
enum class Provenance { gaussian, bernoulli, demodulator, pscs };

std::string_view to_string(MatrixKind kind);
std::string_view to_string(Provenance p);
MatrixKind parse_matrix_kind(std::string_view name);
Provenance parse_provenance(std::string_view name);

/// L x N linear measurement operator with L < N.
///
/// When composed with a basis the operator acts on coefficients rather
/// than Nyquist-grid samples; composed_with() names that basis.
class MeasurementOperator {
 public:
  MeasurementOperator(Matrix matrix, Provenance provenance, Seed seed,
                      std::optional<BasisMeta> composed_with = std::nullopt,
                      Seed effective_seed = 0);

  const Matrix& matrix() const { return matrix_; }
  std::size_t l() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t n() const { return static_cast<std::size_t>(matrix_.cols()); }
  Provenance provenance() const { return provenance_; }
  /// Seed requested by the caller.
  Seed seed() const { return seed_; }
  /// Seed actually used after any full-rank retries (equals seed() normally).
  Seed effective_seed() const { return effective_seed_; }
  bool composed() const { return composed_with_.has_value(); }
  const std::optional<BasisMeta>& composed_with() const { return composed_with_; }

 private:
  Matrix matrix_;
  Provenance provenance_;
  Seed seed_;
  Seed effective_seed_;
  std::optional<BasisMeta> composed_with_;
};

struct AcquisitionRecord {
  Vector y;
  MeasurementOperator op;
  std::optional<BasisMeta> basis;
  double noise_sigma = 0.0;
  Seed noise_seed = 0;
};

/// gaussian: i.i.d. N(0, 1/l). bernoulli: +-1/sqrt(l) with equal odds.
/// A draw without full row rank (tolerance 1e-10) is replaced by the draw
/// for seed + 1, repeatedly.
MeasurementOperator make_measurement_matrix(MatrixKind kind, std::size_t l, std::size_t n, Seed seed);

/// y = A x + eta, eta ~ N(0, noise_sigma^2) i.i.d. (exactly zero when sigma == 0).
AcquisitionRecord measure(const MeasurementOperator& op, const Vector& x, double noise_sigma, Seed seed);
inline AcquisitionRecord measure(const MeasurementOperator& op, const SignalVector& f, double noise_sigma,
                                 Seed seed) {
  return measure(op, f.samples, noise_sigma, seed);
}

/// Phi * Psi, keeping provenance and seeds.
MeasurementOperator compose(const MeasurementOperator& op, const Basis& basis);

bool has_full_row_rank(const Matrix& m, double tol = 1e-10);

/// Diagnostic only: max |<row_i/|row_i|, psi_j>| over rows of phi and columns of Psi.
double mutual_coherence(const Matrix& phi, const Basis& basis);

}  // namespace csadc
