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

#include "csadc/model.hpp"
#include "csadc/sensing.hpp"
#include "csadc/solvers.hpp"

namespace csadc {

/// +-1 chipping sequence p, one chip per Nyquist-grid sample.
class ChippingSequence {
 public:
  /// Throws unless every entry is exactly +1 or -1.
  explicit ChippingSequence(Vector chips, Seed seed = 0);

  const Vector& chips() const { return chips_; }
  std::size_t size() const { return static_cast<std::size_t>(chips_.size()); }
  Seed seed() const { return seed_; }
  double operator[](std::size_t i) const { return chips_[static_cast<Eigen::Index>(i)]; }
  ChippingSequence slice(std::size_t start, std::size_t length) const;

 private:
  Vector chips_;
  Seed seed_;
};

ChippingSequence make_chips(std::size_t n, Seed seed);

enum class FilterKind { integrate_and_dump, fir };

std::string_view to_string(FilterKind kind);
FilterKind parse_filter_kind(std::string_view name);

/// Post-mixing low-pass filter h. integrate_and_dump is an all-ones FIR
/// whose length equals the decimation factor (or segment length in PSCS).
struct DemodFilter {
  FilterKind kind = FilterKind::integrate_and_dump;
  Vector taps;

  static DemodFilter integrate_and_dump() { return {}; }
  static DemodFilter fir(Vector taps);

  /// Impulse response for a block of `block_len` grid samples.
  Vector effective_taps(std::size_t block_len) const;
  void validate() const;
};

struct DemodConfig {
  std::size_t n = 0;  ///< Nyquist-grid length
  std::size_t m = 2;  ///< decimation factor, grid samples per output sample
  DemodFilter filter;
  Seed chip_seed = 0;

  std::size_t l() const { return m == 0 ? 0 : n / m; }
  void validate() const;
};

struct VMatrix {
  Matrix matrix;
  DemodConfig config;
  BasisMeta basis;

  std::size_t l() const { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t n() const { return static_cast<std::size_t>(matrix.cols()); }
  MeasurementOperator as_operator() const;
};

/// Random demodulator on the grid: mix with chips, filter, then sample at
/// the end of every M-sample block (0-based indices t_j = (j+1)M - 1):
///
///   y[j] = sum_k h[k] * p[t_j - k] * x[t_j - k],   zero outside [0, n)
///
/// With all-ones taps of length M this is the block sum over [jM, (j+1)M).
class SerialDemodulator {
 public:
  explicit SerialDemodulator(const DemodConfig& config);
  /// Explicit chips; config.chip_seed is kept only as metadata.
  SerialDemodulator(const DemodConfig& config, ChippingSequence chips);

  const DemodConfig& config() const { return config_; }
  const ChippingSequence& chips() const { return chips_; }

  Vector acquire(const Vector& x) const;
  VMatrix build_v_matrix(const Basis& basis) const;

 private:
  DemodConfig config_;
  ChippingSequence chips_;
  Vector taps_;
};

Vector acquire_serial(const SignalVector& x, const DemodConfig& config);
VMatrix build_v_matrix(const Basis& basis, const DemodConfig& config);

struct SerialReconstruction {
  CoefficientVector alpha;
  SignalVector x;
  ReconstructionResult diagnostics;
};

/// Solves for alpha against V and maps back through the basis:
/// x* = sum_i alpha*_i psi_i.
SerialReconstruction reconstruct_serial(const Vector& y, const VMatrix& v, const Basis& basis,
                                        const SolverConfig& solver);

}  // namespace csadc
