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

#include "csadc/demodulator.hpp"

#include <cmath>
#include <string>

#include "csadc/errors.hpp"
#include "csadc/solvers.hpp"

namespace csadc {

ChippingSequence::ChippingSequence(Vector chips, Seed seed) : chips_(std::move(chips)), seed_(seed) {
  if (chips_.size() == 0) throw ValidationError("chipping sequence must be non-empty");
  for (Eigen::Index i = 0; i < chips_.size(); ++i) {
    if (chips_[i] != 1.0 && chips_[i] != -1.0)
      throw ValidationError("chipping sequence entries must be +1 or -1");
  }
}

ChippingSequence ChippingSequence::slice(std::size_t start, std::size_t length) const {
  if (start + length > size()) throw DimensionError("chip slice out of range");
  return ChippingSequence(chips_.segment(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(length)),
                          seed_);
}

ChippingSequence make_chips(std::size_t n, Seed seed) {
  if (n == 0) throw ValidationError("make_chips: n must be at least 1");
  Rng rng(seed);
  Vector chips(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < chips.size(); ++i) chips[i] = rng.sign();
  return ChippingSequence(std::move(chips), seed);
}

std::string_view to_string(FilterKind kind) {
  return kind == FilterKind::integrate_and_dump ? "integrate_and_dump" : "fir";
}

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "integrate_and_dump") return FilterKind::integrate_and_dump;
  if (name == "fir") return FilterKind::fir;
  throw ValidationError("unknown filter kind '" + std::string(name) + "'");
}

DemodFilter DemodFilter::fir(Vector taps) {
  DemodFilter f{FilterKind::fir, std::move(taps)};
  f.validate();
  return f;
}

void DemodFilter::validate() const {
  if (kind != FilterKind::fir) return;
  if (taps.size() == 0) throw ValidationError("fir filter needs at least one tap");
  if (!taps.allFinite()) throw ValidationError("fir filter taps must be finite");
}

Vector DemodFilter::effective_taps(std::size_t block_len) const {
  if (kind == FilterKind::integrate_and_dump) return Vector::Ones(static_cast<Eigen::Index>(block_len));
  return taps;
}

void DemodConfig::validate() const {
  if (n == 0) throw ValidationError("demodulator: n must be at least 1");
  if (m < 2) throw ValidationError("demodulator: decimation factor m must be at least 2 (L < N)");
  if (n % m != 0)
    throw ValidationError("demodulator: m=" + std::to_string(m) + " does not divide n=" + std::to_string(n));
  filter.validate();
}

MeasurementOperator VMatrix::as_operator() const {
  return MeasurementOperator(matrix, Provenance::demodulator, config.chip_seed, basis);
}

SerialDemodulator::SerialDemodulator(const DemodConfig& config)
    : SerialDemodulator(config, make_chips(config.n == 0 ? 1 : config.n, config.chip_seed)) {}

SerialDemodulator::SerialDemodulator(const DemodConfig& config, ChippingSequence chips)
    : config_(config), chips_(std::move(chips)) {
  config_.validate();
  if (chips_.size() != config_.n)
    throw DimensionError("demodulator: chip length " + std::to_string(chips_.size()) +
                         " does not match n=" + std::to_string(config_.n));
  taps_ = config_.filter.effective_taps(config_.m);
}

Vector SerialDemodulator::acquire(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != config_.n)
    throw DimensionError("acquire_serial: signal length " + std::to_string(x.size()) +
                         " does not match n=" + std::to_string(config_.n));
  const auto l = static_cast<Eigen::Index>(config_.l());
  const auto m = static_cast<Eigen::Index>(config_.m);
  const Vector& p = chips_.chips();
  Vector y(l);
  for (Eigen::Index j = 0; j < l; ++j) {
    const Eigen::Index t = (j + 1) * m - 1;
    double acc = 0.0;
    for (Eigen::Index k = 0; k < taps_.size() && k <= t; ++k) acc += taps_[k] * p[t - k] * x[t - k];
    y[j] = acc;
  }
  return y;
}

VMatrix SerialDemodulator::build_v_matrix(const Basis& basis) const {
  if (basis.n() != config_.n)
    throw DimensionError("build_v_matrix: basis dimension " + std::to_string(basis.n()) +
                         " does not match n=" + std::to_string(config_.n));
  const auto n = static_cast<Eigen::Index>(config_.n);
  Matrix v(static_cast<Eigen::Index>(config_.l()), n);
  // Column i is the pipeline response to basis signal psi_i.
  for (Eigen::Index i = 0; i < n; ++i) v.col(i) = acquire(basis.matrix().col(i));
  return VMatrix{std::move(v), config_, basis.meta()};
}

Vector acquire_serial(const SignalVector& x, const DemodConfig& config) {
  return SerialDemodulator(config).acquire(x.samples);
}

VMatrix build_v_matrix(const Basis& basis, const DemodConfig& config) {
  return SerialDemodulator(config).build_v_matrix(basis);
}

SerialReconstruction reconstruct_serial(const Vector& y, const VMatrix& v, const Basis& basis,
                                        const SolverConfig& solver) {
  if (static_cast<std::size_t>(y.size()) != v.l())
    throw DimensionError("reconstruct_serial: measurement length " + std::to_string(y.size()) +
                         " does not match V rows " + std::to_string(v.l()));
  if (!(basis.meta() == v.basis)) throw ValidationError("reconstruct_serial: basis differs from the one used for V");
  ReconstructionResult result = solve(v.matrix, y, solver);
  SignalVector x = synthesize(basis, result.alpha_star);
  return SerialReconstruction{result.alpha_star, std::move(x), std::move(result)};
}

}  // namespace csadc
