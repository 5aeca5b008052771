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

#include "csadc/pscs.hpp"

#include <cmath>
#include <set>
#include <string>

#include "csadc/errors.hpp"

namespace csadc {

std::string_view to_string(WindowKind kind) {
  return kind == WindowKind::rectangular ? "rectangular" : "triangular";
}

WindowKind parse_window_kind(std::string_view name) {
  if (name == "rectangular") return WindowKind::rectangular;
  if (name == "triangular") return WindowKind::triangular;
  throw ValidationError("unknown window kind '" + std::string(name) + "'");
}

std::size_t WindowPlan::n() const {
  if (num_segments == 0 || overlap >= segment_len) return 0;
  return (num_segments - 1) * (segment_len - overlap) + segment_len;
}

Vector WindowPlan::taps() const {
  const auto len = static_cast<Eigen::Index>(segment_len);
  if (window == WindowKind::rectangular) return Vector::Ones(len);
  Vector w(len);
  const double center = 0.5 * static_cast<double>(segment_len - 1);
  const double half = segment_len % 2 == 0 ? 0.5 * static_cast<double>(segment_len)
                                           : 0.5 * static_cast<double>(segment_len + 1);
  for (Eigen::Index j = 0; j < len; ++j) w[j] = 1.0 - std::abs(static_cast<double>(j) - center) / half;
  return w;
}

void WindowPlan::validate() const {
  if (num_segments == 0) throw ValidationError("window plan: num_segments must be at least 1");
  if (segment_len == 0) throw ValidationError("window plan: segment_len must be at least 1");
  if (overlap >= segment_len) throw ValidationError("window plan: overlap must be below segment_len");
}

void WindowPlan::validate_for(std::size_t n_signal) const {
  validate();
  if (n() != n_signal)
    throw ValidationError("window plan covers " + std::to_string(n()) + " samples but the signal has " +
                          std::to_string(n_signal));
}

WindowPlan WindowPlan::tiling(std::size_t n_signal, std::size_t num_segments, std::size_t overlap, WindowKind window) {
  if (num_segments == 0) throw ValidationError("window plan: num_segments must be at least 1");
  // n = (S - 1)(len - o) + len  =>  len = (n + (S - 1) o) / S
  const std::size_t total = n_signal + (num_segments - 1) * overlap;
  if (total % num_segments != 0)
    throw ValidationError("window plan: " + std::to_string(num_segments) + " segments with overlap " +
                          std::to_string(overlap) + " cannot tile n=" + std::to_string(n_signal));
  WindowPlan plan{num_segments, total / num_segments, overlap, window};
  plan.validate_for(n_signal);
  return plan;
}

void FingerBank::validate() const {
  if (fingers_per_segment == 0) throw ValidationError("finger bank: fingers_per_segment must be at least 1");
  if (chip_seeds.size() != fingers_per_segment)
    throw ValidationError("finger bank: expected " + std::to_string(fingers_per_segment) + " chip seeds, got " +
                          std::to_string(chip_seeds.size()));
  if (std::set<Seed>(chip_seeds.begin(), chip_seeds.end()).size() != chip_seeds.size())
    throw ValidationError("finger bank: chip seeds must be pairwise distinct");
  filter.validate();
}

FingerBank FingerBank::with_seeds(std::size_t fingers, Seed base) {
  FingerBank bank;
  bank.fingers_per_segment = fingers;
  for (std::size_t f = 0; f < fingers; ++f) bank.chip_seeds.push_back(derive_seed(base, f));
  bank.validate();
  return bank;
}

ChipTable::ChipTable(std::size_t segments, std::size_t fingers, std::vector<ChippingSequence> chips)
    : segments_(segments), fingers_(fingers), chips_(std::move(chips)) {
  if (chips_.size() != segments_ * fingers_) throw DimensionError("chip table: wrong number of sequences");
}

ChipTable ChipTable::from_bank(const WindowPlan& plan, const FingerBank& bank) {
  plan.validate();
  bank.validate();
  // Each finger runs its own generator over the whole grid; a segment sees
  // the stretch of that sequence covering its time span.
  std::vector<ChippingSequence> per_finger;
  for (const Seed s : bank.chip_seeds) per_finger.push_back(make_chips(plan.n(), s));
  std::vector<ChippingSequence> table;
  table.reserve(plan.num_segments * bank.fingers_per_segment);
  for (std::size_t m = 0; m < plan.num_segments; ++m)
    for (std::size_t f = 0; f < bank.fingers_per_segment; ++f)
      table.push_back(per_finger[f].slice(plan.start(m), plan.segment_len));
  return ChipTable(plan.num_segments, bank.fingers_per_segment, std::move(table));
}

ChipTable ChipTable::from_global(const WindowPlan& plan, const ChippingSequence& global) {
  plan.validate_for(global.size());
  std::vector<ChippingSequence> table;
  for (std::size_t m = 0; m < plan.num_segments; ++m) table.push_back(global.slice(plan.start(m), plan.segment_len));
  return ChipTable(plan.num_segments, 1, std::move(table));
}

const ChippingSequence& ChipTable::at(std::size_t segment, std::size_t finger) const {
  if (segment >= segments_ || finger >= fingers_) throw DimensionError("chip table index out of range");
  return chips_[segment * fingers_ + finger];
}

double PscsMeasurement::at(std::size_t segment, std::size_t finger) const {
  if (segment >= plan.num_segments || finger >= bank.fingers_per_segment)
    throw DimensionError("pscs measurement index out of range");
  return y_joint[static_cast<Eigen::Index>(segment * bank.fingers_per_segment + finger)];
}

std::vector<Vector> window_signal(const SignalVector& x, const WindowPlan& plan) {
  plan.validate_for(x.n());
  const Vector w = plan.taps();
  std::vector<Vector> segments;
  segments.reserve(plan.num_segments);
  for (std::size_t m = 0; m < plan.num_segments; ++m) {
    segments.emplace_back(x.samples.segment(static_cast<Eigen::Index>(plan.start(m)),
                                            static_cast<Eigen::Index>(plan.segment_len))
                              .cwiseProduct(w));
  }
  return segments;
}

Vector acquire_pscs(const SignalVector& x, const WindowPlan& plan, const ChipTable& chips, const DemodFilter& filter) {
  plan.validate_for(x.n());
  filter.validate();
  if (chips.segments() != plan.num_segments) throw DimensionError("chip table segment count does not match plan");
  const std::vector<Vector> segments = window_signal(x, plan);
  const Vector taps = filter.effective_taps(plan.segment_len);
  const auto len = static_cast<Eigen::Index>(plan.segment_len);
  const std::size_t fingers = chips.fingers();
  Vector y(static_cast<Eigen::Index>(plan.num_segments * fingers));
  for (std::size_t m = 0; m < plan.num_segments; ++m) {
    for (std::size_t f = 0; f < fingers; ++f) {
      const Vector& p = chips.at(m, f).chips();
      if (p.size() != len) throw DimensionError("chip length does not match segment length");
      double acc = 0.0;
      for (Eigen::Index k = 0; k < taps.size() && k < len; ++k) {
        const Eigen::Index t = len - 1 - k;
        acc += taps[k] * p[t] * segments[m][t];
      }
      y[static_cast<Eigen::Index>(m * fingers + f)] = acc;
    }
  }
  return y;
}

PscsMeasurement acquire_pscs(const SignalVector& x, const WindowPlan& plan, const FingerBank& bank) {
  plan.validate_for(x.n());
  const ChipTable table = ChipTable::from_bank(plan, bank);
  return PscsMeasurement{acquire_pscs(x, plan, table, bank.filter), plan, bank};
}

MeasurementOperator build_pscs_matrix(const Basis& basis, const WindowPlan& plan, const ChipTable& chips,
                                      const DemodFilter& filter, Seed seed) {
  plan.validate_for(basis.n());
  const auto n = static_cast<Eigen::Index>(basis.n());
  Matrix joint(static_cast<Eigen::Index>(plan.num_segments * chips.fingers()), n);
  for (Eigen::Index i = 0; i < n; ++i)
    joint.col(i) = acquire_pscs(SignalVector{basis.matrix().col(i)}, plan, chips, filter);
  return MeasurementOperator(std::move(joint), Provenance::pscs, seed, basis.meta());
}

MeasurementOperator build_pscs_matrix(const Basis& basis, const WindowPlan& plan, const FingerBank& bank) {
  plan.validate_for(basis.n());
  const Seed seed = bank.chip_seeds.empty() ? 0 : bank.chip_seeds.front();
  return build_pscs_matrix(basis, plan, ChipTable::from_bank(plan, bank), bank.filter, seed);
}

Matrix segment_rows(const MeasurementOperator& joint, std::size_t fingers_per_segment, std::size_t segment) {
  if (fingers_per_segment == 0 || joint.l() % fingers_per_segment != 0)
    throw DimensionError("segment_rows: operator rows are not a multiple of fingers_per_segment");
  if ((segment + 1) * fingers_per_segment > joint.l()) throw DimensionError("segment_rows: segment out of range");
  return joint.matrix().middleRows(static_cast<Eigen::Index>(segment * fingers_per_segment),
                                   static_cast<Eigen::Index>(fingers_per_segment));
}

}  // namespace csadc
