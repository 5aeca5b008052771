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
#include <vector>

#include "csadc/demodulator.hpp"
#include "csadc/model.hpp"
#include "csadc/sensing.hpp"

namespace csadc {

enum class WindowKind { rectangular, triangular };

std::string_view to_string(WindowKind kind);
WindowKind parse_window_kind(std::string_view name);

/// Segmentation of an n-sample signal into num_segments windows of
/// segment_len samples; segment m starts at m * (segment_len - overlap).
struct WindowPlan {
  std::size_t num_segments = 1;
  std::size_t segment_len = 1;
  std::size_t overlap = 0;
  WindowKind window = WindowKind::rectangular;

  /// Signal length this plan tiles exactly.
  std::size_t n() const;
  std::size_t start(std::size_t segment) const { return segment * (segment_len - overlap); }
  /// Window taps; triangular matches the common "triang" definition
  /// (nonzero end points).
  Vector taps() const;
  void validate() const;
  void validate_for(std::size_t n) const;

  /// Plan with the given segment count and overlap that tiles n exactly.
  static WindowPlan tiling(std::size_t n, std::size_t num_segments, std::size_t overlap = 0,
                           WindowKind window = WindowKind::rectangular);
};

/// Parallel fingers applied to every segment. Finger f mixes with the chip
/// sequence drawn from chip_seeds[f] (length segment_len) and integrates.
struct FingerBank {
  std::size_t fingers_per_segment = 1;
  std::vector<Seed> chip_seeds;
  DemodFilter filter;

  void validate() const;
  /// chip_seeds[f] = derive_seed(base, f).
  static FingerBank with_seeds(std::size_t fingers, Seed base);
};

/// Chip sequences for every (segment, finger) pair.
class ChipTable {
 public:
  ChipTable(std::size_t segments, std::size_t fingers, std::vector<ChippingSequence> chips);

  /// Finger f carries one free-running sequence over the full grid; segment
  /// m gets the slice starting at plan.start(m).
  static ChipTable from_bank(const WindowPlan& plan, const FingerBank& bank);
  /// One finger per segment carrying the matching slice of a global
  /// sequence; with a zero-overlap rectangular plan this reproduces the
  /// serial demodulator.
  static ChipTable from_global(const WindowPlan& plan, const ChippingSequence& global);

  std::size_t segments() const { return segments_; }
  std::size_t fingers() const { return fingers_; }
  const ChippingSequence& at(std::size_t segment, std::size_t finger) const;

 private:
  std::size_t segments_;
  std::size_t fingers_;
  std::vector<ChippingSequence> chips_;  // segment-major
};

struct PscsMeasurement {
  /// Segment-major: y_joint[m * F + f] is segment m on finger f.
  Vector y_joint;
  WindowPlan plan;
  FingerBank bank;

  double at(std::size_t segment, std::size_t finger) const;
};

std::vector<Vector> window_signal(const SignalVector& x, const WindowPlan& plan);

PscsMeasurement acquire_pscs(const SignalVector& x, const WindowPlan& plan, const FingerBank& bank);
/// Same acquisition with explicit chips. Each scalar is the filter output at
/// the last sample of the segment, i.e. sum_k h[k] z[len-1-k] with
/// z = window * segment * chips; all-ones taps give plain integration.
Vector acquire_pscs(const SignalVector& x, const WindowPlan& plan, const ChipTable& chips, const DemodFilter& filter);

/// (num_segments * F) x n operator whose column i is acquire_pscs(psi_i).
MeasurementOperator build_pscs_matrix(const Basis& basis, const WindowPlan& plan, const FingerBank& bank);
MeasurementOperator build_pscs_matrix(const Basis& basis, const WindowPlan& plan, const ChipTable& chips,
                                      const DemodFilter& filter, Seed seed = 0);

/// The F rows belonging to one segment.
Matrix segment_rows(const MeasurementOperator& joint, std::size_t fingers_per_segment, std::size_t segment);

}  // namespace csadc
