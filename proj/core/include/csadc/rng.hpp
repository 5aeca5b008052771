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
#include <cstdint>
#include <random>

namespace csadc {

using Seed = std::uint64_t;

/// Seeded random source used by every generator in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard <random> distributions are implementation-defined,
/// so the transforms below are spelled out here instead:
///   - uniform():   top 53 bits of one engine draw, scaled by 2^-53, in [0, 1)
///   - index(n):    rejection sampling on a full 64-bit draw (no modulo bias)
///   - normal():    Marsaglia polar method, second variate cached
///   - sign():      top bit of one engine draw
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi);
  std::size_t index(std::size_t n);
  double normal();
  double sign();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer over (base, stream); gives independent sub-seeds.
Seed derive_seed(Seed base, std::uint64_t stream);

}  // namespace csadc
