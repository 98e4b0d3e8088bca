/*
 * ordqual - calibrated one-dimensional quality measures from ordinal
 * classifier probabilities.
 *
 * Copyright 2026 the ordqual authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <random>

namespace ordqual {

/// Seeded random source with fully specified output. The mt19937_64 engine is
/// defined by the C++ standard, and all variate transforms below are our own,
/// so identical seeds give identical streams on every platform. The standard
/// <random> distributions are implementation-defined and must not be used
/// where reproducibility matters.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape 0 returns 0.
  double gamma(double shape);

private:
  std::mt19937_64 engine_;
};

}  // namespace ordqual
