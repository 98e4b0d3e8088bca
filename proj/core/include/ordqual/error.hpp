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

#include <stdexcept>
#include <string>
#include <string_view>

namespace ordqual {

/// Machine-readable error codes for every failure the library can signal.
enum class Errc {
  NegativeProbability,
  SumOutOfTolerance,
  UnknownLabel,
  MissingColumn,
  IoFailure,
  SchemaVersionMismatch,
  MissingClass,
  NegativeCount,
  ZeroSampleClass,
  ZeroPopulationClass,
  UncoveredLabel,
  DegenerateData,
  NonFiniteInput,
  NonFiniteLikelihood,
  SeparationDetected,
  CovarianceNotPSD,
  DegenerateRange,
  LengthMismatch,
  ConstantInput,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace ordqual
