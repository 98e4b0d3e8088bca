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
#include "ordqual/types.hpp"

#include <cmath>
#include <sstream>

namespace ordqual {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NegativeProbability: return "NegativeProbability";
    case Errc::SumOutOfTolerance: return "SumOutOfTolerance";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::IoFailure: return "IoFailure";
    case Errc::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case Errc::MissingClass: return "MissingClass";
    case Errc::NegativeCount: return "NegativeCount";
    case Errc::ZeroSampleClass: return "ZeroSampleClass";
    case Errc::ZeroPopulationClass: return "ZeroPopulationClass";
    case Errc::UncoveredLabel: return "UncoveredLabel";
    case Errc::DegenerateData: return "DegenerateData";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::NonFiniteLikelihood: return "NonFiniteLikelihood";
    case Errc::SeparationDetected: return "SeparationDetected";
    case Errc::CovarianceNotPSD: return "CovarianceNotPSD";
    case Errc::DegenerateRange: return "DegenerateRange";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::ConstantInput: return "ConstantInput";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) { throw Error(code, message); }

namespace {
constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "Stub", "Start", "C", "B", "GA", "FA"};
}  // namespace

QualityClass quality_class_from_code(int code) {
  if (code < 0 || code >= kNumClasses) {
    raise(Errc::UnknownLabel, "class code out of range: " + std::to_string(code));
  }
  return static_cast<QualityClass>(code);
}

QualityClass parse_quality_class(std::string_view name) {
  for (int k = 0; k < kNumClasses; ++k) {
    if (kClassNames[static_cast<std::size_t>(k)] == name) {
      return static_cast<QualityClass>(k);
    }
  }
  raise(Errc::UnknownLabel, "unrecognized quality class: '" + std::string(name) + "'");
}

std::string_view to_string(QualityClass c) noexcept {
  return kClassNames[static_cast<std::size_t>(code_of(c))];
}

const std::array<QualityClass, kNumClasses>& all_quality_classes() noexcept {
  static const std::array<QualityClass, kNumClasses> classes = {
      QualityClass::Stub, QualityClass::Start, QualityClass::C,
      QualityClass::B,    QualityClass::GA,    QualityClass::FA};
  return classes;
}

ProbabilityVector ProbabilityVector::from_components(
    const std::array<double, kNumClasses>& p) {
  double sum = 0.0;
  for (int k = 0; k < kNumClasses; ++k) {
    const double v = p[static_cast<std::size_t>(k)];
    if (!(v >= 0.0)) {  // catches NaN as well
      std::ostringstream os;
      os << "component " << k << " is " << v;
      raise(Errc::NegativeProbability, os.str());
    }
    sum += v;
  }
  if (!std::isfinite(sum) || std::abs(sum - 1.0) > kSumTolerance) {
    std::ostringstream os;
    os << "components sum to " << sum;
    raise(Errc::SumOutOfTolerance, os.str());
  }
  ProbabilityVector out;
  for (int k = 0; k < kNumClasses; ++k) {
    out.p_[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)] / sum;
  }
  return out;
}

std::array<std::int64_t, kNumClasses> Dataset::class_counts() const {
  std::array<std::int64_t, kNumClasses> counts{};
  for (const auto& inst : instances) {
    ++counts[static_cast<std::size_t>(code_of(inst.label))];
  }
  return counts;
}

int Dataset::distinct_label_count() const {
  const auto counts = class_counts();
  int distinct = 0;
  for (auto c : counts) {
    if (c > 0) ++distinct;
  }
  return distinct;
}

LabeledInstance validate_instance(const RawRow& row) {
  LabeledInstance out{row.id, ProbabilityVector::from_components(row.probs),
                      parse_quality_class(row.label), 1.0};
  return out;
}

QualityClass argmax_class(const std::array<double, kNumClasses>& values) {
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (values[static_cast<std::size_t>(k)] > values[static_cast<std::size_t>(best)]) {
      best = k;
    }
  }
  return static_cast<QualityClass>(best);
}

}  // namespace ordqual
