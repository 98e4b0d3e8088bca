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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ordqual/error.hpp"

namespace ordqual {

/// Number of ordered quality classes.
inline constexpr int kNumClasses = 6;

/// The six ordered assessment levels. Integer codes fix the total order and
/// make the evenly-spaced baseline the identity map over codes.
enum class QualityClass : int {
  Stub = 0,
  Start = 1,
  C = 2,
  B = 3,
  GA = 4,
  FA = 5,
};

constexpr int code_of(QualityClass c) noexcept { return static_cast<int>(c); }

/// Converts an integer code in 0..5; throws UnknownLabel otherwise.
QualityClass quality_class_from_code(int code);

/// Parses one of the six canonical names (case-sensitive). Anything else,
/// including "A-class", is rejected with UnknownLabel.
QualityClass parse_quality_class(std::string_view name);

std::string_view to_string(QualityClass c) noexcept;

/// All six classes in ascending order.
const std::array<QualityClass, kNumClasses>& all_quality_classes() noexcept;

/// A point on the 6-dimensional probability simplex: one classifier
/// prediction. Construction validates non-negativity and that the components
/// sum to 1 within kSumTolerance, then renormalizes so the sum is exactly 1
/// up to floating-point rounding.
class ProbabilityVector {
public:
  static constexpr double kSumTolerance = 1e-6;

  /// The Stub vertex (1, 0, 0, 0, 0, 0); every instance is a valid point.
  ProbabilityVector() = default;

  /// Validates and renormalizes. Throws NegativeProbability (also for
  /// non-finite components) or SumOutOfTolerance.
  static ProbabilityVector from_components(const std::array<double, kNumClasses>& p);

  double operator[](int k) const { return p_[static_cast<std::size_t>(k)]; }
  const std::array<double, kNumClasses>& components() const noexcept { return p_; }

  bool operator==(const ProbabilityVector&) const = default;

private:
  std::array<double, kNumClasses> p_{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
};

/// One labeled observation: classifier probabilities plus the assessed class
/// and an analysis weight (1 until a weighting is applied).
struct LabeledInstance {
  std::string id;
  ProbabilityVector probs;
  QualityClass label;
  double weight = 1.0;
};

/// An ordered, immutable-by-convention collection of instances.
struct Dataset {
  std::vector<LabeledInstance> instances;
  std::string provenance;

  std::size_t size() const noexcept { return instances.size(); }
  bool empty() const noexcept { return instances.empty(); }

  /// Instances per class, in class-code order.
  std::array<std::int64_t, kNumClasses> class_counts() const;

  /// Number of classes with at least one instance.
  int distinct_label_count() const;
};

/// An unvalidated input row as read from a file.
struct RawRow {
  std::string id;
  std::array<double, kNumClasses> probs;
  std::string label;
};

/// Validates a raw row into a LabeledInstance with weight 1.
/// Throws NegativeProbability, SumOutOfTolerance, or UnknownLabel.
LabeledInstance validate_instance(const RawRow& row);

/// Index of the largest component; exact ties resolve to the lower class.
/// Shared by the MPQC baseline and model class prediction.
QualityClass argmax_class(const std::array<double, kNumClasses>& values);

}  // namespace ordqual
