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

#include "ordqual/types.hpp"

namespace ordqual {

/// Per-class population sizes for a named unit of analysis.
struct PopulationCounts {
  std::array<std::int64_t, kNumClasses> counts{};
  std::string unit = "custom";
};

/// Per-class inverse-probability analysis weights:
/// weight_k = (population share of class k) / (sample share of class k).
/// By construction the weighted class proportions of the sample equal the
/// population class proportions.
struct WeightTable {
  std::array<double, kNumClasses> weights{};
  std::string unit;
};

/// Built-in units of analysis. "class" means uniform population counts.
PopulationCounts article_population();
PopulationCounts revision_population();
PopulationCounts quality_class_population();

enum class ZeroPopulationPolicy {
  Strict,      ///< a class with zero population count is an error
  Permissive,  ///< such a class gets weight 0 (its instances are uncovered)
};

/// Computes the weight table for a sample with the given per-class counts,
/// calibrated to the population. Throws ZeroSampleClass when a class with
/// population mass was never sampled, and ZeroPopulationClass in strict mode.
WeightTable compute_weights(const std::array<std::int64_t, kNumClasses>& sample_counts,
                            const PopulationCounts& population,
                            ZeroPopulationPolicy policy = ZeroPopulationPolicy::Strict);

/// Returns a copy of the dataset with each instance's weight set to its
/// class's table weight. Instance order is preserved. A label whose table
/// weight is 0 is uncovered and raises UncoveredLabel.
Dataset apply_weights(const Dataset& dataset, const WeightTable& table);

}  // namespace ordqual
