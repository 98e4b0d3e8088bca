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
#include "ordqual/weighting.hpp"

#include <string>

namespace ordqual {

PopulationCounts article_population() {
  return PopulationCounts{{3359351, 1019038, 235655, 128875, 31808, 7438}, "article"};
}

PopulationCounts revision_population() {
  return PopulationCounts{{12005611, 7828335, 3889639, 3640591, 924468, 365255},
                          "revision"};
}

PopulationCounts quality_class_population() {
  return PopulationCounts{{1, 1, 1, 1, 1, 1}, "class"};
}

WeightTable compute_weights(const std::array<std::int64_t, kNumClasses>& sample_counts,
                            const PopulationCounts& population,
                            ZeroPopulationPolicy policy) {
  std::int64_t sample_total = 0;
  std::int64_t pop_total = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    if (population.counts[idx] < 0) {
      raise(Errc::NegativeCount, "population count for " +
                                     std::string(to_string(quality_class_from_code(k))) +
                                     " is negative");
    }
    sample_total += sample_counts[idx];
    pop_total += population.counts[idx];
  }
  if (pop_total <= 0) {
    raise(Errc::ZeroPopulationClass, "population total is zero");
  }

  WeightTable table;
  table.unit = population.unit;
  for (int k = 0; k < kNumClasses; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const std::string name(to_string(quality_class_from_code(k)));
    if (population.counts[idx] == 0) {
      if (policy == ZeroPopulationPolicy::Strict) {
        raise(Errc::ZeroPopulationClass, "class " + name + " has zero population count");
      }
      table.weights[idx] = 0.0;
      continue;
    }
    if (sample_counts[idx] <= 0) {
      raise(Errc::ZeroSampleClass,
            "class " + name + " is present in the population but absent from the sample");
    }
    // Form the two proportions first so proportional scalings of either side
    // cancel exactly in floating point.
    const double pop_share = static_cast<double>(population.counts[idx]) /
                             static_cast<double>(pop_total);
    const double sample_share = static_cast<double>(sample_counts[idx]) /
                                static_cast<double>(sample_total);
    table.weights[idx] = pop_share / sample_share;
  }
  return table;
}

Dataset apply_weights(const Dataset& dataset, const WeightTable& table) {
  Dataset out = dataset;
  for (auto& inst : out.instances) {
    const double w = table.weights[static_cast<std::size_t>(code_of(inst.label))];
    if (!(w > 0.0)) {
      raise(Errc::UncoveredLabel, "label " + std::string(to_string(inst.label)) +
                                      " has no positive weight in unit '" + table.unit +
                                      "'");
    }
    inst.weight = w;
  }
  return out;
}

}  // namespace ordqual
