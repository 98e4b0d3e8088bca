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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ordqual/ordinal.hpp"
#include "ordqual/pca.hpp"
#include "ordqual/types.hpp"

namespace ordqual {

/// Per-instance scores: the link-scale quality measure phi with its 95%
/// interval, the normalized versions, and the baseline measures.
struct ScoreRecord {
  std::string id;
  double phi = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double phi_norm = 0.0;
  double ci_norm_low = 0.0;
  double ci_norm_high = 0.0;
  QualityClass predicted_class = QualityClass::Stub;
  QualityClass mpqc = QualityClass::Stub;
  double evenly_spaced = 0.0;
};

/// Strictly increasing affine map sending the pooled minimum of scores and
/// thresholds to 0 and the pooled maximum to 1.
struct NormalizationMap {
  double source_min = 0.0;
  double source_max = 1.0;
  double apply(double v) const { return (v - source_min) / (source_max - source_min); }
};

/// phi = B . transform(p). Throws NonFiniteInput.
double score(const ProbabilityVector& probs, const FittedOrdinalModel& model,
             const PcaTransform& pca);

/// 2.5th and 97.5th percentiles of phi over `draws` parameter draws
/// (sample_parameters with the given seed). Deterministic per seed.
std::pair<double, double> score_interval(const FeatureVector& x,
                                         const FittedOrdinalModel& model, int draws,
                                         std::uint64_t seed);

/// Argmax of the implied class probabilities; exact ties resolve to the
/// lower class.
QualityClass predict_class(const FeatureVector& x, const FittedOrdinalModel& model);

/// Most probable quality class: argmax component, ties to the lower class.
QualityClass mpqc(const ProbabilityVector& probs);

/// Baseline weighted sum with handpicked coefficients 0..5; range [0, 5].
double evenly_spaced(const ProbabilityVector& probs);

/// Normalization anchored on the pooled scores and thresholds.
/// Throws DegenerateRange when the pooled range is empty.
NormalizationMap make_normalization(std::span<const double> phis,
                                    const Vector5& thresholds);

/// Linear-interpolation quantile (R type 7) of unsorted values; p in [0, 1].
double quantile(std::vector<double> values, double p);

/// Everything the score report needs for one dataset against one model:
/// records in input order, the normalization map, and the thresholds with
/// their draw-based 95% intervals.
struct ScoringResult {
  std::vector<ScoreRecord> records;
  NormalizationMap normalization;
  Vector5 thresholds_norm = Vector5::Zero();
  std::array<std::pair<double, double>, 5> threshold_intervals{};
};

/// Scores every instance. Parameter draws are generated once and shared by
/// all interval computations, so the result is deterministic per seed and
/// batch size does not change any instance's interval distribution.
ScoringResult score_dataset(const Dataset& dataset, const FittedOrdinalModel& model,
                            const PcaTransform& pca, int draws, std::uint64_t seed);

}  // namespace ordqual
