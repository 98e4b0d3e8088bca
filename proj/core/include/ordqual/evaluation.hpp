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
#include <vector>

#include "ordqual/ordinal.hpp"
#include "ordqual/pca.hpp"
#include "ordqual/types.hpp"
#include "ordqual/weighting.hpp"

namespace ordqual {

struct AccuracyResult {
  double accuracy = 0.0;
  double off_by_one = 0.0;
};

/// Weighted accuracy and off-by-one accuracy (predictions within one level of
/// the true class). Throws LengthMismatch.
AccuracyResult weighted_accuracy(std::span<const QualityClass> truth,
                                 std::span<const QualityClass> predictions,
                                 std::span<const double> weights);

struct CalibrationCell {
  double diff = 0.0;  ///< weighted true class share minus mean predicted prob
  double se = 0.0;    ///< normal-approximation standard error of diff
};

/// Per-class calibration under the given weights. The six diffs sum to zero
/// because both the indicators and the predicted vectors sum to one.
std::array<CalibrationCell, kNumClasses> calibration_by_class(
    std::span<const QualityClass> truth,
    std::span<const std::array<double, kNumClasses>> predicted,
    std::span<const double> weights);

/// Sample Pearson correlation. Throws LengthMismatch for fewer than 2
/// elements and ConstantInput when either vector is constant.
double pearson_r(std::span<const double> a, std::span<const double> b);

/// Exact pair counts behind Kendall's tau-b. `num` is concordant minus
/// discordant; the other two are n0 - n1 and n0 - n2 in the usual tie
/// notation. Shared by the O(n log n) implementation and brute-force oracles
/// so both produce bit-identical tau.
double tau_b_from_counts(std::int64_t num, std::int64_t pairs_not_tied_a,
                         std::int64_t pairs_not_tied_b);

/// Tie-corrected Kendall tau-b by merge-sort pair counting, O(n log n).
/// Throws LengthMismatch and ConstantInput (tau undefined when one input is
/// constant).
double kendall_tau(std::span<const double> a, std::span<const double> b);

struct CorrelationEntry {
  double pearson = 1.0;
  double kendall = 1.0;
};

/// Symmetric matrix of correlations between named measures; the diagonal is
/// (1, 1) by definition.
struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<CorrelationEntry> entries;  // row-major size() x size()

  std::size_t size() const { return names.size(); }
  const CorrelationEntry& at(std::size_t i, std::size_t j) const {
    return entries[i * names.size() + j];
  }
};

struct NamedMeasure {
  std::string name;
  std::vector<double> values;
};

CorrelationMatrix correlation_matrix(std::span<const NamedMeasure> measures);

/// Accuracy and calibration of one model (and of the raw probability vectors)
/// on a dataset, under one evaluation weighting.
struct EvaluationReport {
  std::string unit;
  std::string model_name;
  AccuracyResult model_accuracy;
  AccuracyResult mpqc_accuracy;
  std::array<CalibrationCell, kNumClasses> model_calibration{};
  std::array<CalibrationCell, kNumClasses> raw_calibration{};
};

/// Applies the evaluation weights to the dataset, predicts with the model,
/// and assembles the report. The raw calibration row treats each instance's
/// input probability vector as its prediction.
EvaluationReport evaluate_model(const Dataset& dataset, const FittedOrdinalModel& model,
                                const PcaTransform& pca, const WeightTable& eval_weights,
                                const std::string& model_name);

}  // namespace ordqual
