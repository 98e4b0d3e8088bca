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
#include "ordqual/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordqual/scoring.hpp"

namespace ordqual {

AccuracyResult weighted_accuracy(std::span<const QualityClass> truth,
                                 std::span<const QualityClass> predictions,
                                 std::span<const double> weights) {
  if (truth.size() != predictions.size() || truth.size() != weights.size()) {
    raise(Errc::LengthMismatch, "truth, predictions, and weights differ in length");
  }
  if (truth.empty()) {
    raise(Errc::LengthMismatch, "empty inputs");
  }
  double weight_total = 0.0;
  double correct = 0.0;
  double within_one = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double w = weights[i];
    weight_total += w;
    const int gap = std::abs(code_of(predictions[i]) - code_of(truth[i]));
    if (gap == 0) correct += w;
    if (gap <= 1) within_one += w;
  }
  return AccuracyResult{correct / weight_total, within_one / weight_total};
}

std::array<CalibrationCell, kNumClasses> calibration_by_class(
    std::span<const QualityClass> truth,
    std::span<const std::array<double, kNumClasses>> predicted,
    std::span<const double> weights) {
  if (truth.size() != predicted.size() || truth.size() != weights.size()) {
    raise(Errc::LengthMismatch, "truth, predictions, and weights differ in length");
  }
  if (truth.empty()) {
    raise(Errc::LengthMismatch, "empty inputs");
  }
  const double weight_total = std::accumulate(weights.begin(), weights.end(), 0.0);

  std::array<CalibrationCell, kNumClasses> cells{};
  for (int k = 0; k < kNumClasses; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    double num = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const double term = (code_of(truth[i]) == k ? 1.0 : 0.0) - predicted[i][idx];
      num += weights[i] * term;
    }
    const double diff = num / weight_total;
    // Linearized variance of the ratio estimator.
    double var = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const double term = (code_of(truth[i]) == k ? 1.0 : 0.0) - predicted[i][idx];
      const double dev = weights[i] * (term - diff);
      var += dev * dev;
    }
    cells[idx] = CalibrationCell{diff, std::sqrt(var) / weight_total};
  }
  return cells;
}

namespace {

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

// Inversion count by b of pairs ordered by a, via bottom-up merge sort.
// Equal elements are not inversions.
std::int64_t count_inversions(std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> buffer(n);
  std::int64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t left = 0; left + width < n; left += 2 * width) {
      const std::size_t mid = left + width;
      const std::size_t right = std::min(left + 2 * width, n);
      std::size_t i = left;
      std::size_t j = mid;
      std::size_t out = left;
      while (i < mid && j < right) {
        if (values[j] < values[i]) {
          inversions += static_cast<std::int64_t>(mid - i);
          buffer[out++] = values[j++];
        } else {
          buffer[out++] = values[i++];
        }
      }
      while (i < mid) buffer[out++] = values[i++];
      while (j < right) buffer[out++] = values[j++];
      std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(left),
                buffer.begin() + static_cast<std::ptrdiff_t>(right),
                values.begin() + static_cast<std::ptrdiff_t>(left));
    }
  }
  return inversions;
}

template <typename Equal>
std::int64_t tied_pairs(const std::vector<std::pair<double, double>>& sorted,
                        Equal equal) {
  std::int64_t total = 0;
  std::size_t run_start = 0;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || !equal(sorted[i], sorted[run_start])) {
      const auto t = static_cast<std::int64_t>(i - run_start);
      total += t * (t - 1) / 2;
      run_start = i;
    }
  }
  return total;
}

}  // namespace

double pearson_r(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) raise(Errc::LengthMismatch, "input lengths differ");
  if (a.size() < 2) raise(Errc::LengthMismatch, "need at least 2 elements");
  if (is_constant(a) || is_constant(b)) {
    raise(Errc::ConstantInput, "correlation undefined for constant input");
  }
  const auto n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double saa = 0.0;
  double sbb = 0.0;
  double sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  const double r = sab / (std::sqrt(saa) * std::sqrt(sbb));
  return std::clamp(r, -1.0, 1.0);
}

double tau_b_from_counts(std::int64_t num, std::int64_t pairs_not_tied_a,
                         std::int64_t pairs_not_tied_b) {
  if (pairs_not_tied_a <= 0 || pairs_not_tied_b <= 0) {
    raise(Errc::ConstantInput, "tau undefined for constant input");
  }
  return static_cast<double>(num) / std::sqrt(static_cast<double>(pairs_not_tied_a) *
                                              static_cast<double>(pairs_not_tied_b));
}

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) raise(Errc::LengthMismatch, "input lengths differ");
  if (a.size() < 2) raise(Errc::LengthMismatch, "need at least 2 elements");

  // Knight's algorithm: sort by (a, b), count tie groups, then count
  // inversions by b among the sorted order.
  std::vector<std::pair<double, double>> pairs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) pairs[i] = {a[i], b[i]};
  std::sort(pairs.begin(), pairs.end());

  const auto n = static_cast<std::int64_t>(a.size());
  const std::int64_t n0 = n * (n - 1) / 2;
  const std::int64_t n1 =
      tied_pairs(pairs, [](const auto& x, const auto& y) { return x.first == y.first; });
  const std::int64_t n3 =
      tied_pairs(pairs, [](const auto& x, const auto& y) { return x == y; });

  std::vector<double> b_sorted_by_a(a.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) b_sorted_by_a[i] = pairs[i].second;
  const std::int64_t swaps = count_inversions(b_sorted_by_a);

  // b_sorted_by_a is now sorted by b.
  std::int64_t n2 = 0;
  {
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= b_sorted_by_a.size(); ++i) {
      if (i == b_sorted_by_a.size() || b_sorted_by_a[i] != b_sorted_by_a[run_start]) {
        const auto t = static_cast<std::int64_t>(i - run_start);
        n2 += t * (t - 1) / 2;
        run_start = i;
      }
    }
  }

  const std::int64_t num = n0 - n1 - n2 + n3 - 2 * swaps;
  return tau_b_from_counts(num, n0 - n1, n0 - n2);
}

CorrelationMatrix correlation_matrix(std::span<const NamedMeasure> measures) {
  for (const auto& m : measures) {
    if (m.values.size() != measures.front().values.size()) {
      raise(Errc::LengthMismatch, "measures differ in length");
    }
  }
  CorrelationMatrix matrix;
  matrix.names.reserve(measures.size());
  for (const auto& m : measures) matrix.names.push_back(m.name);
  matrix.entries.assign(measures.size() * measures.size(), CorrelationEntry{});
  for (std::size_t i = 0; i < measures.size(); ++i) {
    for (std::size_t j = i + 1; j < measures.size(); ++j) {
      const CorrelationEntry entry{pearson_r(measures[i].values, measures[j].values),
                                   kendall_tau(measures[i].values, measures[j].values)};
      matrix.entries[i * measures.size() + j] = entry;
      matrix.entries[j * measures.size() + i] = entry;
    }
  }
  return matrix;
}

EvaluationReport evaluate_model(const Dataset& dataset, const FittedOrdinalModel& model,
                                const PcaTransform& pca, const WeightTable& eval_weights,
                                const std::string& model_name) {
  const Dataset weighted = apply_weights(dataset, eval_weights);

  std::vector<QualityClass> truth;
  std::vector<QualityClass> model_pred;
  std::vector<QualityClass> mpqc_pred;
  std::vector<double> weights;
  std::vector<std::array<double, kNumClasses>> model_probs;
  std::vector<std::array<double, kNumClasses>> raw_probs;
  truth.reserve(weighted.size());
  for (const auto& inst : weighted.instances) {
    const FeatureVector x = transform(inst.probs, pca);
    truth.push_back(inst.label);
    weights.push_back(inst.weight);
    model_probs.push_back(class_probabilities(x, model));
    model_pred.push_back(argmax_class(model_probs.back()));
    raw_probs.push_back(inst.probs.components());
    mpqc_pred.push_back(mpqc(inst.probs));
  }

  EvaluationReport report;
  report.unit = eval_weights.unit;
  report.model_name = model_name;
  report.model_accuracy = weighted_accuracy(truth, model_pred, weights);
  report.mpqc_accuracy = weighted_accuracy(truth, mpqc_pred, weights);
  report.model_calibration = calibration_by_class(truth, model_probs, weights);
  report.raw_calibration = calibration_by_class(truth, raw_probs, weights);
  return report;
}

}  // namespace ordqual
