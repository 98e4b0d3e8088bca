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
#include "ordqual/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace ordqual {

namespace {

double phi_of_draw(const ParameterDraw& draw, const FeatureVector& x) {
  return draw.coefficients.dot(x);
}

double sorted_quantile(const std::vector<double>& sorted, double p) {
  const auto n = sorted.size();
  if (n == 1) return sorted.front();
  const double h = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::pair<double, double> interval_from_values(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return {sorted_quantile(values, 0.025), sorted_quantile(values, 0.975)};
}

}  // namespace

double quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return sorted_quantile(values, p);
}

double score(const ProbabilityVector& probs, const FittedOrdinalModel& model,
             const PcaTransform& pca) {
  const FeatureVector x = transform(probs, pca);
  if (!x.allFinite() || !model.coefficients.allFinite()) {
    raise(Errc::NonFiniteInput, "non-finite score inputs");
  }
  return model.coefficients.dot(x);
}

std::pair<double, double> score_interval(const FeatureVector& x,
                                         const FittedOrdinalModel& model, int draws,
                                         std::uint64_t seed) {
  const auto params = sample_parameters(model, draws, seed);
  std::vector<double> phis;
  phis.reserve(params.size());
  for (const auto& draw : params) phis.push_back(phi_of_draw(draw, x));
  auto [lo, hi] = interval_from_values(std::move(phis));
  // The record contract is ci_low <= phi <= ci_high; percentile estimates can
  // miss the point estimate by rounding, so pin them to it.
  const double phi = model.coefficients.dot(x);
  return {std::min(lo, phi), std::max(hi, phi)};
}

QualityClass predict_class(const FeatureVector& x, const FittedOrdinalModel& model) {
  return argmax_class(class_probabilities(x, model));
}

QualityClass mpqc(const ProbabilityVector& probs) {
  return argmax_class(probs.components());
}

double evenly_spaced(const ProbabilityVector& probs) {
  double sum = 0.0;
  for (int k = 0; k < kNumClasses; ++k) sum += static_cast<double>(k) * probs[k];
  return sum;
}

NormalizationMap make_normalization(std::span<const double> phis,
                                    const Vector5& thresholds) {
  double lo = thresholds.minCoeff();
  double hi = thresholds.maxCoeff();
  for (double phi : phis) {
    lo = std::min(lo, phi);
    hi = std::max(hi, phi);
  }
  if (!(hi > lo)) {
    raise(Errc::DegenerateRange, "pooled scores and thresholds have no spread");
  }
  return NormalizationMap{lo, hi};
}

ScoringResult score_dataset(const Dataset& dataset, const FittedOrdinalModel& model,
                            const PcaTransform& pca, int draws, std::uint64_t seed) {
  const auto params = sample_parameters(model, draws, seed);

  ScoringResult result;
  result.records.reserve(dataset.size());
  std::vector<double> phis;
  phis.reserve(dataset.size());

  std::vector<double> draw_phis(params.size());
  for (const auto& inst : dataset.instances) {
    const FeatureVector x = transform(inst.probs, pca);
    ScoreRecord rec;
    rec.id = inst.id;
    rec.phi = model.coefficients.dot(x);
    for (std::size_t d = 0; d < params.size(); ++d) {
      draw_phis[d] = phi_of_draw(params[d], x);
    }
    auto [lo, hi] = interval_from_values(draw_phis);
    rec.ci_low = std::min(lo, rec.phi);
    rec.ci_high = std::max(hi, rec.phi);
    rec.predicted_class = predict_class(x, model);
    rec.mpqc = mpqc(inst.probs);
    rec.evenly_spaced = evenly_spaced(inst.probs);
    phis.push_back(rec.phi);
    result.records.push_back(std::move(rec));
  }

  result.normalization = make_normalization(phis, model.thresholds);
  for (auto& rec : result.records) {
    rec.phi_norm = result.normalization.apply(rec.phi);
    rec.ci_norm_low = result.normalization.apply(rec.ci_low);
    rec.ci_norm_high = result.normalization.apply(rec.ci_high);
  }
  for (int k = 0; k < 5; ++k) {
    result.thresholds_norm(k) = result.normalization.apply(model.thresholds(k));
  }

  std::vector<double> alpha_draws(params.size());
  for (int k = 0; k < 5; ++k) {
    for (std::size_t d = 0; d < params.size(); ++d) {
      alpha_draws[d] = params[d].thresholds(k);
    }
    result.threshold_intervals[static_cast<std::size_t>(k)] =
        interval_from_values(alpha_draws);
  }
  return result;
}

}  // namespace ordqual
