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
#include "ordqual/pca.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace ordqual {

namespace {

// Fixed orthonormal basis of {v in R^6 : sum(v) = 0} (Helmert style).
// Column j has j ones followed by -j, scaled to unit norm.
Eigen::Matrix<double, 6, 5> zero_sum_basis() {
  Eigen::Matrix<double, 6, 5> basis = Eigen::Matrix<double, 6, 5>::Zero();
  for (int j = 1; j <= 5; ++j) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
    for (int i = 0; i < j; ++i) basis(i, j - 1) = scale;
    basis(j, j - 1) = -static_cast<double>(j) * scale;
  }
  return basis;
}

Vector6 to_vector(const ProbabilityVector& p) {
  Vector6 v;
  for (int k = 0; k < kNumClasses; ++k) v(k) = p[k];
  return v;
}

}  // namespace

PcaTransform fit_pca(const Dataset& dataset, PcaWeighting weighting) {
  if (dataset.empty()) {
    raise(Errc::DegenerateData, "empty dataset");
  }
  bool found_distinct = false;
  for (const auto& inst : dataset.instances) {
    if (inst.probs.components() != dataset.instances.front().probs.components()) {
      found_distinct = true;
      break;
    }
  }
  if (!found_distinct) {
    raise(Errc::DegenerateData, "fewer than 2 distinct probability vectors");
  }

  double weight_total = 0.0;
  Vector6 mean = Vector6::Zero();
  for (const auto& inst : dataset.instances) {
    const double w = weighting == PcaWeighting::AnalysisWeights ? inst.weight : 1.0;
    weight_total += w;
    mean += w * to_vector(inst.probs);
  }
  mean /= weight_total;

  Eigen::Matrix<double, 6, 6> cov = Eigen::Matrix<double, 6, 6>::Zero();
  for (const auto& inst : dataset.instances) {
    const double w = weighting == PcaWeighting::AnalysisWeights ? inst.weight : 1.0;
    const Vector6 d = to_vector(inst.probs) - mean;
    cov += w * (d * d.transpose());
  }
  cov /= weight_total;

  // Reduce to the zero-sum subspace; deviations of simplex points live there,
  // so this discards exactly the all-ones direction.
  const Eigen::Matrix<double, 6, 5> basis = zero_sum_basis();
  const Eigen::Matrix<double, 5, 5> reduced = basis.transpose() * cov * basis;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> solver(reduced);
  if (solver.info() != Eigen::Success) {
    raise(Errc::DegenerateData, "eigendecomposition failed");
  }

  PcaTransform t;
  t.mean = mean;
  // Eigen sorts ascending; emit descending.
  for (int j = 0; j < 5; ++j) {
    const int src = 4 - j;
    t.eigenvalues(j) = std::max(solver.eigenvalues()(src), 0.0);
    Vector6 direction = basis * solver.eigenvectors().col(src);
    int max_idx = 0;
    for (int k = 1; k < kNumClasses; ++k) {
      if (std::abs(direction(k)) > std::abs(direction(max_idx))) max_idx = k;
    }
    if (direction(max_idx) < 0.0) direction = -direction;
    t.loadings.row(j) = direction.transpose();
  }
  return t;
}

FeatureVector transform(const ProbabilityVector& probs, const PcaTransform& t) {
  return t.loadings * (to_vector(probs) - t.mean);
}

Vector6 reconstruct(const FeatureVector& x, const PcaTransform& t) {
  return t.mean + t.loadings.transpose() * x;
}

}  // namespace ordqual
