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

#include <Eigen/Core>

#include "ordqual/types.hpp"

namespace ordqual {

using Vector5 = Eigen::Matrix<double, 5, 1>;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix5x6 = Eigen::Matrix<double, 5, 6>;

/// Feature vector fed to the ordinal regression: 5 reals.
using FeatureVector = Vector5;

/// Affine map from the probability simplex to 5 features. Because simplex
/// vectors sum to 1, five components represent them losslessly; the discarded
/// direction is the all-ones vector.
struct PcaTransform {
  Vector6 mean;            ///< weighted mean of the fitting data
  Matrix5x6 loadings;      ///< rows are orthonormal principal directions
  Vector5 eigenvalues;     ///< descending, clamped at 0
};

enum class PcaWeighting {
  AnalysisWeights,  ///< use each instance's analysis weight (default)
  Unweighted,       ///< ignore weights (sensitivity analysis)
};

/// Fits the transform on the dataset's probability vectors. The covariance is
/// Sum_i w_i (p_i - mean)(p_i - mean)^T / Sum_i w_i. The eigenproblem is
/// solved in a fixed orthonormal basis of the zero-sum subspace, so the five
/// loading rows always span the simplex directions exactly, and each row's
/// largest-magnitude entry is made positive. Deterministic for identical
/// input. Throws DegenerateData for fewer than 2 distinct vectors.
PcaTransform fit_pca(const Dataset& dataset,
                     PcaWeighting weighting = PcaWeighting::AnalysisWeights);

/// x = loadings * (p - mean).
FeatureVector transform(const ProbabilityVector& probs, const PcaTransform& t);

/// mean + loadings^T * x; exact on the simplex up to rounding.
Vector6 reconstruct(const FeatureVector& x, const PcaTransform& t);

}  // namespace ordqual
