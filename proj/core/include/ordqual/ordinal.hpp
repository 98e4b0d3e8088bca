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
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ordqual/pca.hpp"
#include "ordqual/types.hpp"

namespace ordqual {

using Vector10 = Eigen::Matrix<double, 10, 1>;
using Matrix10 = Eigen::Matrix<double, 10, 10>;

/// Weighted cumulative-logit ordinal regression:
///   log Pr(y <= k) / Pr(y > k) = alpha_k - phi,   phi = B . x
///
/// Parameters are optimized in an unconstrained parametrization
/// (theta_1..theta_5, B_1..B_5) with alpha_1 = theta_1 and
/// alpha_k = alpha_{k-1} + exp(theta_k), which keeps the thresholds strictly
/// increasing by construction. The covariance is over (theta, B).
struct FittedOrdinalModel {
  Vector5 coefficients = Vector5::Zero();    ///< B
  Vector5 thresholds = Vector5::Zero();      ///< alpha, strictly increasing
  Matrix10 covariance = Matrix10::Zero();    ///< Laplace/sandwich, (theta, B)
  double loglik = 0.0;                       ///< weighted data log-likelihood
  double n_effective = 0.0;                  ///< (sum w)^2 / sum w^2
  bool converged = false;
  double grad_norm = std::numeric_limits<double>::quiet_NaN();
};

/// One observation ready for fitting.
struct FeatureRow {
  FeatureVector x;
  QualityClass label;
  double weight = 1.0;
};

enum class PenaltyKind {
  StudentT,  ///< independent t(nu=3, scale=2.5) neg-log-density on each coord
  None,
};

struct FitOptions {
  PenaltyKind penalty = PenaltyKind::StudentT;
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
};

/// Optimizer trace, mainly for tests: the objective after every accepted step.
struct FitDiagnostics {
  std::vector<double> objective_trace;
  int iterations = 0;
};

Vector5 alpha_from_theta(const Vector5& theta);

/// Inverse of alpha_from_theta; requires strictly increasing thresholds.
Vector5 theta_from_alpha(const Vector5& alpha);

/// Implied class probabilities at feature vector x. Evaluated with log-space
/// formulas so extreme linear predictors stay accurate; the six entries sum
/// to 1 within 1e-12. Throws NonFiniteInput.
std::array<double, kNumClasses> class_probabilities(const FeatureVector& x,
                                                    const FittedOrdinalModel& model);

struct NllResult {
  double value = 0.0;
  Vector10 gradient = Vector10::Zero();
  Matrix10 hessian = Matrix10::Zero();
};

/// Penalized weighted negative log-likelihood with exact analytic gradient
/// and Hessian at params = (theta, B). Throws NonFiniteLikelihood if the
/// value is not finite and DegenerateData for fewer than two represented
/// classes.
NllResult nll_weighted(std::span<const FeatureRow> rows, const Vector10& params,
                       PenaltyKind penalty);

/// Value and gradient of the Student-t penalty at params; used by tests to
/// separate the data term.
double penalty_value(const Vector10& params, PenaltyKind penalty);

/// Penalized maximum likelihood by damped Newton iterations with Armijo line
/// search, started from B = 0 and thresholds at the logits of the weighted
/// empirical cumulative class frequencies. Deterministic. Non-convergence
/// within max_iterations returns a model with converged = false.
/// Throws SeparationDetected if any coefficient exceeds 50 on the
/// feature-standardized scale.
FittedOrdinalModel fit_on_features(std::span<const FeatureRow> rows,
                                   const FitOptions& options = {},
                                   FitDiagnostics* diagnostics = nullptr);

/// Transforms each instance through the PCA and fits on the result with the
/// instances' analysis weights.
FittedOrdinalModel fit(const Dataset& dataset, const PcaTransform& pca,
                       const FitOptions& options = {},
                       FitDiagnostics* diagnostics = nullptr);

struct ParameterDraw {
  Vector5 thresholds;    ///< strictly increasing by construction
  Vector5 coefficients;
};

/// Draws from the Laplace-approximate posterior N((theta_hat, B_hat), cov),
/// mapped back to threshold space. Deterministic per seed.
/// Throws CovarianceNotPSD if the covariance has an eigenvalue below -1e-8.
std::vector<ParameterDraw> sample_parameters(const FittedOrdinalModel& model, int count,
                                             std::uint64_t seed);

}  // namespace ordqual
