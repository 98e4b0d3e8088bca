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

#include <cstdint>
#include <vector>

#include "ordqual/ordinal.hpp"
#include "ordqual/pca.hpp"
#include "ordqual/types.hpp"

namespace ordqual {

/// Ground-truth generator for the cumulative-logit model: latent features are
/// standard normal, labels follow the model at (alpha, beta), and the emitted
/// probability vector is a Dirichlet(kappa * class probabilities) draw, i.e.
/// a noisy classifier output centered on the truth.
struct GeneratorSpec {
  Vector5 alpha;        ///< true thresholds, strictly increasing
  Vector5 beta;         ///< true coefficients
  double kappa = 50.0;  ///< Dirichlet concentration; larger means less noise
  int n = 1000;
  std::uint64_t seed = 0;
};

/// Per-instance ground truth emitted alongside the dataset.
struct SynthTruth {
  FeatureVector x;
  double phi = 0.0;
  std::array<double, kNumClasses> class_probs{};
};

struct SynthResult {
  Dataset dataset;
  std::vector<SynthTruth> truth;
};

/// Deterministic per seed; generated vectors always pass core validation.
SynthResult generate(const GeneratorSpec& spec);

}  // namespace ordqual
