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
#include "ordqual/synth.hpp"

#include <string>

#include "ordqual/rng.hpp"

namespace ordqual {

SynthResult generate(const GeneratorSpec& spec) {
  for (int k = 1; k < 5; ++k) {
    if (!(spec.alpha(k) > spec.alpha(k - 1))) {
      raise(Errc::NonFiniteInput, "true thresholds must be strictly increasing");
    }
  }
  if (!(spec.kappa > 0.0)) {
    raise(Errc::NonFiniteInput, "kappa must be positive");
  }
  if (spec.n < 1) {
    raise(Errc::NonFiniteInput, "n must be at least 1");
  }

  FittedOrdinalModel truth_model;
  truth_model.thresholds = spec.alpha;
  truth_model.coefficients = spec.beta;

  Rng rng(spec.seed);
  SynthResult result;
  result.dataset.provenance = "synthetic cumulative-logit sample, seed " +
                              std::to_string(spec.seed);
  result.dataset.instances.reserve(static_cast<std::size_t>(spec.n));
  result.truth.reserve(static_cast<std::size_t>(spec.n));

  // Fixed per-instance draw order: 5 feature normals, 1 label uniform, then
  // 6 Dirichlet gammas. Rejection inside the gamma sampler keeps the stream
  // deterministic for a given seed.
  for (int i = 0; i < spec.n; ++i) {
    SynthTruth truth;
    for (int j = 0; j < 5; ++j) truth.x(j) = rng.normal();
    truth.phi = spec.beta.dot(truth.x);
    truth.class_probs = class_probabilities(truth.x, truth_model);

    const double u = rng.uniform();
    int label = kNumClasses - 1;
    double cum = 0.0;
    for (int k = 0; k < kNumClasses; ++k) {
      cum += truth.class_probs[static_cast<std::size_t>(k)];
      if (u <= cum) {
        label = k;
        break;
      }
    }

    std::array<double, kNumClasses> dirichlet{};
    double total = 0.0;
    for (int k = 0; k < kNumClasses; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      dirichlet[idx] = rng.gamma(spec.kappa * truth.class_probs[idx]);
      total += dirichlet[idx];
    }
    if (total <= 0.0) {
      // All gammas underflowed; fall back to the modal class.
      dirichlet[static_cast<std::size_t>(code_of(argmax_class(truth.class_probs)))] = 1.0;
      total = 1.0;
    }
    for (auto& v : dirichlet) v /= total;

    LabeledInstance inst;
    inst.id = "synth-" + std::to_string(i);
    inst.probs = ProbabilityVector::from_components(dirichlet);
    inst.label = quality_class_from_code(label);
    inst.weight = 1.0;
    result.dataset.instances.push_back(std::move(inst));
    result.truth.push_back(truth);
  }
  return result;
}

}  // namespace ordqual
