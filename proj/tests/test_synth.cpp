#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ordqual/ordinal.hpp"
#include "ordqual/synth.hpp"

using namespace ordqual;

namespace {

GeneratorSpec base_spec() {
  GeneratorSpec spec;
  spec.alpha << -2.5, -1.2, 0.0, 1.2, 2.5;
  spec.beta << 1.8, 0.6, 0.4, 0.2, 0.1;
  spec.kappa = 50.0;
  spec.n = 500;
  spec.seed = 5;
  return spec;
}

}  // namespace

TEST_CASE("generation is deterministic per seed") {
  const auto a = generate(base_spec());
  const auto b = generate(base_spec());
  REQUIRE(a.dataset.size() == b.dataset.size());
  for (std::size_t i = 0; i < a.dataset.size(); ++i) {
    CHECK(a.dataset.instances[i].probs == b.dataset.instances[i].probs);
    CHECK(a.dataset.instances[i].label == b.dataset.instances[i].label);
    CHECK(a.truth[i].phi == b.truth[i].phi);
  }
  auto other_spec = base_spec();
  other_spec.seed = 6;
  const auto c = generate(other_spec);
  bool any_different = false;
  for (std::size_t i = 0; i < a.dataset.size() && !any_different; ++i) {
    any_different = !(a.dataset.instances[i].probs == c.dataset.instances[i].probs);
  }
  CHECK(any_different);
}

TEST_CASE("generated vectors pass core validation and carry weight 1") {
  const auto result = generate(base_spec());
  for (const auto& inst : result.dataset.instances) {
    double sum = 0.0;
    for (int k = 0; k < kNumClasses; ++k) {
      CHECK(inst.probs[k] >= 0.0);
      sum += inst.probs[k];
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(inst.weight == 1.0);
  }
}

TEST_CASE("huge concentration collapses the Dirichlet onto the truth") {
  auto spec = base_spec();
  spec.kappa = 1e9;
  spec.n = 200;
  const auto result = generate(spec);
  for (std::size_t i = 0; i < result.dataset.size(); ++i) {
    for (int k = 0; k < kNumClasses; ++k) {
      CHECK(std::abs(result.dataset.instances[i].probs[k] -
                     result.truth[i].class_probs[static_cast<std::size_t>(k)]) < 1e-3);
    }
  }
}

TEST_CASE("label frequencies follow the model at phi = 0") {
  auto spec = base_spec();
  spec.beta.setZero();  // phi = 0 for every instance
  spec.n = 100000;
  spec.seed = 77;
  const auto result = generate(spec);

  FittedOrdinalModel model;
  model.thresholds = spec.alpha;
  model.coefficients = spec.beta;
  const auto expected = class_probabilities(FeatureVector::Zero(), model);

  const auto counts = result.dataset.class_counts();
  for (int k = 0; k < kNumClasses; ++k) {
    const double freq = static_cast<double>(counts[static_cast<std::size_t>(k)]) /
                        static_cast<double>(spec.n);
    CHECK(std::abs(freq - expected[static_cast<std::size_t>(k)]) < 0.01);
  }
}

TEST_CASE("estimation error shrinks roughly as one over root n") {
  FitOptions options;
  options.penalty = PenaltyKind::None;
  const auto error_at = [&](int n, std::uint64_t seed) {
    auto spec = base_spec();
    spec.n = n;
    spec.seed = seed;
    const auto synth = generate(spec);
    std::vector<FeatureRow> rows;
    for (std::size_t i = 0; i < synth.truth.size(); ++i) {
      rows.push_back(
          FeatureRow{synth.truth[i].x, synth.dataset.instances[i].label, 1.0});
    }
    const auto model = fit_on_features(rows, options);
    double sq = 0.0;
    for (int k = 0; k < 5; ++k) {
      sq += std::pow(model.thresholds(k) - spec.alpha(k), 2);
      sq += std::pow(model.coefficients(k) - spec.beta(k), 2);
    }
    return std::sqrt(sq);
  };
  // Average over replications so the ratio reflects the rate, not one draw.
  double small_error = 0.0;
  double large_error = 0.0;
  for (std::uint64_t rep = 0; rep < 3; ++rep) {
    small_error += error_at(3000, 303 + rep);
    large_error += error_at(30000, 403 + rep);
  }
  const double ratio = small_error / large_error;
  // The n ratio of 10 predicts sqrt(10) ~ 3.16; allow a factor of 2.
  CHECK(ratio > std::sqrt(10.0) / 2.0);
  CHECK(ratio < std::sqrt(10.0) * 2.0);
}

TEST_CASE("invalid generator specs are rejected") {
  auto spec = base_spec();
  spec.alpha(2) = spec.alpha(1);
  CHECK_THROWS_AS(generate(spec), Error);

  spec = base_spec();
  spec.kappa = 0.0;
  CHECK_THROWS_AS(generate(spec), Error);

  spec = base_spec();
  spec.n = 0;
  CHECK_THROWS_AS(generate(spec), Error);
}
