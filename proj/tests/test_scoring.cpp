#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ordqual/evaluation.hpp"
#include "ordqual/ordinal.hpp"
#include "ordqual/pca.hpp"
#include "ordqual/scoring.hpp"
#include "ordqual/synth.hpp"
#include "support/oracles.hpp"

using namespace ordqual;

namespace {

struct Fitted {
  Dataset dataset;
  PcaTransform pca;
  FittedOrdinalModel model;
};

const Fitted& small_fit() {
  static const Fitted fitted = [] {
    GeneratorSpec spec;
    spec.alpha << -2.5, -1.2, 0.0, 1.2, 2.5;
    spec.beta << 1.8, 0.6, 0.4, 0.2, 0.1;
    spec.kappa = 50.0;
    spec.n = 3000;
    spec.seed = 401;
    Fitted f;
    f.dataset = generate(spec).dataset;
    f.pca = fit_pca(f.dataset);
    f.model = fit(f.dataset, f.pca);
    return f;
  }();
  return fitted;
}

FittedOrdinalModel uniform_model() {
  FittedOrdinalModel model;
  for (int k = 0; k < 5; ++k) {
    const double p = static_cast<double>(k + 1) / 6.0;
    model.thresholds(k) = std::log(p / (1.0 - p));
  }
  return model;
}

}  // namespace

TEST_CASE("zero coefficients score zero, and the PCA mean scores zero") {
  const auto& f = small_fit();
  FittedOrdinalModel zero = f.model;
  zero.coefficients.setZero();
  CHECK(score(f.dataset.instances[0].probs, zero, f.pca) == 0.0);

  std::array<double, kNumClasses> mean{};
  for (int k = 0; k < kNumClasses; ++k) mean[static_cast<std::size_t>(k)] = f.pca.mean(k);
  const double phi = score(ProbabilityVector::from_components(mean), f.model, f.pca);
  CHECK(std::abs(phi) < 1e-12);
}

TEST_CASE("scoring is invariant to renormalization noise below tolerance") {
  const auto& f = small_fit();
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    auto p = ordqual::testing::random_simplex_point(rng);
    auto jittered = p;
    const double jitter = 1.0 + 9e-7 * (rng.uniform() - 0.5);
    for (auto& v : jittered) v *= jitter;
    const double a = score(ProbabilityVector::from_components(p), f.model, f.pca);
    const double b = score(ProbabilityVector::from_components(jittered), f.model, f.pca);
    CHECK(std::abs(a - b) < 1e-9);
  }
}

TEST_CASE("zero covariance collapses the score interval to a point") {
  const auto& f = small_fit();
  FittedOrdinalModel point = f.model;
  point.covariance.setZero();
  FeatureVector x = transform(f.dataset.instances[0].probs, f.pca);
  const auto [lo, hi] = score_interval(x, point, 1000, 0);
  const double phi = point.coefficients.dot(x);
  CHECK(lo == phi);
  CHECK(hi == phi);
}

TEST_CASE("the interval contains the point estimate") {
  const auto& f = small_fit();
  int contained = 0;
  const int total = 100;
  for (int i = 0; i < total; ++i) {
    const FeatureVector x = transform(f.dataset.instances[static_cast<std::size_t>(i)].probs, f.pca);
    const auto [lo, hi] = score_interval(x, f.model, 1000, 17);
    const double phi = f.model.coefficients.dot(x);
    if (lo <= phi && phi <= hi) ++contained;
    CHECK(hi >= lo);
  }
  CHECK(contained >= 99);
}

TEST_CASE("scaling the covariance by 4 roughly doubles interval widths") {
  const auto& f = small_fit();
  FittedOrdinalModel wide = f.model;
  wide.covariance *= 4.0;
  double ratio_sum = 0.0;
  const int total = 60;
  for (int i = 0; i < total; ++i) {
    const FeatureVector x =
        transform(f.dataset.instances[static_cast<std::size_t>(i)].probs, f.pca);
    const auto [lo1, hi1] = score_interval(x, f.model, 4000, 23);
    const auto [lo2, hi2] = score_interval(x, wide, 4000, 23);
    ratio_sum += (hi2 - lo2) / (hi1 - lo1);
  }
  const double mean_ratio = ratio_sum / total;
  CHECK(mean_ratio > 1.8);
  CHECK(mean_ratio < 2.2);
}

TEST_CASE("predict_class at the extremes and between thresholds") {
  FittedOrdinalModel model;
  model.thresholds << -6.0, -2.0, 2.0, 6.0, 10.0;
  model.coefficients << 1.0, 0.0, 0.0, 0.0, 0.0;

  FeatureVector x = FeatureVector::Zero();
  x(0) = model.thresholds(0) - 50.0;
  CHECK(predict_class(x, model) == QualityClass::Stub);

  // phi at the midpoint of the second and third thresholds: C has the bulk
  // of the probability. Oracle by direct sigmoid arithmetic:
  // P(C) = sigmoid(2) - sigmoid(-2) = 0.7616, larger than any neighbor.
  x(0) = 0.5 * (model.thresholds(1) + model.thresholds(2));
  const auto probs = class_probabilities(x, model);
  CHECK(probs[2] == doctest::Approx(0.76159415595576485).epsilon(1e-12));
  CHECK(predict_class(x, model) == QualityClass::C);

  x(0) = model.thresholds(4) + 50.0;
  CHECK(predict_class(x, model) == QualityClass::FA);
}

TEST_CASE("uniform model probabilities are uniform and prediction is deterministic") {
  const auto model = uniform_model();
  const FeatureVector x = FeatureVector::Zero();
  const auto probs = class_probabilities(x, model);
  for (double p : probs) CHECK(std::abs(p - 1.0 / 6.0) < 1e-14);
  // Exact six-way floating-point ties are not realizable through the
  // transcendental evaluation; the tie rule itself is pinned on argmax_class.
  CHECK(predict_class(x, model) == argmax_class(probs));
  CHECK(argmax_class({1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6}) ==
        QualityClass::Stub);
}

TEST_CASE("predictions are monotone in phi") {
  const auto& f = small_fit();
  std::vector<double> phis;
  std::vector<int> codes;
  for (double t = -8.0; t <= 8.0; t += 0.05) {
    FeatureVector x = FeatureVector::Zero();
    // Move along the coefficient direction so phi sweeps the scale.
    const double norm2 = f.model.coefficients.squaredNorm();
    x = f.model.coefficients * (t / norm2);
    phis.push_back(f.model.coefficients.dot(x));
    codes.push_back(code_of(predict_class(x, f.model)));
  }
  for (std::size_t i = 1; i < codes.size(); ++i) {
    CHECK(phis[i] >= phis[i - 1]);
    CHECK(codes[i] >= codes[i - 1]);
  }
  CHECK(codes.front() == 0);
  CHECK(codes.back() == 5);
}

TEST_CASE("mpqc picks the largest component with ties to the lower class") {
  CHECK(mpqc(ProbabilityVector::from_components(
            {0.1, 0.3, 0.4, 0.075, 0.075, 0.05})) == QualityClass::C);
  CHECK(mpqc(ProbabilityVector::from_components({1, 0, 0, 0, 0, 0})) ==
        QualityClass::Stub);
  CHECK(mpqc(ProbabilityVector::from_components({0.5, 0.5, 0, 0, 0, 0})) ==
        QualityClass::Stub);
}

TEST_CASE("evenly spaced baseline") {
  const double u = 1.0 / 6.0;
  CHECK(evenly_spaced(ProbabilityVector::from_components({u, u, u, u, u, u})) ==
        doctest::Approx(2.5).epsilon(1e-15));
  CHECK(evenly_spaced(ProbabilityVector::from_components({0, 0, 0, 0, 0, 1})) == 5.0);
  // Hand-computed dot product with (0,1,2,3,4,5):
  // 0.3 + 0.8 + 0.225 + 0.3 + 0.25 = 1.875.
  CHECK(evenly_spaced(ProbabilityVector::from_components(
            {0.1, 0.3, 0.4, 0.075, 0.075, 0.05})) ==
        doctest::Approx(1.875).epsilon(1e-15));
}

TEST_CASE("normalization maps the pooled range onto the unit interval") {
  Vector5 thresholds;
  thresholds << 2.0, 4.0, 6.0, 8.0, 9.0;
  const std::vector<double> phis = {0.0, 10.0};
  const auto map = make_normalization(phis, thresholds);
  CHECK(map.apply(0.0) == 0.0);
  CHECK(map.apply(10.0) == 1.0);
  CHECK(map.apply(2.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(map.apply(4.0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(map.apply(9.0) == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("normalization preserves ranks and interval shares") {
  const auto& f = small_fit();
  const auto scoring = score_dataset(f.dataset, f.model, f.pca, 1000, 5);

  std::vector<double> raw;
  std::vector<double> normalized;
  for (const auto& rec : scoring.records) {
    raw.push_back(rec.phi);
    normalized.push_back(rec.phi_norm);
  }
  CHECK(kendall_tau(raw, normalized) == 1.0);

  // Class-interval widths keep their share of the pooled range.
  const double range = scoring.normalization.source_max - scoring.normalization.source_min;
  double norm_total = 0.0;
  for (int k = 1; k < 5; ++k) {
    const double raw_share = (f.model.thresholds(k) - f.model.thresholds(k - 1)) / range;
    const double norm_width = scoring.thresholds_norm(k) - scoring.thresholds_norm(k - 1);
    CHECK(norm_width == doctest::Approx(raw_share).epsilon(1e-10));
    norm_total += norm_width;
  }
  CHECK(norm_total < 1.0);
}

TEST_CASE("degenerate pooled range is rejected") {
  Vector5 flat;
  flat << 1.0, 1.0, 1.0, 1.0, 1.0;
  const std::vector<double> phis = {1.0, 1.0};
  try {
    make_normalization(phis, flat);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateRange);
  }
}

TEST_CASE("score_dataset keeps input order and its invariants") {
  const auto& f = small_fit();
  const auto scoring = score_dataset(f.dataset, f.model, f.pca, 1000, 11);
  REQUIRE(scoring.records.size() == f.dataset.size());
  for (std::size_t i = 0; i < scoring.records.size(); ++i) {
    const auto& rec = scoring.records[i];
    CHECK(rec.id == f.dataset.instances[i].id);
    CHECK(rec.ci_low <= rec.phi);
    CHECK(rec.phi <= rec.ci_high);
    CHECK(rec.phi_norm >= 0.0);
    CHECK(rec.phi_norm <= 1.0);
  }
  // Determinism per seed.
  const auto again = score_dataset(f.dataset, f.model, f.pca, 1000, 11);
  for (std::size_t i = 0; i < scoring.records.size(); ++i) {
    CHECK(scoring.records[i].ci_low == again.records[i].ci_low);
    CHECK(scoring.records[i].ci_high == again.records[i].ci_high);
  }
}

TEST_CASE("baselines depend only on the probability vector") {
  const auto& f = small_fit();
  const auto& inst = f.dataset.instances.front();
  FittedOrdinalModel other = f.model;
  other.coefficients *= -3.0;
  CHECK(mpqc(inst.probs) == mpqc(inst.probs));
  CHECK(evenly_spaced(inst.probs) == evenly_spaced(inst.probs));
  // No model argument exists for either; nothing further to vary.
  (void)other;
}
