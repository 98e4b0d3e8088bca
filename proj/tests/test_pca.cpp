#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ordqual/pca.hpp"
#include "ordqual/rng.hpp"
#include "ordqual/types.hpp"
#include "support/oracles.hpp"

using namespace ordqual;

namespace {

Dataset two_vertex_dataset() {
  Dataset d;
  d.instances.push_back(validate_instance({"a", {1, 0, 0, 0, 0, 0}, "Stub"}));
  d.instances.push_back(validate_instance({"b", {0, 1, 0, 0, 0, 0}, "Start"}));
  return d;
}

Dataset random_dataset(int n, std::uint64_t seed, bool random_weights = false) {
  Rng rng(seed);
  Dataset d;
  for (int i = 0; i < n; ++i) {
    const auto p = ordqual::testing::random_simplex_point(rng);
    auto inst = validate_instance(
        {std::to_string(i), p,
         std::string(to_string(quality_class_from_code(i % kNumClasses)))});
    if (random_weights) inst.weight = 0.25 + 4.0 * rng.uniform();
    d.instances.push_back(std::move(inst));
  }
  return d;
}

bool transforms_identical(const PcaTransform& a, const PcaTransform& b) {
  return std::memcmp(a.mean.data(), b.mean.data(), sizeof(double) * 6) == 0 &&
         std::memcmp(a.loadings.data(), b.loadings.data(), sizeof(double) * 30) == 0 &&
         std::memcmp(a.eigenvalues.data(), b.eigenvalues.data(), sizeof(double) * 5) == 0;
}

}  // namespace

TEST_CASE("two-vertex dataset: first component and eigenvalues by hand") {
  const auto t = fit_pca(two_vertex_dataset());
  CHECK(t.mean(0) == doctest::Approx(0.5));
  CHECK(t.mean(1) == doctest::Approx(0.5));
  CHECK(t.mean(2) == 0.0);

  // Deviations are (+-0.5, -+0.5, 0, ...): the principal direction is
  // (1,-1,0,0,0,0)/sqrt(2) and the variance along it is 0.5.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(t.loadings(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(t.loadings(0, 1) == doctest::Approx(-inv_sqrt2).epsilon(1e-12));
  for (int k = 2; k < 6; ++k) {
    CHECK(std::abs(t.loadings(0, k)) < 1e-12);
  }
  CHECK(t.eigenvalues(0) == doctest::Approx(0.5).epsilon(1e-12));
  for (int j = 1; j < 5; ++j) {
    CHECK(std::abs(t.eigenvalues(j)) < 1e-12);
  }
}

TEST_CASE("loading rows are orthonormal and orthogonal to the all-ones direction") {
  const auto d = random_dataset(400, 3, true);
  const auto t = fit_pca(d);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double dot = t.loadings.row(i).dot(t.loadings.row(j));
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
    CHECK(std::abs(t.loadings.row(i).sum()) < 1e-10);
  }
  for (int j = 1; j < 5; ++j) {
    CHECK(t.eigenvalues(j) <= t.eigenvalues(j - 1));
    CHECK(t.eigenvalues(j) >= 0.0);
  }
}

TEST_CASE("sign convention: each row's largest-magnitude entry is positive") {
  const auto t = fit_pca(random_dataset(200, 17));
  for (int i = 0; i < 5; ++i) {
    int max_idx = 0;
    for (int k = 1; k < 6; ++k) {
      if (std::abs(t.loadings(i, k)) > std::abs(t.loadings(i, max_idx))) max_idx = k;
    }
    CHECK(t.loadings(i, max_idx) > 0.0);
  }
}

TEST_CASE("transform of the weighted mean is zero") {
  const auto d = random_dataset(100, 5, true);
  const auto t = fit_pca(d);
  std::array<double, kNumClasses> mean{};
  for (int k = 0; k < kNumClasses; ++k) mean[static_cast<std::size_t>(k)] = t.mean(k);
  const auto x = transform(ProbabilityVector::from_components(mean), t);
  for (int j = 0; j < 5; ++j) CHECK(std::abs(x(j)) < 1e-14);
}

TEST_CASE("five components reconstruct any simplex point") {
  const auto t = fit_pca(two_vertex_dataset());  // degenerate fitting data
  Rng rng(23);
  for (int rep = 0; rep < 500; ++rep) {
    const auto p = ProbabilityVector::from_components(
        ordqual::testing::random_simplex_point(rng));
    const Vector6 rec = reconstruct(transform(p, t), t);
    for (int k = 0; k < 6; ++k) {
      CHECK(std::abs(rec(k) - p[k]) < 1e-8);
    }
  }
}

TEST_CASE("transform is affine on the simplex") {
  const auto t = fit_pca(random_dataset(50, 29));
  Rng rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const auto pa = ProbabilityVector::from_components(
        ordqual::testing::random_simplex_point(rng));
    const auto pb = ProbabilityVector::from_components(
        ordqual::testing::random_simplex_point(rng));
    const double lambda = rng.uniform();
    std::array<double, kNumClasses> mix{};
    for (int k = 0; k < kNumClasses; ++k) {
      mix[static_cast<std::size_t>(k)] = lambda * pa[k] + (1.0 - lambda) * pb[k];
    }
    const auto xm = transform(ProbabilityVector::from_components(mix), t);
    const FeatureVector expected =
        lambda * transform(pa, t) + (1.0 - lambda) * transform(pb, t);
    for (int j = 0; j < 5; ++j) {
      CHECK(std::abs(xm(j) - expected(j)) < 1e-12);
    }
  }
}

TEST_CASE("weighted variance of each feature equals its eigenvalue") {
  const auto d = random_dataset(300, 41, true);
  const auto t = fit_pca(d);
  double total = 0.0;
  Vector5 mean = Vector5::Zero();
  std::vector<FeatureVector> xs;
  for (const auto& inst : d.instances) {
    xs.push_back(transform(inst.probs, t));
    mean += inst.weight * xs.back();
    total += inst.weight;
  }
  mean /= total;
  Vector5 var = Vector5::Zero();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vector5 dev = xs[i] - mean;
    var += d.instances[i].weight * dev.cwiseProduct(dev);
  }
  var /= total;
  for (int j = 0; j < 5; ++j) {
    CHECK(std::abs(var(j) - t.eigenvalues(j)) < 1e-10);
  }
}

TEST_CASE("doubling every weight leaves the transform bit-identical") {
  auto d = random_dataset(150, 53, true);
  const auto base = fit_pca(d);
  for (auto& inst : d.instances) inst.weight *= 2.0;
  const auto doubled = fit_pca(d);
  CHECK(transforms_identical(base, doubled));
}

TEST_CASE("identical dataset gives a bit-identical transform") {
  const auto d = random_dataset(150, 67, true);
  CHECK(transforms_identical(fit_pca(d), fit_pca(d)));
}

TEST_CASE("unweighted mode ignores the analysis weights") {
  auto d = random_dataset(150, 71, true);
  const auto unweighted = fit_pca(d, PcaWeighting::Unweighted);
  for (auto& inst : d.instances) inst.weight = 1.0;
  const auto uniform = fit_pca(d);
  CHECK(transforms_identical(unweighted, uniform));
}

TEST_CASE("degenerate data is rejected") {
  Dataset d;
  for (int i = 0; i < 3; ++i) {
    d.instances.push_back(
        validate_instance({std::to_string(i), {0.5, 0.5, 0, 0, 0, 0}, "Stub"}));
  }
  try {
    fit_pca(d);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateData);
  }
  CHECK_THROWS_AS(fit_pca(Dataset{}), Error);
}
