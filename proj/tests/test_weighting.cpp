#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ordqual/types.hpp"
#include "ordqual/weighting.hpp"

using namespace ordqual;

namespace {

const std::array<std::int64_t, kNumClasses> kSample = {4969, 4979, 4988,
                                                       4990, 4999, 4995};

Dataset dataset_with_counts(const std::array<std::int64_t, kNumClasses>& counts) {
  Dataset d;
  int id = 0;
  for (int k = 0; k < kNumClasses; ++k) {
    std::array<double, kNumClasses> p{};
    p[static_cast<std::size_t>(k)] = 1.0;
    for (std::int64_t i = 0; i < counts[static_cast<std::size_t>(k)]; ++i) {
      d.instances.push_back(validate_instance(
          {std::to_string(id++), p,
           std::string(to_string(quality_class_from_code(k)))}));
    }
  }
  return d;
}

}  // namespace

TEST_CASE("published article weights reproduce within 0.005") {
  const auto table = compute_weights(kSample, article_population());
  const std::array<double, kNumClasses> published = {4.23, 1.28, 0.30,
                                                     0.16, 0.04, 0.01};
  for (int k = 0; k < kNumClasses; ++k) {
    CHECK(std::abs(table.weights[static_cast<std::size_t>(k)] -
                   published[static_cast<std::size_t>(k)]) < 0.005);
  }
  CHECK(table.unit == "article");
}

TEST_CASE("published revision weights reproduce within 0.005") {
  const auto table = compute_weights(kSample, revision_population());
  const std::array<double, kNumClasses> published = {2.52, 1.64, 0.81,
                                                     0.76, 0.19, 0.08};
  for (int k = 0; k < kNumClasses; ++k) {
    CHECK(std::abs(table.weights[static_cast<std::size_t>(k)] -
                   published[static_cast<std::size_t>(k)]) < 0.005);
  }
}

TEST_CASE("population proportional to the sample gives weight exactly 1") {
  PopulationCounts pop;
  pop.unit = "custom";
  for (int k = 0; k < kNumClasses; ++k) {
    pop.counts[static_cast<std::size_t>(k)] = 3 * kSample[static_cast<std::size_t>(k)];
  }
  const auto table = compute_weights(kSample, pop);
  for (double w : table.weights) CHECK(w == 1.0);
}

TEST_CASE("weights are invariant under scaling the population counts") {
  const auto base = compute_weights(kSample, article_population());
  PopulationCounts scaled = article_population();
  for (auto& c : scaled.counts) c *= 7;
  const auto table = compute_weights(kSample, scaled);
  for (int k = 0; k < kNumClasses; ++k) {
    CHECK(table.weights[static_cast<std::size_t>(k)] ==
          base.weights[static_cast<std::size_t>(k)]);
  }
}

TEST_CASE("uniform population and balanced sample give equal weights") {
  const std::array<std::int64_t, kNumClasses> balanced = {500, 500, 500,
                                                          500, 500, 500};
  const auto table = compute_weights(balanced, quality_class_population());
  for (double w : table.weights) CHECK(w == 1.0);
}

TEST_CASE("zero sample count for a populated class is an error") {
  std::array<std::int64_t, kNumClasses> sample = kSample;
  sample[5] = 0;
  CHECK_THROWS_AS(compute_weights(sample, article_population()), Error);
  try {
    compute_weights(sample, article_population());
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroSampleClass);
  }
}

TEST_CASE("zero population count: strict errors, permissive weights zero") {
  PopulationCounts pop = article_population();
  pop.counts[5] = 0;
  try {
    compute_weights(kSample, pop);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ZeroPopulationClass);
  }
  const auto table = compute_weights(kSample, pop, ZeroPopulationPolicy::Permissive);
  CHECK(table.weights[5] == 0.0);
  CHECK(table.weights[0] > 0.0);
}

TEST_CASE("apply_weights sets each instance weight from its class") {
  Dataset stubs = dataset_with_counts({3, 0, 0, 0, 0, 0});
  WeightTable table{{4.23, 1.0, 1.0, 1.0, 1.0, 1.0}, "article"};
  const Dataset weighted = apply_weights(stubs, table);
  for (const auto& inst : weighted.instances) CHECK(inst.weight == 4.23);

  WeightTable identity{{1, 1, 1, 1, 1, 1}, "class"};
  const Dataset unchanged = apply_weights(stubs, identity);
  for (std::size_t i = 0; i < stubs.instances.size(); ++i) {
    CHECK(unchanged.instances[i].weight == 1.0);
    CHECK(unchanged.instances[i].id == stubs.instances[i].id);
  }
}

TEST_CASE("apply_weights preserves instance order") {
  Dataset d = dataset_with_counts({2, 2, 1, 1, 1, 1});
  const auto table = compute_weights({2, 2, 1, 1, 1, 1}, article_population());
  const Dataset weighted = apply_weights(d, table);
  REQUIRE(weighted.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(weighted.instances[i].id == d.instances[i].id);
  }
}

TEST_CASE("a label with zero table weight is uncovered") {
  Dataset d = dataset_with_counts({1, 0, 0, 0, 0, 1});
  WeightTable table{{1, 1, 1, 1, 1, 0}, "partial"};
  try {
    apply_weights(d, table);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UncoveredLabel);
  }
}

TEST_CASE("weighted class proportions match the population proportions") {
  // Table 1 article weights applied to a dataset shaped like the sample.
  const std::array<std::int64_t, kNumClasses> sample = {49, 49, 49, 49, 49, 49};
  const auto table = compute_weights(sample, article_population());
  const Dataset weighted = apply_weights(dataset_with_counts(sample), table);

  double total = 0.0;
  std::array<double, kNumClasses> by_class{};
  for (const auto& inst : weighted.instances) {
    total += inst.weight;
    by_class[static_cast<std::size_t>(code_of(inst.label))] += inst.weight;
  }
  const auto pop = article_population();
  double pop_total = 0.0;
  for (auto c : pop.counts) pop_total += static_cast<double>(c);
  for (int k = 0; k < kNumClasses; ++k) {
    const double share = by_class[static_cast<std::size_t>(k)] / total;
    const double expected =
        static_cast<double>(pop.counts[static_cast<std::size_t>(k)]) / pop_total;
    CHECK(std::abs(share - expected) < 1e-12);
  }
}

TEST_CASE("calibration identity is exact on dyadic counts") {
  // Powers of two keep every quotient exact in binary floating point.
  const std::array<std::int64_t, kNumClasses> sample = {1, 1, 2, 4, 8, 16};
  PopulationCounts pop{{4, 4, 8, 8, 16, 24}, "dyadic"};
  const auto table = compute_weights(sample, pop);
  const Dataset weighted = apply_weights(dataset_with_counts(sample), table);

  double total = 0.0;
  std::array<double, kNumClasses> by_class{};
  for (const auto& inst : weighted.instances) {
    total += inst.weight;
    by_class[static_cast<std::size_t>(code_of(inst.label))] += inst.weight;
  }
  for (int k = 0; k < kNumClasses; ++k) {
    const double share = by_class[static_cast<std::size_t>(k)] / total;
    const double expected = static_cast<double>(pop.counts[static_cast<std::size_t>(k)]) / 64.0;
    CHECK(share == expected);
  }
}
