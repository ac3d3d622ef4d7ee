#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rtf/baseline.hpp"
#include "rtf/metrics.hpp"

using namespace rtf;

namespace {

const Cdf<double> kExample = Cdf<double>::from_bounds({0, 0.125, 0.25, 0.5, 1});

template <class Fn>
std::uint32_t loads_of(Fn&& fn) {
  LoadCounter counter;
  fn(&counter);
  return counter.count();
}

}  // namespace

TEST(Linear, Examples) {
  EXPECT_EQ(sample_linear(kExample, 0.5), 3u);
  EXPECT_EQ(sample_linear(kExample, 0.0), 0u);
  EXPECT_EQ(sample_linear(Cdf<double>::from_bounds({0, 1}), 0.999), 0u);
}

TEST(Binary, Examples) {
  EXPECT_EQ(sample_binary(kExample, 0.5), 3u);
  EXPECT_EQ(sample_binary(Cdf<double>::from_bounds({0, 0.25, 1}), 0.1), 0u);
}

TEST(GuideTable, Examples) {
  EXPECT_EQ(build_guide_table(kExample, 4).first, (std::vector<std::uint32_t>{0, 2, 3, 3}));
  EXPECT_EQ(build_guide_table(kExample, 1).first, (std::vector<std::uint32_t>{0}));
  EXPECT_EQ(build_guide_table(Cdf<double>::from_bounds({0, 1}), 8).first, std::vector<std::uint32_t>(8, 0));
  EXPECT_THROW(build_guide_table(kExample, 0), Error);
}

TEST(GuideTable, FirstEntriesOverlapTheirCell) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::uint32_t>(1 + rng() % 200);
    const auto m = static_cast<std::uint32_t>(1 + rng() % (4 * n));
    const auto strict = build_strict_cdf(Pmf(oracle::random_weights(rng, n)));
    const auto gt = build_guide_table(strict.cdf, m);
    for (std::uint32_t g = 0; g < m; ++g) {
      ASSERT_EQ(gt.first[g], oracle::first_of_cell(strict.cdf.bounds(), g, m));
      if (g > 0) ASSERT_LE(gt.first[g - 1], gt.first[g]);
    }
  }
}

TEST(Cutpoint, Examples) {
  const auto gt = build_guide_table(kExample, 4);
  EXPECT_EQ(sample_cutpoint_linear(gt, kExample, 0.8), 3u);
  EXPECT_EQ(loads_of([&](LoadCounter* c) { sample_cutpoint_linear(gt, kExample, 0.8, c); }), 2u);
  EXPECT_EQ(sample_cutpoint_linear(gt, kExample, 0.3), 2u);
  EXPECT_EQ(sample_cutpoint_binary(gt, kExample, 0.15), 1u);
  // Cell 3 is covered by interval 3 alone: the bracket is degenerate.
  EXPECT_EQ(loads_of([&](LoadCounter* c) { sample_cutpoint_binary(gt, kExample, 0.9, c); }), 1u);
}

TEST(Cutpoint, UniformNeedsAtMostOneProbe) {
  const auto cdf = build_cdf(Pmf(std::vector<double>(64, 1.0)));
  const auto gt = build_guide_table(cdf, 64);
  for (int k = 0; k < 6400; ++k) {
    const double xi = k / 6400.0;
    EXPECT_LE(loads_of([&](LoadCounter* c) { sample_cutpoint_linear(gt, cdf, xi, c); }), 2u);
  }
}

TEST(Samplers, AgreeWithLinearSearch) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::uint32_t>(1 + rng() % 256);
    const auto m = static_cast<std::uint32_t>(1 + rng() % (4 * n));
    const auto cdf = build_cdf(Pmf(oracle::random_weights(rng, n)));
    const auto gt = build_guide_table(cdf, m);
    const std::uint32_t bits = std::bit_width(n);
    for (int k = 0; k < 10000; ++k) {
      const double xi = u(rng);
      const auto expected = oracle::locate(cdf.bounds(), xi);
      ASSERT_EQ(sample_linear(cdf, xi), expected);
      LoadCounter probes;
      ASSERT_EQ(sample_binary(cdf, xi, &probes), expected);
      ASSERT_LE(probes.count(), bits + 1);
      ASSERT_EQ(sample_cutpoint_linear(gt, cdf, xi), expected);
      ASSERT_EQ(sample_cutpoint_binary(gt, cdf, xi), expected);
    }
  }
}

TEST(Samplers, MonotoneOnSortedGrid) {
  const auto cdf = build_cdf(Pmf({3, 1, 4, 1, 5, 9, 2, 6}));
  const auto gt = build_guide_table(cdf, 5);
  std::vector<double> grid(20000);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = static_cast<double>(k) / grid.size();
  EXPECT_EQ(monotonicity_violations([&](double x) { return sample_binary(cdf, x); }, grid), 0u);
  EXPECT_EQ(monotonicity_violations([&](double x) { return sample_cutpoint_linear(gt, cdf, x); }, grid), 0u);
  EXPECT_EQ(monotonicity_violations([&](double x) { return sample_cutpoint_binary(gt, cdf, x); }, grid), 0u);
}

TEST(Alias, WorklistExamples) {
  const auto t = build_alias_table(Pmf({1, 1, 2, 4}));
  ASSERT_EQ(t.size(), 4u);
  const double q[] = {0.5, 0.5, 1, 1};
  const std::uint32_t alias[] = {3, 3, 2, 3};
  for (int j = 0; j < 4; ++j) {
    EXPECT_DOUBLE_EQ(t.cells[j].threshold, q[j]) << j;
    EXPECT_EQ(t.cells[j].alias, alias[j]) << j;
  }
  const auto t2 = build_alias_table(Pmf({3, 1}));
  EXPECT_EQ(t2.cells[0].threshold, 1.0);
  EXPECT_EQ(t2.cells[0].alias, 0u);
  EXPECT_EQ(t2.cells[1].threshold, 0.5);
  EXPECT_EQ(t2.cells[1].alias, 0u);

  const auto uniform = build_alias_table(Pmf(std::vector<double>(9, 2.0)));
  for (std::uint32_t j = 0; j < 9; ++j) {
    EXPECT_EQ(uniform.cells[j].threshold, 1.0);
    EXPECT_EQ(uniform.cells[j].alias, j);
  }
}

TEST(Alias, Sampling) {
  const auto t = build_alias_table(Pmf({1, 1, 2, 4}));
  EXPECT_EQ(sample_alias(t, 0.1), 0u);
  EXPECT_EQ(sample_alias(t, 0.2), 3u);
  EXPECT_EQ(loads_of([&](LoadCounter* c) { sample_alias(t, 0.2, c); }), 1u);
  std::vector<double> grid(10000);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = static_cast<double>(k) / grid.size();
  EXPECT_GT(monotonicity_violations([&](double x) { return sample_alias(t, x); }, grid), 0u);
  EXPECT_EQ(build_alias_table(Pmf({5})).cells[0].threshold, 1.0);
}

TEST(Alias, MeasureMatchesWeights) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const Pmf pmf(oracle::random_weights(rng, 1 + rng() % 500));
    const auto table = build_alias_table(pmf);
    const auto mass = oracle::alias_mass(table);
    const auto lib = alias_measure(table);
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      ASSERT_NEAR(static_cast<double>(mass[i]), pmf.probability(i), 1e-12);
      ASSERT_NEAR(lib[i], static_cast<double>(mass[i]), 1e-15);
      ASSERT_GE(table.cells[i].threshold, 0.0);
      ASSERT_LE(table.cells[i].threshold, 1.0);
      ASSERT_LT(table.cells[i].alias, pmf.size());
    }
  }
}

TEST(Cutpoint, ExpectedProbesWithinDevroyeBound) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cdf = build_cdf(Pmf(oracle::random_weights(rng, 256)));
    const auto expected = oracle::cutpoint_linear_expected_probes(cdf.bounds(), 64);
    EXPECT_LE(expected, 1 + 256.0L / 64);
  }
}
