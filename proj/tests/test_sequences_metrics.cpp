#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rtf/baseline.hpp"
#include "rtf/metrics.hpp"
#include "rtf/sequences.hpp"

using namespace rtf;

TEST(RadicalInverse, FirstTerms) {
  const double expected[] = {0, 0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875};
  for (std::uint64_t i = 0; i < 8; ++i) EXPECT_EQ(radical_inverse_base2(i), expected[i]) << i;
  EXPECT_LT(radical_inverse_base2(~0ull), 1.0);
}

TEST(RadicalInverse, DyadicPrefixIsAPermutation) {
  for (int bits = 1; bits <= 12; ++bits) {
    const std::uint64_t count = 1ull << bits;
    std::vector<std::uint64_t> slots;
    for (std::uint64_t i = 0; i < count; ++i) slots.push_back(static_cast<std::uint64_t>(radical_inverse_base2(i) * count));
    std::sort(slots.begin(), slots.end());
    for (std::uint64_t i = 0; i < count; ++i) ASSERT_EQ(slots[i], i);
  }
}

TEST(Hammersley, Points) {
  const Point2 p = hammersley(3, 8);
  EXPECT_EQ(p.x, 0.375);
  EXPECT_EQ(p.y, 0.75);
  EXPECT_THROW(hammersley(8, 8), Error);
}

TEST(SplitMix64, KnownOutputs) {
  // Reference values of the published SplitMix64 for seed 0.
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next_u64(), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(rng.next_u64(), 0x6E789E6AA1B965F4ull);
  EXPECT_EQ(rng.next_u64(), 0x06C45D188009454Full);
}

TEST(SplitMix64, AdvancedSkipsAhead) {
  SplitMix64 a(42);
  for (int k = 0; k < 1000; ++k) a.next_u64();
  SplitMix64 b = SplitMix64(42).advanced(1000);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a.next_u64(), b.next_u64());
  SplitMix64 c(7);
  for (int k = 0; k < 10000; ++k) {
    const double x = c.next_double();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
}

TEST(PointStream, FiniteAndReproducible) {
  PointStream h = PointStream::hammersley(4);
  int count = 0;
  while (const auto p = h.next()) {
    EXPECT_EQ(p->x, count / 4.0);
    ++count;
  }
  EXPECT_EQ(count, 4);
  EXPECT_EQ(h.cursor(), 4u);

  PointStream a = PointStream::prng(9, 100);
  PointStream b = PointStream::prng(9, 100);
  while (const auto p = a.next()) {
    const auto q = b.next();
    ASSERT_TRUE(q);
    EXPECT_EQ(p->x, q->x);
    EXPECT_EQ(p->y, q->y);
  }
  EXPECT_FALSE(b.next());
}

TEST(Stats, Examples) {
  const LoadTrace flat(64, 3);
  const LoadStats s = stats(flat);
  EXPECT_EQ(s.max, 3u);
  EXPECT_EQ(s.average, 3.0);
  EXPECT_EQ(s.average_group, 3.0);

  LoadTrace group(32, 1);
  group[17] = 5;
  const LoadStats g = stats(group);
  EXPECT_EQ(g.average_group, 5.0);
  EXPECT_EQ(g.average, 36.0 / 32);
  EXPECT_EQ(g.max, 5u);
}

TEST(Stats, TrailingGroupDroppedAndErrors) {
  LoadTrace t(40, 1);
  t[35] = 9;
  EXPECT_EQ(stats(t).average_group, 1.0);
  EXPECT_EQ(stats(t).max, 9u);
  EXPECT_THROW(stats(LoadTrace{}), Error);
  EXPECT_THROW(stats(LoadTrace(31, 1)), Error);
  EXPECT_THROW(stats(t, 0), Error);
}

TEST(Stats, AverageBelowGroupAverageBelowMax) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    LoadTrace t(32 * (1 + rng() % 20));
    for (auto& x : t) x = static_cast<std::uint32_t>(rng() % 12);
    for (std::uint32_t group : {1u, 2u, 8u, 32u}) {
      const LoadStats s = stats(t, group);
      EXPECT_LE(s.average, s.average_group + 1e-12);
      EXPECT_LE(s.average_group, s.max);
    }
    EXPECT_EQ(stats(t, 1).average, stats(t, 1).average_group);
  }
}

TEST(QuadraticError, Examples) {
  Histogram exact(4);
  for (std::size_t i = 0; i < 4; ++i) exact.add(i);
  EXPECT_EQ(quadratic_error(Pmf({1, 1, 1, 1}), exact), 0.0);

  Histogram one(2);
  one.add(0);
  EXPECT_EQ(quadratic_error(Pmf({1, 1}), one), 0.5);

  EXPECT_THROW(quadratic_error(Pmf({1, 1, 1}), one), Error);
  EXPECT_THROW(quadratic_error(Pmf({1, 1}), Histogram(2)), Error);
}

TEST(QuadraticError, PermutationInvariant) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint32_t n = 1 + rng() % 50;
    auto w = oracle::random_weights(rng, n);
    Histogram h(n);
    for (int k = 0; k < 500; ++k) h.add(rng() % n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pw(n);
    Histogram ph(n);
    for (std::size_t i = 0; i < n; ++i) {
      pw[i] = w[perm[i]];
      ph.counts[i] = h.counts[perm[i]];
    }
    ph.total = h.total;
    EXPECT_NEAR(quadratic_error(Pmf(w), h), quadratic_error(Pmf(pw), ph), 1e-15);
  }
}

TEST(HistogramHelper, Examples) {
  const auto cdf = build_cdf(Pmf({1, 1, 1, 1}));
  PointStream s = PointStream::hammersley(4);
  const Histogram h = histogram([&](double x) { return sample_linear(cdf, x); }, s, 4);
  EXPECT_EQ(h.counts, (std::vector<std::uint64_t>{1, 1, 1, 1}));

  const auto single = build_cdf(Pmf({2}));
  PointStream p = PointStream::prng(1, 77);
  const Histogram hs = histogram([&](double x) { return sample_linear(single, x); }, p, 1, 1);
  EXPECT_EQ(hs.counts[0], 77u);
  EXPECT_EQ(hs.total, 77u);
}

TEST(Monotonicity, SingleInterval) {
  const auto cdf = build_cdf(Pmf({2}));
  const auto alias = build_alias_table(Pmf({2}));
  std::vector<double> grid{0, 0.1, 0.5, 0.9};
  EXPECT_EQ(monotonicity_violations([&](double x) { return sample_linear(cdf, x); }, grid), 0u);
  EXPECT_EQ(monotonicity_violations([&](double x) { return sample_alias(alias, x); }, grid), 0u);
}
