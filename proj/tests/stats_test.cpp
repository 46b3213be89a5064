#include <gtest/gtest.h>

#include "support.hpp"

using namespace maiclass;
using namespace maiclass::stats;

namespace {

std::vector<double> draw(Rng& rng, std::size_t n, int levels) {
  std::vector<double> v(n);
  for (auto& x : v) x = levels > 0 ? static_cast<double>(rng.below(levels)) : rng.uniform(-10, 10);
  return v;
}

}  // namespace

TEST(MannWhitney, Examples) {
  const auto r = mann_whitney_u(std::vector<double>{1, 2}, std::vector<double>{3, 4});
  EXPECT_EQ(r.u1, 0.0);
  EXPECT_EQ(r.u2, 4.0);

  const std::vector<double> same = {0.5, 0.5, 0.5, 0.5, 0.5};
  const auto t = mann_whitney_u(same, same);
  EXPECT_EQ(t.u1, 12.5);
  EXPECT_NEAR(t.p_two_sided, 1.0, 1e-12);

  const std::vector<double> x = {1, 2, 3, 4, 5, 6}, y = {1.5, 2.5, 3.5};
  const auto mixed = mann_whitney_u(x, y, true, PValueMethod::asymptotic);
  EXPECT_EQ(mixed.u1, 12.0);
  EXPECT_FALSE(mixed.exact);
}

TEST(MannWhitney, TieCorrectedNormalApproximation) {
  // Hand computation: pooled [1,1,2 | 1,2,2,3]: ranks 2,2,2 for the 1s,
  // 4.5,4.5 for the 2s, 6 for the 3. R1 = 2+2+4.5 = 8.5, U1 = 2.5.
  const std::vector<double> x = {1, 1, 2}, y = {1, 2, 3};
  const auto r = mann_whitney_u(x, y, false);
  EXPECT_DOUBLE_EQ(r.u1, 2.5);
  EXPECT_EQ(r.tie_groups, 2u);
  const double var = 9.0 / 12.0 * (7.0 - (24.0 + 6.0) / 30.0);
  EXPECT_NEAR(r.z, (2.5 - 4.5) / std::sqrt(var), 1e-12);
  EXPECT_NEAR(r.p_two_sided, std::erfc(std::abs(r.z) / std::sqrt(2.0)), 1e-12);

  const auto c = mann_whitney_u(x, y, true);
  EXPECT_NEAR(c.z, (2.5 - 4.5 + 0.5) / std::sqrt(var), 1e-12);
  EXPECT_GT(c.p_two_sided, r.p_two_sided);
}

TEST(MannWhitney, Errors) {
  EXPECT_THROW(mann_whitney_u(std::vector<double>{}, std::vector<double>{1}), EmptySample);
  EXPECT_THROW(mann_whitney_u(std::vector<double>{1, 2}, std::vector<double>{2}, true, PValueMethod::exact),
               InvalidArgument);
}

TEST(MannWhitney, SumAndSwap) {
  Rng rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = draw(rng, 1 + rng.below(25), trial % 2 ? 5 : 0);
    const auto y = draw(rng, 1 + rng.below(25), trial % 2 ? 5 : 0);
    const auto a = mann_whitney_u(x, y);
    const auto b = mann_whitney_u(y, x);
    EXPECT_EQ(a.u1 + a.u2, static_cast<double>(x.size() * y.size()));
    EXPECT_EQ(a.u1, b.u2);
    EXPECT_NEAR(a.p_two_sided, b.p_two_sided, 1e-12);
    EXPECT_GE(a.p_two_sided, 0.0);
    EXPECT_LE(a.p_two_sided, 1.0);
  }
}

TEST(MannWhitney, MonotoneInvariance) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = draw(rng, 1 + rng.below(20), trial % 3 ? 6 : 0);
    const auto y = draw(rng, 1 + rng.below(20), trial % 3 ? 6 : 0);
    auto f = [](double v) { return std::exp(v / 3.0) * 7.0 + 2.0; };
    std::vector<double> fx, fy;
    for (double v : x) fx.push_back(f(v));
    for (double v : y) fy.push_back(f(v));
    const auto a = mann_whitney_u(x, y), b = mann_whitney_u(fx, fy);
    EXPECT_EQ(a.u1, b.u1);
    EXPECT_EQ(a.tie_groups, b.tie_groups);
    EXPECT_NEAR(a.p_two_sided, b.p_two_sided, 1e-12);
  }
}

TEST(MannWhitney, ExactMatchesEnumeration) {
  Rng rng(3);
  for (std::size_t n1 = 1; n1 <= 8; ++n1)
    for (std::size_t n2 = 1; n2 <= 8; ++n2) {
      auto x = draw(rng, n1, 0), y = draw(rng, n2, 0);
      const auto r = mann_whitney_u(x, y);
      ASSERT_EQ(r.tie_groups, 0u);
      EXPECT_TRUE(r.exact);
      EXPECT_NEAR(r.p_two_sided, testing_support::exact_p_oracle(r.u1, n1, n2), 0.005) << n1 << "x" << n2;
    }
}

TEST(Agreement, Examples) {
  EXPECT_EQ(percent_agreement({{1}, {0}, {1}, {1}, {0}, {1}, {1}, {0}, {0}, {0}}), std::vector<double>{50});
  EXPECT_EQ(percent_agreement({{1}, {1}, {1}}), std::vector<double>{100});
  EXPECT_THROW(percent_agreement({}), EmptyTable);
  EXPECT_THROW(percent_agreement({{1, 2}}), RangeError);
  EXPECT_THROW(percent_agreement({{1, 0}, {1}}), DimensionMismatch);
}

TEST(Agreement, ColumnMean) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rows = 1 + rng.below(12), cols = 1 + rng.below(6);
    std::vector<std::vector<int>> t(rows, std::vector<int>(cols));
    for (auto& r : t)
      for (auto& v : r) v = static_cast<int>(rng.below(2));
    const auto p = percent_agreement(t);
    for (std::size_t c = 0; c < cols; ++c) {
      double s = 0;
      for (auto& r : t) s += r[c];
      EXPECT_DOUBLE_EQ(p[c], 100.0 * s / static_cast<double>(rows));
      EXPECT_GE(p[c], 0.0);
      EXPECT_LE(p[c], 100.0);
    }
  }
}

TEST(Describe, Examples) {
  const auto d = describe(std::vector<double>{1, 1, 1});
  EXPECT_EQ(d.mean, 1.0);
  EXPECT_EQ(d.median, 1.0);
  EXPECT_EQ(d.sum, 3.0);
  EXPECT_EQ(d.count_of(1.0), 3u);
  EXPECT_EQ(describe(std::vector<double>{4, 1, 3, 2}).median, 2.5);
  EXPECT_THROW(describe(std::vector<double>{}), EmptySample);
}

TEST(AccurateSum, BeatsNaiveSum) {
  std::vector<double> v(1000, 0.001);
  EXPECT_DOUBLE_EQ(accurate_sum(v), 1.0);
  EXPECT_EQ(accurate_sum(std::vector<double>{1e100, 1.0, -1e100}), 1.0);
}
