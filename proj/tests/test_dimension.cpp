#include <gtest/gtest.h>

#include <cmath>

#include "metfact/core.hpp"
#include "metfact/dimension.hpp"
#include "metfact/error.hpp"
#include "metfact/gen.hpp"
#include "metfact/quotient.hpp"
#include "support.hpp"

using namespace metfact;
using namespace testing_support;

TEST(Covering, IntegerExamples) {
  const auto m = on_line({0, 1, 2, 3});
  EXPECT_EQ(covering_number(m, 3.0, CountMode::Exact), 1u);
  EXPECT_EQ(covering_number(m, 10.0, CountMode::Greedy), 1u);
  EXPECT_EQ(covering_number(m, 1.0, CountMode::Exact), brute_covering(m, 1.0));
  EXPECT_EQ(covering_number(m, 1.0, CountMode::Exact), 2u);
  EXPECT_EQ(covering_number(m, 0.5, CountMode::Exact), 4u);
  EXPECT_THROW(covering_number(m, 0.0), DomainError);
}

TEST(Packing, IntegerExamples) {
  const auto m = on_line({0, 1, 2, 3});
  EXPECT_EQ(packing_number(m, 0.5, CountMode::Exact), 4u);
  EXPECT_EQ(packing_number(m, 1.0, CountMode::Exact), 4u);
  EXPECT_EQ(packing_number(m, 2.5, CountMode::Exact), brute_packing(m, 2.5));
  EXPECT_EQ(packing_number(m, 2.5, CountMode::Exact), 2u);
}

TEST(Covering, CapacityLimit) {
  std::vector<double> xs;
  for (int i = 0; i < 21; ++i) xs.push_back(i);
  const auto big = on_line(xs);
  EXPECT_THROW(covering_number(big, 1.0, CountMode::Exact), CapacityError);
  EXPECT_THROW(packing_number(big, 1.0, CountMode::Exact), CapacityError);
  EXPECT_NO_THROW(covering_number(big, 1.0, CountMode::Auto));
}

TEST(Covering, ExactMatchesBruteForceAndGreedyBrackets) {
  Rng rng(50);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const auto m = t % 3 == 0 ? dyadic_ultrametric(rng, n, 4) : shortest_path_metric(rng, n);
    std::vector<double> radii = m.distance_spectrum();
    radii.push_back(0.5 * (radii.empty() ? 1.0 : radii.front()));
    for (double r : radii) {
      const auto exact = covering_number(m, r, CountMode::Exact);
      const auto greedy = covering_number(m, r, CountMode::Greedy);
      const auto pack = packing_number(m, r, CountMode::Exact);
      EXPECT_EQ(exact, brute_covering(m, r));
      EXPECT_EQ(pack, brute_packing(m, r));
      EXPECT_GE(greedy, exact);
      EXPECT_LE(static_cast<double>(greedy), (1 + std::log(static_cast<double>(n))) * exact);
      EXPECT_LE(packing_number(m, r, CountMode::Greedy), pack);
      EXPECT_LE(exact, pack);
    }
  }
}

TEST(Covering, SubspaceCount) {
  const auto m = on_line({0, 1, 2, 3, 10, 11});
  EXPECT_EQ(covering_number(m, {0, 1, 2, 3}, 1.0, CountMode::Exact), 2u);
  EXPECT_EQ(covering_number(m, {4, 5}, 1.0, CountMode::Exact), 1u);
}

TEST(ScaleProfile, Invariants) {
  Rng rng(51);
  for (int t = 0; t < 60; ++t) {
    const auto m = shortest_path_metric(rng, 2 + rng.below(11));
    auto radii = m.distance_spectrum();
    const auto prof = scale_profile(m, radii, CountMode::Exact);
    ASSERT_EQ(prof.scales.size(), radii.size());
    for (std::size_t a = 0; a < prof.scales.size(); ++a) {
      if (a) {
        EXPECT_GT(prof.scales[a - 1], prof.scales[a]);
        EXPECT_LE(prof.counts[a - 1], prof.counts[a]);
      }
      EXPECT_LE(prof.counts[a], prof.packing[a]);
      for (std::size_t b = 0; b < prof.scales.size(); ++b)
        if (prof.scales[b] > 2 * prof.scales[a]) EXPECT_LE(prof.packing[b], prof.counts[a]);
    }
  }
}

TEST(BoxSlope, SinglePointIsZero) {
  const FinMetricSpace one({"o"}, std::vector<double>{0});
  EXPECT_EQ(ubdim_estimate(one, {1, 0.5, 0.25}).slope, 0.0);
}

TEST(BoxSlope, DegenerateScalesRejected) {
  const auto m = on_line({0, 1, 2, 3});
  EXPECT_THROW(ubdim_estimate(m, {1, 2}), DomainError);
  EXPECT_THROW(ubdim_estimate(m, {1, 1.2, 1.5}), DomainError);
}

TEST(BoxSlope, CantorDepth8) {
  const auto c = gen::cantor(8);
  std::vector<double> scales, xs, ys;
  for (int j = 1; j <= 8; ++j) {
    scales.push_back(std::pow(3.0, -j));
    xs.push_back(j * std::log(3.0));
    ys.push_back(j * std::log(2.0));  // N(3^-j) = 2^j
  }
  const double expected = ols_slope(xs, ys);
  EXPECT_NEAR(expected, std::log(2.0) / std::log(3.0), 1e-12);
  const auto est = ubdim_estimate(c, scales);
  for (std::size_t k = 0; k < est.counts.size(); ++k) EXPECT_EQ(est.counts[k], std::size_t{1} << (k + 1));
  EXPECT_NEAR(est.slope, expected, 0.02);
}

TEST(BoxSlope, DyadicPointsOnUnitInterval) {
  // 2^8 points i/2^8; a closed 2^-j ball holds 2^(9-j) + 1 of them, so
  // N(2^-j) = ceil(2^8 / (2^(9-j) + 1)) = 2^(j-1) for j = 1..5.
  std::vector<double> pts;
  for (int i = 0; i < 256; ++i) pts.push_back(i / 256.0);
  const auto m = on_line(pts);
  std::vector<double> scales, xs, ys;
  for (int j = 1; j <= 5; ++j) {
    scales.push_back(std::ldexp(1.0, -j));
    const double count = std::ceil(256.0 / (std::ldexp(1.0, 9 - j) + 1));
    xs.push_back(j * std::log(2.0));
    ys.push_back(std::log(count));
  }
  const auto est = ubdim_estimate(m, scales);
  EXPECT_NEAR(est.slope, ols_slope(xs, ys), 1e-9);
  EXPECT_NEAR(est.slope, 1.0, 0.05);
}

TEST(BoxSlope, PackingAndCoveringSlopesAgreeOnFixtures) {
  const auto c = gen::cantor(8);
  std::vector<double> s3;
  for (int j = 1; j <= 8; ++j) s3.push_back(std::pow(3.0, -j));
  EXPECT_NEAR(ubdim_estimate(c, s3).slope, packing_slope_estimate(c, s3).slope, 0.1);
  const auto l = gen::line(16, 1.0);
  const auto s2 = default_scales(l, 2.0);
  EXPECT_NEAR(ubdim_estimate(l, s2).slope, packing_slope_estimate(l, s2).slope, 0.1);
}

TEST(Assouad, SinglePointAndErrors) {
  const FinMetricSpace one({"o"}, std::vector<double>{0});
  EXPECT_EQ(adim_estimate(one, {{1.0, 0.5}}).value, 0.0);
  const auto m = on_line({0, 1, 2});
  EXPECT_THROW(adim_estimate(m, {}), DomainError);
  EXPECT_THROW(adim_estimate(m, {{1.0, 1.0}}), DomainError);
}

TEST(Assouad, SixteenPointsOnALine) {
  std::vector<double> pts;
  for (int i = 0; i < 16; ++i) pts.push_back(i / 15.0);
  const auto m = on_line(pts);
  // Around the midpoint B(x, 1) is everything; three quarter-balls cover it.
  IndexSet all;
  for (std::size_t i = 0; i < 16; ++i) all.push_back(i);
  const auto count = brute_covering(m, all, 0.25);
  EXPECT_EQ(count, 3u);
  const double ratio = std::log(static_cast<double>(count)) / std::log(4.0);
  EXPECT_NEAR(ratio, 1.0, 0.3);
  const auto est = adim_estimate(m, {{1.0, 0.25}});
  EXPECT_NEAR(est.value, ratio, 1e-12);
  EXPECT_EQ(est.count, count);
}

TEST(SingleLinkage, MatchesMinimaxPaths) {
  Rng rng(52);
  for (int t = 0; t < 50; ++t) {
    const auto m = shortest_path_metric(rng, 2 + rng.below(20));
    const auto sl = single_linkage_ultrametric(m);
    const auto oracle = minimax_closure(rows_of(m));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) EXPECT_EQ(sl(i, j), oracle[i][j]);
    EXPECT_TRUE(brute_is_ultrametric(sl));
  }
}

TEST(Sparse, Examples) {
  const auto eq = from_rows({"a", "b", "c"}, {{0, 3, 3}, {3, 0, 3}, {3, 3, 0}});
  const auto s = sparse_ultrametric(eq);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s(i, j), i == j ? 0.0 : 0.25);
  // Merge heights {1, 2} -> {2^-4, 2^-2}.
  const auto m = on_line({0, 1, 3});
  const auto t = sparse_ultrametric(m);
  EXPECT_EQ(t(0, 1), 0.0625);
  EXPECT_EQ(t(0, 2), 0.25);
  EXPECT_EQ(t(1, 2), 0.25);
}

TEST(Sparse, OrderIsomorphicToSingleLinkage) {
  Rng rng(53);
  for (int t = 0; t < 40; ++t) {
    const auto m = dyadic_ultrametric(rng, 2 + rng.below(15), 7);
    const auto sl = single_linkage_ultrametric(m);
    const auto sp = sparse_ultrametric(m);
    EXPECT_TRUE(brute_is_ultrametric(sp));
    const std::size_t n = m.size();
    for (std::size_t a = 0; a < n * n; ++a)
      for (std::size_t b = 0; b < n * n; ++b) {
        const double x = sl.data()[a], y = sl.data()[b];
        EXPECT_EQ(x < y, sp.data()[a] < sp.data()[b]);
      }
  }
}

TEST(Sparse, CantorDepth6IsNearlyZeroDimensional) {
  const auto s = sparse_ultrametric(gen::cantor(6));
  EXPECT_TRUE(is_ultrametric(s));
  EXPECT_LE(adim_estimate(s, standard_assouad_pairs(s)).value, 0.1);
}

TEST(ProductCovering, SinglePointFactorIsEquality) {
  const auto m = on_line({0, 1, 2, 3});
  const FinMetricSpace one({"o"}, std::vector<double>{0});
  const auto rep = product_covering_check(m, one, ProductNorm::Linf, {0.5, 1, 2});
  EXPECT_TRUE(rep.passed);
  for (const auto& row : rep.rows) EXPECT_EQ(row.product, row.first);
}

TEST(ProductCovering, TwoFourPointLines) {
  const auto a = on_line({0, 1, 2, 3}, "a"), b = on_line({0, 1, 2, 3}, "b");
  const auto rep = product_covering_check(a, b, ProductNorm::Linf, {1.0});
  ASSERT_EQ(rep.rows.size(), 1u);
  const auto prod = product_metric(a, b, ProductNorm::Linf);
  EXPECT_EQ(rep.rows[0].product, brute_covering(prod, 1.0));
  EXPECT_LE(rep.rows[0].product, 4u);
  EXPECT_EQ(rep.rows[0].bound, 4u);
  EXPECT_TRUE(rep.passed);
  EXPECT_TRUE(product_covering_check(a, b, ProductNorm::L1, {1.0, 2.0}).passed);
}

TEST(ProductCovering, RandomFactors) {
  Rng rng(54);
  for (int t = 0; t < 40; ++t) {
    const auto a = shortest_path_metric(rng, 1 + rng.below(4));
    auto b = shortest_path_metric(rng, 1 + rng.below(5));
    b = FinMetricSpace(labels(b.size(), "q"), rows_of(b));
    for (auto norm : {ProductNorm::Linf, ProductNorm::L1}) {
      const auto rep = product_covering_check(a, b, norm, {0.1, 0.3, 0.6, 1.2});
      EXPECT_TRUE(rep.passed);
      for (const auto& row : rep.rows) {
        EXPECT_EQ(row.product, brute_covering(product_metric(a, b, norm), row.scale));
        EXPECT_LE(row.product, row.bound);
      }
    }
  }
  EXPECT_THROW(product_covering_check(on_line({0, 1, 2, 3, 4}), on_line({0, 1, 2, 3, 4}, "y"),
                                      ProductNorm::Linf, {1.0}),
               CapacityError);
}

// Cantor(4) times a sparse quotient of itself. The sparse factor only has a
// constant count between consecutive values, so the comparison is made on
// the 3^-j scales inside the gap [2^-8, 2^-4).
TEST(ProductSlope, CantorTimesSparseQuotient) {
  const auto c = gen::cantor(4);
  const std::vector<double> window{std::pow(3.0, -3), std::pow(3.0, -4), std::pow(3.0, -5)};
  for (const IndexSet& f : {IndexSet{0, 15}, IndexSet{0, 5, 10, 15}, IndexSet{0, 1, 2, 3, 4, 5, 6, 7}, IndexSet{3, 9}}) {
    const auto v = sparse_ultrametric(quotient(c, f).space);
    const auto spec = v.distance_spectrum();
    for (double s : window) {
      for (double x : spec) EXPECT_FALSE(x > std::ldexp(1.0, -8) && x < std::ldexp(1.0, -4)) << x;
      EXPECT_EQ(brute_covering(v, s), brute_covering(v, window.front()));
    }
    const auto prod = product_metric(c, v, ProductNorm::Linf);
    const double factor = ubdim_estimate(c, window).slope;
    EXPECT_GT(factor, 0.3);
    EXPECT_LE(ubdim_estimate(prod, window).slope, factor + 0.1);
  }
}
