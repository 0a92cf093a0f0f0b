#include <gtest/gtest.h>

#include <cmath>

#include "metfact/core.hpp"
#include "metfact/error.hpp"
#include "metfact/retraction.hpp"
#include "support.hpp"

using namespace metfact;
using namespace testing_support;

namespace {

// Annulus index straight from the definition: 0 if rho > 1/2, else the i
// with 2^-(i+1) < rho <= 2^-i.
int annulus_by_definition(double rho) {
  if (rho > 0.5) return 0;
  int i = 1;
  while (!(rho > std::ldexp(1.0, -(i + 1)))) ++i;
  return i;
}

}  // namespace

TEST(Annulus, Index) {
  EXPECT_EQ(annulus_index(0.6), 0);
  EXPECT_EQ(annulus_index(0.5), 1);
  EXPECT_EQ(annulus_index(0.3), 1);
  EXPECT_EQ(annulus_index(0.25), 2);
  EXPECT_EQ(annulus_index(0.2), 2);
  EXPECT_EQ(annulus_index(100.0), 0);
  for (int k = 1; k < 40; ++k) {
    const double p = std::ldexp(1.0, -k);
    EXPECT_EQ(annulus_index(p), annulus_by_definition(p));
    EXPECT_EQ(annulus_index(p * 0.75), annulus_by_definition(p * 0.75));
  }
}

TEST(Engelking, IdentityAndConstant) {
  Rng rng(1);
  const auto m = shortest_path_metric(rng, 7);
  const auto id = retract_engelking(m, {0, 1, 2, 3, 4, 5, 6});
  for (std::size_t x = 0; x < 7; ++x) EXPECT_EQ(id.mapping[x], x);
  const auto c = retract_engelking(m, {4});
  for (std::size_t x = 0; x < 7; ++x) EXPECT_EQ(c.mapping[x], 4u);
  EXPECT_THROW(retract_engelking(m, {}), DomainError);
}

TEST(Engelking, LineTrace) {
  const auto m = on_line({0, 0.3, 1.0});
  const auto r = retract_engelking(m, {0});
  ASSERT_TRUE(r.trace);
  EXPECT_EQ(r.trace->annulus_of, (std::vector<int>{-1, 1, 0}));
  EXPECT_EQ(r.mapping, (std::vector<std::size_t>{0, 0, 0}));
  EXPECT_LE(m(1, r.mapping[1]), 17 * 0.3);
  // V_0 = {rho <= 1/2}, V_1 = {rho <= 1/4} = F.
  EXPECT_EQ(r.trace->neighborhoods.at(0), (IndexSet{0, 1}));
  EXPECT_EQ(r.trace->neighborhoods.at(1), (IndexSet{0}));
  EXPECT_EQ(r.trace->annuli.at(0), (IndexSet{2}));
  EXPECT_EQ(r.trace->annuli.at(1), (IndexSet{1}));
  EXPECT_TRUE(verify_retraction(m, {0}, r).all_passed());
}

TEST(Engelking, CertificatesOnRandomSpaces) {
  Rng rng(7);
  for (int t = 0; t < 120; ++t) {
    const std::size_t n = 2 + rng.below(30);
    const double scale = std::ldexp(1.0, static_cast<int>(rng.below(9)) - 5);
    const auto m = shortest_path_metric(rng, n, scale);
    const auto f = random_subset(rng, n);
    const auto r = retract_engelking(m, f);
    const auto rep = verify_retraction(m, f, r);
    for (const auto& c : rep.certificates) EXPECT_TRUE(c.passed) << c.name << ": " << c.counterexample;
    // The displacement bounds, recomputed here.
    const auto in_f = membership(f, n);
    for (std::size_t x = 0; x < n; ++x) {
      ASSERT_TRUE(in_f[r.mapping[x]]);
      if (in_f[x]) {
        EXPECT_EQ(r.mapping[x], x);
        continue;
      }
      const double rho = brute_rho(m, f, x);
      const int big_m = annulus_by_definition(rho);
      EXPECT_LE(m(x, r.mapping[x]), (rho + std::ldexp(1.0, -big_m + 2)) * (1 + 1e-9));
      EXPECT_LE(m(x, r.mapping[x]), 17 * rho * (1 + 1e-9));
    }
  }
}

TEST(Engelking, NetsAreNestedMaximalSeparated) {
  Rng rng(70);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + rng.below(25);
    const auto m = shortest_path_metric(rng, n, 0.5);
    const auto f = random_subset(rng, n);
    const auto r = retract_engelking(m, f);
    const auto& nets = r.trace->nets;
    for (std::size_t i = 0; i < nets.size(); ++i) {
      const double sep = std::ldexp(1.0, -static_cast<int>(i));
      for (auto p : nets[i])
        for (auto q : nets[i])
          if (p != q) EXPECT_GE(m(p, q), sep);
      for (auto a : f) {  // maximal: every point of F is within sep of the net
        double best = INFINITY;
        for (auto p : nets[i]) best = std::min(best, m(a, p));
        EXPECT_LT(best, sep);
      }
      if (i > 0) {
        for (auto p : nets[i - 1]) EXPECT_TRUE(std::find(nets[i].begin(), nets[i].end(), p) != nets[i].end());
      }
    }
  }
}

TEST(Engelking, FarthestPointRetractionFailsSR) {
  const auto m = on_line({0, 0.3, 1.0, 10.0});
  const IndexSet f{0, 3};
  Retraction bad;
  bad.method = RetractionMethod::Engelking;
  bad.mapping = {0, 0, 0, 3};
  for (std::size_t x : {1u, 2u}) {  // farthest point of F
    bad.mapping[x] = m(x, 0) >= m(x, 3) ? 0 : 3;
  }
  const auto rep = verify_retraction(m, f, bad);
  EXPECT_FALSE(rep.all_passed());
  const auto* sr = rep.find("sr_17");
  ASSERT_NE(sr, nullptr);
  EXPECT_FALSE(sr->passed);
  EXPECT_LT(sr->worst_slack, 0.0);
  // d(0.3, 10) = 9.7 against 17 * 0.3 = 5.1.
  EXPECT_NEAR(sr->worst_slack, 17 * 0.3 - 9.7, 1e-9);
  EXPECT_FALSE(rep.find("sr_additive")->passed);
}

TEST(Bdhm, StarSetExample) {
  // d(a,b)=4, d(x,a)=1, d(x,b)=4: st(x) = {a} for tau = 2.
  const auto m = from_rows({"a", "b", "x"}, {{0, 4, 1}, {4, 0, 4}, {1, 4, 0}});
  const auto r = retract_bdhm(m, {0, 1}, 2.0);
  EXPECT_EQ(r.mapping, (std::vector<std::size_t>{0, 1, 0}));
  EXPECT_TRUE(verify_retraction(m, {0, 1}, r).all_passed());
}

TEST(Bdhm, TieGoesToFirstLabel) {
  const auto m = from_rows({"a", "b", "x"}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  EXPECT_EQ(retract_bdhm(m, {0, 1}, 1.5).mapping[2], 0u);
}

TEST(Bdhm, Errors) {
  const auto ultra = from_rows({"a", "b"}, {{0, 1}, {1, 0}});
  EXPECT_THROW(retract_bdhm(on_line({0, 1, 2}), {0}, 2.0), DomainError);
  EXPECT_THROW(retract_bdhm(ultra, {0}, 1.0), DomainError);
  EXPECT_THROW(retract_bdhm(ultra, {}, 2.0), DomainError);
}

TEST(Bdhm, MatchesDefinitionAndCertificates) {
  Rng rng(13);
  for (double tau : {1.5, 2.0, 4.0}) {
    for (int t = 0; t < 60; ++t) {
      const std::size_t n = 2 + rng.below(30);
      const auto m = dyadic_ultrametric(rng, n, 8);
      const auto f = random_subset(rng, n);
      const auto r = retract_bdhm(m, f, tau);
      for (std::size_t x = 0; x < n; ++x) {
        const double rho = brute_rho(m, f, x);
        std::size_t expect = n;
        for (auto a : f)
          if (m(x, a) <= tau * rho) {
            expect = a;
            break;
          }
        EXPECT_EQ(r.mapping[x], expect);
        for (std::size_t y = 0; y < n; ++y)
          EXPECT_LE(m(r.mapping[x], r.mapping[y]), tau * tau * m(x, y) * (1 + 1e-12));
      }
      const auto rep = verify_retraction(m, f, r);
      for (const auto& c : rep.certificates) EXPECT_TRUE(c.passed) << c.name << ": " << c.counterexample;
    }
  }
}

TEST(Bdhm, ImagesOfFarSetsAreSeparated) {
  Rng rng(14);
  for (int t = 0; t < 40; ++t) {
    const auto m = dyadic_ultrametric(rng, 3 + rng.below(20), 6);
    const auto f = random_subset(rng, m.size());
    const auto r = retract_bdhm(m, f, 2.0);
    for (double eps : m.distance_spectrum()) {
      IndexSet images;
      for (std::size_t x = 0; x < m.size(); ++x)
        if (brute_rho(m, f, x) >= eps) images.push_back(r.mapping[x]);
      for (auto p : images)
        for (auto q : images)
          if (p != q) EXPECT_GE(m(p, q), eps);
    }
  }
}

TEST(Retraction, Idempotent) {
  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    const auto m = dyadic_ultrametric(rng, 2 + rng.below(20));
    const auto f = random_subset(rng, m.size());
    for (const auto& r : {retract_engelking(m, f), retract_bdhm(m, f, 2.0)}) {
      for (std::size_t x = 0; x < m.size(); ++x) EXPECT_EQ(r.mapping[r.mapping[x]], r.mapping[x]);
    }
  }
}
