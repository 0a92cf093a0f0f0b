#include <gtest/gtest.h>

#include "metfact/core.hpp"
#include "metfact/error.hpp"
#include "metfact/quotient.hpp"
#include "support.hpp"

using namespace metfact;
using namespace testing_support;

namespace {

FinMetricSpace abc(double bc) { return from_rows({"a", "b", "c"}, {{0, 1, 2}, {1, 0, bc}, {2, bc, 0}}); }

double at(const QuotientSpace& q, const std::string& x, const std::string& y) {
  return q.space(q.space.index_of(x), q.space.index_of(y));
}

}  // namespace

TEST(Quotient, ThreePointExample) {
  const auto q = quotient(abc(2.5), {0});
  EXPECT_EQ(q.theta, "__theta__");
  EXPECT_EQ(q.space.labels(), (std::vector<std::string>{"b", "c", "__theta__"}));
  EXPECT_EQ(at(q, "b", "c"), std::min(2.5, 1.0 + 2.0));
  EXPECT_EQ(at(q, "b", q.theta), 1.0);
  EXPECT_EQ(at(q, "c", q.theta), 2.0);
  EXPECT_EQ(q.projection, (std::vector<std::size_t>{2, 0, 1}));
}

TEST(Quotient, ShortcutThroughF) {
  const auto q = quotient(abc(4.0), {0});
  EXPECT_EQ(at(q, "b", "c"), std::min(4.0, 1.0 + 2.0));
}

TEST(Quotient, WholeSpaceCollapses) {
  const auto q = quotient(abc(2.5), {0, 1, 2});
  EXPECT_EQ(q.space.size(), 1u);
  EXPECT_EQ(q.space.label(0), q.theta);
  EXPECT_THROW(quotient(abc(2.5), {}), DomainError);
}

TEST(Quotient, FreshThetaAvoidsClashes) {
  EXPECT_EQ(fresh_theta_label({"a"}), "__theta__");
  const auto t = fresh_theta_label({"__theta__", "__theta__1"});
  EXPECT_NE(t, "__theta__");
  EXPECT_NE(t, "__theta__1");
  const auto m = from_rows({"__theta__", "b"}, {{0, 1}, {1, 0}});
  const auto q = quotient(m, {0});
  EXPECT_NE(q.theta, "__theta__");
  EXPECT_TRUE(is_metric(q.space));
}

TEST(Quotient, LawReportCatchesInjectedAsymmetry) {
  const auto m = abc(2.5);
  auto q = quotient(m, {0});
  EXPECT_TRUE(check_quotient_laws(q, m, {0}).ok);
  auto rows = rows_of(q.space);
  rows[0][1] += 0.5;  // d~(b, c) no longer equals d~(c, b)
  q.space = FinMetricSpace(q.space.labels(), rows);
  const auto rep = check_quotient_laws(q, m, {0});
  ASSERT_FALSE(rep.ok);
  bool named = false;
  for (const auto& v : rep.violations) named = named || (v.find("b") != std::string::npos && v.find("c") != std::string::npos);
  EXPECT_TRUE(named);
}

TEST(Quotient, RandomInstancesAgainstFormula) {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 20;
    const auto m = t % 2 ? shortest_path_metric(rng, n) : dyadic_ultrametric(rng, n);
    const auto f = random_subset(rng, n);
    const auto q = quotient(m, f);
    EXPECT_TRUE(check_quotient_laws(q, m, f).ok);
    EXPECT_TRUE(brute_is_metric(q.space) || q.space.size() == 1);
    const auto in_f = membership(f, n);
    for (std::size_t x = 0; x < n; ++x) {
      const double rx = brute_rho(m, f, x);
      EXPECT_EQ(q.space.label(q.projection[x]), in_f[x] ? q.theta : m.label(x));
      if (!in_f[x]) EXPECT_EQ(q.space(q.projection[x], q.theta_index()), rx);
      for (std::size_t y = 0; y < n; ++y) {
        const double ry = brute_rho(m, f, y);
        const double dq = q.space(q.projection[x], q.projection[y]);
        EXPECT_LE(dq, m(x, y) * (1 + 1e-12));
        if (!in_f[x] && !in_f[y] && x != y) {
          EXPECT_TRUE(close(dq, std::min(m(x, y), rx + ry)));
          if (dq < std::max(rx, ry)) EXPECT_EQ(dq, m(x, y));
        }
      }
    }
  }
}

TEST(Quotient, LocalIsometryOfSmallBalls) {
  Rng rng(32);
  for (int t = 0; t < 30; ++t) {
    const auto m = shortest_path_metric(rng, 12);
    const auto f = random_subset(rng, 12);
    const auto q = quotient(m, f);
    const auto in_f = membership(f, 12);
    for (std::size_t x = 0; x < 12; ++x) {
      if (in_f[x]) continue;
      const double rx = brute_rho(m, f, x);
      for (double eps : {0.25 * rx, 0.5 * rx, 0.99 * rx}) {
        for (std::size_t z = 0; z < 12; ++z) {
          EXPECT_EQ(m(x, z) <= eps, q.space(q.projection[x], q.projection[z]) <= eps);
        }
      }
    }
  }
}
