#include <gtest/gtest.h>

#include "metfact/core.hpp"
#include "metfact/error.hpp"
#include "metfact/gen.hpp"
#include "metfact/retraction.hpp"
#include "metfact/suites.hpp"
#include "support.hpp"

using namespace metfact;
using namespace metfact::suites;
using namespace testing_support;

namespace {

SuiteOptions small(std::size_t threads) {
  SuiteOptions o;
  o.instances = 40;
  o.seed = 123;
  o.max_size = 16;
  o.threads = threads;
  return o;
}

// A farthest-point "retraction" checked against the 17 rho bound: fails
// whenever some x has a point of F more than 17 rho(x) away.
std::vector<Outcome> farthest_point_check(const Instance& inst) {
  const auto& m = inst.space;
  Retraction r;
  r.method = RetractionMethod::Engelking;
  r.mapping.resize(m.size());
  const auto in_f = membership(inst.subset, m.size());
  for (std::size_t x = 0; x < m.size(); ++x) {
    r.mapping[x] = x;
    if (in_f[x]) continue;
    for (auto a : inst.subset)
      if (!in_f[r.mapping[x]] || m(x, a) > m(x, r.mapping[x])) r.mapping[x] = a;
  }
  const auto rep = verify_retraction(m, inst.subset, r);
  return {{"sr_17", rep.find("sr_17")->passed, rep.find("sr_17")->counterexample}};
}

Instance spread_instance(std::uint64_t seed, std::size_t index, std::size_t) {
  Rng rng(instance_seed(seed, index));
  const std::size_t n = 6 + rng.below(10);
  std::vector<double> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(std::ldexp(rng.uniform(), static_cast<int>(rng.below(8))));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  Instance inst;
  inst.space = on_line(xs);
  inst.subset = {0, inst.space.size() - 1};
  return inst;
}

}  // namespace

TEST(Suites, AllRegisteredSuitesPass) {
  for (const auto& name : suite_names()) {
    const auto rep = run_suite(name, small(0));
    EXPECT_TRUE(rep.passed()) << rep.to_text();
    EXPECT_EQ(rep.instances, 40u);
    EXPECT_FALSE(rep.properties.empty());
  }
  EXPECT_THROW(run_suite("no-such-suite", small(1)), DomainError);
}

TEST(Suites, ReportsIndependentOfThreads) {
  for (const auto& name : suite_names()) {
    const auto one = run_suite(name, small(1)).to_json();
    EXPECT_EQ(one, run_suite(name, small(3)).to_json()) << name;
    EXPECT_EQ(one, run_suite(name, small(1)).to_json()) << name;
  }
}

TEST(Suites, SeedsChangeInstances) {
  EXPECT_NE(instance_seed(1, 0), instance_seed(2, 0));
  EXPECT_NE(instance_seed(1, 0), instance_seed(1, 1));
}

TEST(Suites, FailureIsShrunkAndReplays) {
  SuiteOptions o = small(2);
  o.instances = 30;
  const auto rep = run_property("farthest", spread_instance, farthest_point_check, o);
  ASSERT_FALSE(rep.passed());
  ASSERT_TRUE(rep.counterexample);
  const auto& ce = *rep.counterexample;
  // Minimal: a point off F plus the two points of F.
  EXPECT_EQ(ce.space.size(), 3u);
  EXPECT_FALSE(farthest_point_check(ce).front().ok);
  for (std::size_t drop = 0; drop < ce.space.size(); ++drop) {
    IndexSet keep;
    for (std::size_t x = 0; x < ce.space.size(); ++x)
      if (x != drop) keep.push_back(x);
    Instance smaller;
    smaller.space = ce.space.restrict_to(keep);
    for (auto a : ce.subset)
      if (a != drop) smaller.subset.push_back(a > drop ? a - 1 : a);
    if (smaller.subset.empty()) continue;
    EXPECT_TRUE(farthest_point_check(smaller).front().ok);
  }
  const auto replayed = instance_from_json(instance_to_json(ce));
  EXPECT_EQ(replayed.space, ce.space);
  EXPECT_EQ(replayed.subset, ce.subset);
  EXPECT_FALSE(farthest_point_check(replayed).front().ok);
  // The report carries the counterexample.
  EXPECT_NE(rep.to_json().find("counterexample"), std::string::npos);
}

TEST(Suites, ExceptionsBecomeFailures) {
  SuiteOptions o = small(1);
  o.instances = 3;
  const auto rep = run_property(
      "throws", spread_instance,
      [](const Instance&) -> std::vector<Outcome> { throw DomainError("boom"); }, o);
  EXPECT_FALSE(rep.passed());
  EXPECT_NE(rep.first_message.find("boom"), std::string::npos);
}

TEST(Suites, ReplayOnNamedFixtures) {
  Instance inst;
  inst.space = gen::random_ultra(32, 5, 2.0);
  inst.subset = {1, 4, 9, 20};
  for (const auto& name : {"quotient-laws", "retraction-certificates", "embedding"}) {
    const auto rep = run_suite_on(name, inst, SuiteOptions{});
    EXPECT_TRUE(rep.passed()) << rep.to_text();
  }
}
