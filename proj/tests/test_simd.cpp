#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "metfact/rng.hpp"
#include "metfact/simd/kernels.hpp"

using namespace metfact;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

// Rows with ties, zeros, huge and tiny values: the cases where a vector
// min/max could pick a different operand than the scalar loop.
std::vector<double> row(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) {
    switch (rng.below(6)) {
      case 0: x = 0.0; break;
      case 1: x = 1.0; break;
      case 2: x = std::ldexp(rng.uniform(), -1000); break;
      case 3: x = 1e300 * rng.uniform(); break;
      default: x = rng.uniform(); break;
    }
  }
  return v;
}

std::vector<std::uint64_t> mask(void (*f)(const double*, double, std::uint64_t*, std::size_t),
                                const std::vector<double>& a, double r) {
  std::vector<std::uint64_t> words((a.size() + 63) / 64 + 1, 0xDEADBEEFULL);
  f(a.data(), r, words.data(), a.size());
  words.resize((a.size() + 63) / 64);
  return words;
}

}  // namespace

TEST(Kernels, ScalarReference) {
  const auto& k = simd::scalar_kernels();
  const std::vector<double> a{3, 1, 4, 1, 5}, b{2, 7, 1, 8, 2};
  EXPECT_EQ(k.min_sum(a.data(), b.data(), 5), 5.0);
  EXPECT_EQ(k.min_max(a.data(), b.data(), 5), 3.0);
  EXPECT_EQ(k.max_abs_diff(a.data(), b.data(), 5), 7.0);
  EXPECT_EQ(k.min_sum(a.data(), b.data(), 0), std::numeric_limits<double>::infinity());
  EXPECT_EQ(k.max_abs_diff(a.data(), b.data(), 0), 0.0);
  std::vector<double> out(5);
  k.clamp_above(a.data(), 2.0, out.data(), 5);
  EXPECT_EQ(out, (std::vector<double>{2, 1, 2, 1, 2}));
  std::uint64_t w = 0;
  k.le_mask(a.data(), 3.0, &w, 5);
  EXPECT_EQ(w, 0b01011u);
  k.lt_mask(a.data(), 3.0, &w, 5);
  EXPECT_EQ(w, 0b01010u);
}

TEST(Kernels, Avx2MatchesScalarBitForBit) {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (!v) GTEST_SKIP() << "AVX2 not available";
  const auto& s = simd::scalar_kernels();
  Rng rng(99);
  for (std::size_t n = 0; n < 140; ++n) {
    for (int rep = 0; rep < 8; ++rep) {
      const auto a = row(rng, n), b = row(rng, n);
      EXPECT_TRUE(same_bits(s.min_sum(a.data(), b.data(), n), v->min_sum(a.data(), b.data(), n)));
      EXPECT_TRUE(same_bits(s.min_max(a.data(), b.data(), n), v->min_max(a.data(), b.data(), n)));
      EXPECT_TRUE(same_bits(s.max_abs_diff(a.data(), b.data(), n), v->max_abs_diff(a.data(), b.data(), n)));
      std::vector<double> o1(n), o2(n);
      s.elementwise_max(a.data(), b.data(), o1.data(), n);
      v->elementwise_max(a.data(), b.data(), o2.data(), n);
      EXPECT_TRUE(same_bits(o1, o2));
      s.elementwise_min(a.data(), b.data(), o1.data(), n);
      v->elementwise_min(a.data(), b.data(), o2.data(), n);
      EXPECT_TRUE(same_bits(o1, o2));
      s.add(a.data(), b.data(), o1.data(), n);
      v->add(a.data(), b.data(), o2.data(), n);
      EXPECT_TRUE(same_bits(o1, o2));
      const double c = n ? a[rng.below(n)] : 0.5;
      s.clamp_above(a.data(), c, o1.data(), n);
      v->clamp_above(a.data(), c, o2.data(), n);
      EXPECT_TRUE(same_bits(o1, o2));
      EXPECT_EQ(mask(s.le_mask, a, c), mask(v->le_mask, a, c));
      EXPECT_EQ(mask(s.lt_mask, a, c), mask(v->lt_mask, a, c));
    }
  }
}

TEST(Kernels, DispatchHonoursOverride) {
  const auto& active = simd::kernels();
  const char* env = std::getenv("METFACT_SIMD");
  if (env && std::string(env) == "scalar") {
    EXPECT_EQ(active.name, simd::scalar_kernels().name);
  } else if (simd::avx2_kernels()) {
    EXPECT_EQ(active.name, simd::avx2_kernels()->name);
  } else {
    EXPECT_EQ(active.name, simd::scalar_kernels().name);
  }
}
