// Compiled with -mavx2 only; callers reach it through avx2_kernels(), which
// checks CPUID first. No FMA: every lane must round exactly like the scalar
// reference.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "metfact/simd/kernels.hpp"

namespace metfact::simd {
namespace avx2 {
namespace {

inline double hmin(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_min_pd(lo, hi);
  lo = _mm_min_sd(lo, _mm_unpackhi_pd(lo, lo));
  return _mm_cvtsd_f64(lo);
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  lo = _mm_max_sd(lo, _mm_unpackhi_pd(lo, lo));
  return _mm_cvtsd_f64(lo);
}

double min_sum(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc = _mm256_min_pd(acc, _mm256_add_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  double best = hmin(acc);
  for (; k < n; ++k) best = std::min(best, a[k] + b[k]);
  return best;
}

double min_max(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc = _mm256_min_pd(acc, _mm256_max_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  double best = hmin(acc);
  for (; k < n; ++k) best = std::min(best, std::max(a[k], b[k]));
  return best;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, diff));
  }
  double best = hmax(acc);
  for (; k < n; ++k) best = std::max(best, std::fabs(a[k] - b[k]));
  return best;
}

void elementwise_max(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(out + k, _mm256_max_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  for (; k < n; ++k) out[k] = std::max(a[k], b[k]);
}

void elementwise_min(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(out + k, _mm256_min_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  for (; k < n; ++k) out[k] = std::min(a[k], b[k]);
}

void clamp_above(const double* a, double c, double* out, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, _mm256_min_pd(_mm256_loadu_pd(a + k), cv));
  for (; k < n; ++k) out[k] = std::min(a[k], c);
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
  }
  for (; k < n; ++k) out[k] = a[k] + b[k];
}

template <int Predicate>
void cmp_mask(const double* a, double r, std::uint64_t* words, std::size_t n) {
  std::fill(words, words + (n + 63) / 64, 0);
  const __m256d rv = _mm256_set1_pd(r);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const auto bits = static_cast<std::uint64_t>(
        _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(a + k), rv, Predicate)));
    // k is a multiple of 4, so the four bits never straddle a word.
    words[k / 64] |= bits << (k % 64);
  }
  for (; k < n; ++k) {
    const bool hit = Predicate == _CMP_LE_OQ ? a[k] <= r : a[k] < r;
    if (hit) words[k / 64] |= std::uint64_t{1} << (k % 64);
  }
}

void le_mask(const double* a, double r, std::uint64_t* words, std::size_t n) {
  cmp_mask<_CMP_LE_OQ>(a, r, words, n);
}

void lt_mask(const double* a, double r, std::uint64_t* words, std::size_t n) {
  cmp_mask<_CMP_LT_OQ>(a, r, words, n);
}

}  // namespace

const KernelTable kTable{"avx2",          min_sum,         min_max,
                         max_abs_diff,    elementwise_max, elementwise_min,
                         clamp_above,     add,             le_mask,
                         lt_mask};

}  // namespace avx2

const KernelTable& avx2_table() { return avx2::kTable; }

}  // namespace metfact::simd
