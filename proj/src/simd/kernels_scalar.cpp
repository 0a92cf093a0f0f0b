#include <algorithm>
#include <cmath>
#include <limits>

#include "metfact/simd/kernels.hpp"

namespace metfact::simd {
namespace {

double min_sum(const double* a, const double* b, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) best = std::min(best, a[k] + b[k]);
  return best;
}

double min_max(const double* a, const double* b, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) best = std::min(best, std::max(a[k], b[k]));
  return best;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
  double best = 0.0;
  for (std::size_t k = 0; k < n; ++k) best = std::max(best, std::fabs(a[k] - b[k]));
  return best;
}

void elementwise_max(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = std::max(a[k], b[k]);
}

void elementwise_min(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = std::min(a[k], b[k]);
}

void clamp_above(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = std::min(a[k], c);
}

void add(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] + b[k];
}

void le_mask(const double* a, double r, std::uint64_t* words, std::size_t n) {
  std::fill(words, words + (n + 63) / 64, 0);
  for (std::size_t k = 0; k < n; ++k)
    if (a[k] <= r) words[k / 64] |= std::uint64_t{1} << (k % 64);
}

void lt_mask(const double* a, double r, std::uint64_t* words, std::size_t n) {
  std::fill(words, words + (n + 63) / 64, 0);
  for (std::size_t k = 0; k < n; ++k)
    if (a[k] < r) words[k / 64] |= std::uint64_t{1} << (k % 64);
}

constexpr KernelTable kScalar{"scalar",        min_sum,         min_max,
                              max_abs_diff,    elementwise_max, elementwise_min,
                              clamp_above,     add,             le_mask,
                              lt_mask};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace metfact::simd
