#pragma once

// Data-parallel inner loops over distance-matrix rows.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2 variant. The active table is chosen once at first use from CPUID;
// setting METFACT_SIMD=scalar in the environment forces the reference
// path. All kernels are composed of IEEE add/sub/abs/min/max/compare on
// individual lanes, so both variants return bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace metfact::simd {

struct KernelTable {
  std::string_view name;

  // min_k (a[k] + b[k]); +inf for n == 0.
  double (*min_sum)(const double* a, const double* b, std::size_t n);
  // min_k max(a[k], b[k]); +inf for n == 0.
  double (*min_max)(const double* a, const double* b, std::size_t n);
  // max_k |a[k] - b[k]|; 0 for n == 0.
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
  // out[k] = max(a[k], b[k]).
  void (*elementwise_max)(const double* a, const double* b, double* out, std::size_t n);
  // out[k] = min(a[k], b[k]).
  void (*elementwise_min)(const double* a, const double* b, double* out, std::size_t n);
  // out[k] = min(a[k], c).
  void (*clamp_above)(const double* a, double c, double* out, std::size_t n);
  // out[k] = a[k] + b[k].
  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  // Bit k of words[k / 64] set iff a[k] <= r. words has ceil(n/64) entries.
  void (*le_mask)(const double* a, double r, std::uint64_t* words, std::size_t n);
  // Bit k set iff a[k] < r.
  void (*lt_mask)(const double* a, double r, std::uint64_t* words, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();

// The table selected for this process.
const KernelTable& kernels();

}  // namespace metfact::simd
