#pragma once

#include <algorithm>
#include <cmath>

namespace metfact {

// Relative tolerance shared by every metric-axiom check and every
// "exact" matrix comparison in the library.
inline constexpr double kRelTol = 1e-9;

inline double tol_scale(double a, double b) {
  return kRelTol * std::max(std::fabs(a), std::fabs(b));
}

// a <= b up to relative tolerance.
inline bool approx_le(double a, double b) { return a <= b + tol_scale(a, b); }

// a < b with a relative margin.
inline bool strictly_lt(double a, double b) { return a < b - tol_scale(a, b); }

inline bool approx_eq(double a, double b) {
  return std::fabs(a - b) <= tol_scale(a, b);
}

}  // namespace metfact
