#pragma once

// Test-side generators and brute-force oracles. Nothing here calls into the
// library's algorithms; spaces are built from raw matrices.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "metfact/rng.hpp"
#include "metfact/space.hpp"

namespace testing_support {

using metfact::FinMetricSpace;
using metfact::IndexSet;
using metfact::Rng;

inline std::vector<std::string> labels(std::size_t n, const std::string& prefix = "p") {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline FinMetricSpace from_rows(std::vector<std::string> names,
                                const std::vector<std::vector<double>>& rows) {
  return FinMetricSpace(std::move(names), rows);
}

// Points on a line at the given coordinates.
inline FinMetricSpace on_line(const std::vector<double>& xs, const std::string& prefix = "x") {
  std::vector<std::vector<double>> rows(xs.size(), std::vector<double>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) rows[i][j] = std::fabs(xs[i] - xs[j]);
  return FinMetricSpace(labels(xs.size(), prefix), rows);
}

// Shortest-path closure of random positive edge weights: always a metric,
// usually far from Euclidean.
inline FinMetricSpace shortest_path_metric(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = scale * (0.05 + rng.uniform());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return FinMetricSpace(labels(n), d);
}

// Minimax-path closure (the subdominant ultrametric) of a matrix.
inline std::vector<std::vector<double>> minimax_closure(std::vector<std::vector<double>> d) {
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], std::max(d[i][k], d[k][j]));
  return d;
}

// Random ultrametric whose values are powers of 2 between 2^-levels and 1.
inline FinMetricSpace dyadic_ultrametric(Rng& rng, std::size_t n, int levels = 6,
                                         const std::string& prefix = "p") {
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d[i][j] = d[j][i] = std::ldexp(1.0, -static_cast<int>(rng.below(levels + 1)));
  return FinMetricSpace(labels(n, prefix), minimax_closure(d));
}

inline IndexSet random_subset(Rng& rng, std::size_t n) {
  IndexSet s;
  for (std::size_t i = 0; i < n; ++i)
    if (rng.uniform() < 0.35) s.push_back(i);
  if (s.empty()) s.push_back(rng.below(n));
  return s;
}

inline std::vector<std::vector<double>> rows_of(const FinMetricSpace& m) {
  std::vector<std::vector<double>> out(m.size(), std::vector<double>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out[i][j] = m(i, j);
  return out;
}

inline bool close(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline bool brute_is_metric(const FinMetricSpace& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m(i, i) != 0.0) return false;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i != j && !(m(i, j) > 0.0)) return false;
      if (!close(m(i, j), m(j, i))) return false;
      for (std::size_t k = 0; k < m.size(); ++k)
        if (m(i, j) > m(i, k) + m(k, j) + 1e-9 * std::max(1.0, m(i, j))) return false;
    }
  }
  return true;
}

inline bool brute_is_ultrametric(const FinMetricSpace& m) {
  if (!brute_is_metric(m)) return false;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      for (std::size_t k = 0; k < m.size(); ++k)
        if (m(i, j) > std::max(m(i, k), m(k, j)) + 1e-9 * std::max(1.0, m(i, j))) return false;
  return true;
}

// Least number of closed r-balls (centres among `points`) covering
// `points`, by enumerating centre subsets in order of size.
inline std::size_t brute_covering(const FinMetricSpace& m, const IndexSet& points, double r) {
  const std::size_t n = points.size();
  if (n == 0) return 0;
  std::vector<std::uint32_t> ball(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (m(points[a], points[b]) <= r) ball[a] |= 1u << b;
  const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1;
  std::size_t best = n;
  for (std::uint32_t mask = 1; mask <= all && mask != 0; ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    std::uint32_t cov = 0;
    for (std::size_t a = 0; a < n; ++a)
      if (mask >> a & 1u) cov |= ball[a];
    if (cov == all) best = size;
  }
  return best;
}

inline std::size_t brute_covering(const FinMetricSpace& m, double r) {
  IndexSet all(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) all[i] = i;
  return brute_covering(m, all, r);
}

// Largest subset with pairwise distances >= r.
inline std::size_t brute_packing(const FinMetricSpace& m, double r) {
  const std::size_t n = m.size();
  std::size_t best = n ? 1 : 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size <= best) continue;
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = a + 1; b < n && ok; ++b)
        if ((mask >> a & 1u) && (mask >> b & 1u) && m(a, b) < r) ok = false;
    if (ok) best = size;
  }
  return best;
}

inline double brute_rho(const FinMetricSpace& m, const IndexSet& subset, std::size_t x) {
  double best = std::numeric_limits<double>::infinity();
  for (auto a : subset) best = std::min(best, m(x, a));
  return best;
}

// Ordinary least-squares slope of ys against xs.
inline double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace testing_support
