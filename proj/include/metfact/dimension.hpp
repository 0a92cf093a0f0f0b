#pragma once

// Covering and packing numbers of finite metric spaces and the log-log
// estimators built on them.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "metfact/core.hpp"
#include "metfact/space.hpp"

namespace metfact {

enum class CountMode { Exact, Greedy, Auto };

// Exact searches are bitmask branch and bound over at most this many points.
inline constexpr std::size_t kExactCapacity = 20;

// Least number of closed r-balls with centres in X covering X.
// Greedy picks the ball covering most uncovered points (lowest index on
// ties) and is an upper bound. Auto is exact up to kExactCapacity.
std::size_t covering_number(const FinMetricSpace& m, double r, CountMode mode = CountMode::Auto);
// Same, for the subspace on `points` (centres restricted to it as well).
std::size_t covering_number(const FinMetricSpace& m, const IndexSet& points, double r,
                            CountMode mode = CountMode::Auto);

// Largest r-separated subset (pairwise distances >= r). Greedy scans in
// label order and is a lower bound.
std::size_t packing_number(const FinMetricSpace& m, double r, CountMode mode = CountMode::Auto);

struct ScaleProfile {
  std::vector<double> scales;  // decreasing
  std::vector<std::size_t> counts;
  std::vector<std::size_t> packing;
};
ScaleProfile scale_profile(const FinMetricSpace& m, std::vector<double> scales,
                           CountMode mode = CountMode::Auto);

struct SlopeEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  std::vector<double> residuals;
};

// Least-squares slope of log N(r) against -log r. DomainError unless there
// are >= 3 distinct positive scales with max/min >= 4. A single point
// returns slope 0.
SlopeEstimate ubdim_estimate(const FinMetricSpace& m, const std::vector<double>& scales,
                             CountMode mode = CountMode::Auto);
// Same regression on packing numbers.
SlopeEstimate packing_slope_estimate(const FinMetricSpace& m, const std::vector<double>& scales,
                                     CountMode mode = CountMode::Auto);

struct AssouadEstimate {
  double value = 0.0;
  std::size_t center = 0;
  double big_radius = 0.0;
  double small_radius = 0.0;
  std::size_t count = 0;
};
// max over x and (R, r) of log N(B(x, R), r) / log(R / r), i.e. the
// doubling exponent with the constant fixed to 1. DomainError on an empty
// pair list or a pair with r >= R or r <= 0.
AssouadEstimate adim_estimate(const FinMetricSpace& m,
                              const std::vector<std::pair<double, double>>& scale_pairs,
                              CountMode mode = CountMode::Auto);

// Powers of base (3 or 2 in practice) strictly inside (min positive
// distance, diameter), decreasing.
std::vector<double> default_scales(const FinMetricSpace& m, double base = 2.0);

// Pairs (R, r) of distance-spectrum values with R / r >= sqrt(diam / delta):
// the upper half of the available log-scale range, where fixing the
// doubling constant to 1 distorts least.
std::vector<std::pair<double, double>> standard_assouad_pairs(const FinMetricSpace& m);

// Single-linkage merge heights as an ultrametric (the subdominant
// ultrametric). Kruskal order, ties broken by (i, j).
FinMetricSpace single_linkage_ultrametric(const FinMetricSpace& m);

// The single-linkage tree with its k distinct merge heights remapped, in
// increasing order, to 2^-(2^k), ..., 2^-(2^1). CapacityError for k > 9,
// where the smallest value would leave the normal double range.
FinMetricSpace sparse_ultrametric(const FinMetricSpace& m);

struct ProductCoveringRow {
  double scale = 0.0;
  std::size_t product = 0;
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t bound = 0;
};
struct ProductCoveringReport {
  ProductNorm norm = ProductNorm::Linf;
  std::vector<ProductCoveringRow> rows;
  bool passed = true;
};
// Linf: N_prod(r) <= N_1(r) N_2(r). L1: N_prod(r) <= N_1(r/2) N_2(r/2).
// All counts exact; CapacityError when the product exceeds kExactCapacity.
ProductCoveringReport product_covering_check(const FinMetricSpace& m1, const FinMetricSpace& m2,
                                             ProductNorm norm, const std::vector<double>& scales);

}  // namespace metfact
