#include "metfact/dimension.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "metfact/error.hpp"
#include "metfact/simd/kernels.hpp"
#include "metfact/tolerance.hpp"

namespace metfact {
namespace {

IndexSet all_points(std::size_t n) {
  IndexSet out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

// Rows of the subspace on `points`, gathered into a dense matrix.
std::vector<double> gather(const FinMetricSpace& m, const IndexSet& points) {
  const std::size_t k = points.size();
  std::vector<double> out(k * k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) out[a * k + b] = m(points[a], points[b]);
  return out;
}

// Closed (or open) r-ball masks over a dense k x k matrix.
std::vector<std::vector<std::uint64_t>> ball_masks(const std::vector<double>& dense, std::size_t k,
                                                   double r, bool closed) {
  const auto& K = simd::kernels();
  const std::size_t words = (k + 63) / 64;
  std::vector<std::vector<std::uint64_t>> masks(k, std::vector<std::uint64_t>(words));
  for (std::size_t a = 0; a < k; ++a) {
    if (closed) {
      K.le_mask(dense.data() + a * k, r, masks[a].data(), k);
    } else {
      K.lt_mask(dense.data() + a * k, r, masks[a].data(), k);
    }
  }
  return masks;
}

std::uint32_t narrow(const std::vector<std::uint64_t>& words) {
  return static_cast<std::uint32_t>(words.empty() ? 0 : words[0]);
}

class ExactCover {
 public:
  ExactCover(std::vector<std::uint32_t> balls, std::size_t upper) : balls_(std::move(balls)), best_(upper) {}

  std::size_t solve(std::uint32_t universe) {
    search(universe, 0);
    return best_;
  }

 private:
  void search(std::uint32_t uncovered, std::size_t used) {
    if (uncovered == 0) {
      best_ = std::min(best_, used);
      return;
    }
    int widest = 0;
    for (auto b : balls_) widest = std::max(widest, std::popcount(b & uncovered));
    const std::size_t need = (std::popcount(uncovered) + widest - 1) / widest;
    if (used + need >= best_) return;

    // Branch on the uncovered point contained in the fewest balls.
    int pivot = -1, fewest = std::numeric_limits<int>::max();
    for (std::uint32_t rest = uncovered; rest; rest &= rest - 1) {
      const int p = std::countr_zero(rest);
      int holders = 0;
      for (auto b : balls_) holders += (b >> p) & 1u;
      if (holders < fewest) {
        fewest = holders;
        pivot = p;
      }
    }
    std::vector<std::uint32_t> options;
    for (auto b : balls_)
      if ((b >> pivot) & 1u) options.push_back(b);
    std::stable_sort(options.begin(), options.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::popcount(a & uncovered) > std::popcount(b & uncovered);
    });
    for (auto b : options) search(uncovered & ~b, used + 1);
  }

  std::vector<std::uint32_t> balls_;
  std::size_t best_;
};

class ExactPacking {
 public:
  explicit ExactPacking(std::vector<std::uint32_t> conflicts) : conflicts_(std::move(conflicts)) {}

  std::size_t solve(std::uint32_t candidates, std::size_t lower) {
    best_ = lower;
    search(candidates, 0);
    return best_;
  }

 private:
  void search(std::uint32_t cand, std::size_t size) {
    if (cand == 0) {
      best_ = std::max(best_, size);
      return;
    }
    if (size + static_cast<std::size_t>(std::popcount(cand)) <= best_) return;
    const int v = std::countr_zero(cand);
    const std::uint32_t bit = 1u << v;
    const std::uint32_t near = conflicts_[v] & cand & ~bit;
    search(cand & ~near & ~bit, size + 1);
    if (near != 0) search(cand & ~bit, size);
  }

  std::vector<std::uint32_t> conflicts_;
  std::size_t best_ = 0;
};

std::size_t greedy_cover(const std::vector<double>& dense, std::size_t k, double r) {
  const auto masks = ball_masks(dense, k, r, true);
  const std::size_t words = (k + 63) / 64;
  std::vector<std::uint64_t> uncovered(words, ~std::uint64_t{0});
  if (k % 64) uncovered.back() = (std::uint64_t{1} << (k % 64)) - 1;
  std::size_t remaining = k, used = 0;
  while (remaining > 0) {
    std::size_t best = 0;
    int best_gain = -1;
    for (std::size_t a = 0; a < k; ++a) {
      int gain = 0;
      for (std::size_t w = 0; w < words; ++w) gain += std::popcount(masks[a][w] & uncovered[w]);
      if (gain > best_gain) {
        best_gain = gain;
        best = a;
      }
    }
    for (std::size_t w = 0; w < words; ++w) uncovered[w] &= ~masks[best][w];
    remaining -= static_cast<std::size_t>(best_gain);
    ++used;
  }
  return used;
}

std::size_t greedy_pack(const std::vector<double>& dense, std::size_t k, double r) {
  std::vector<std::size_t> chosen;
  for (std::size_t a = 0; a < k; ++a) {
    const bool far = std::all_of(chosen.begin(), chosen.end(),
                                 [&](std::size_t c) { return dense[a * k + c] >= r; });
    if (far) chosen.push_back(a);
  }
  return chosen.size();
}

bool use_exact(CountMode mode, std::size_t k) {
  if (mode == CountMode::Exact) {
    if (k > kExactCapacity) {
      throw CapacityError("exact counting supports at most " + std::to_string(kExactCapacity) +
                          " points, got " + std::to_string(k));
    }
    return true;
  }
  return mode == CountMode::Auto && k <= kExactCapacity;
}

void require_radius(double r) {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
}

std::size_t cover_dense(const std::vector<double>& dense, std::size_t k, double r, CountMode mode) {
  if (k == 0) return 0;
  const std::size_t upper = greedy_cover(dense, k, r);
  if (!use_exact(mode, k)) return upper;
  const auto masks = ball_masks(dense, k, r, true);
  std::vector<std::uint32_t> balls;
  for (const auto& mk : masks) balls.push_back(narrow(mk));
  const std::uint32_t universe = k == 32 ? ~0u : (1u << k) - 1;
  return ExactCover(std::move(balls), upper).solve(universe);
}

std::vector<double> sorted_scales(std::vector<double> scales) {
  std::sort(scales.begin(), scales.end(), std::greater<>());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  return scales;
}

SlopeEstimate fit(const std::vector<double>& scales, const std::vector<std::size_t>& counts) {
  SlopeEstimate out;
  out.scales = scales;
  out.counts = counts;
  const std::size_t k = scales.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> xs(k), ys(k);
  for (std::size_t a = 0; a < k; ++a) {
    xs[a] = -std::log(scales[a]);
    ys[a] = std::log(static_cast<double>(counts[a]));
    mx += xs[a];
    my += ys[a];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    sxy += (xs[a] - mx) * (ys[a] - my);
    sxx += (xs[a] - mx) * (xs[a] - mx);
  }
  out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  out.intercept = my - out.slope * mx;
  out.residuals.resize(k);
  for (std::size_t a = 0; a < k; ++a) out.residuals[a] = ys[a] - (out.intercept + out.slope * xs[a]);
  return out;
}

std::vector<double> checked_scales(const std::vector<double>& scales) {
  for (double s : scales) require_radius(s);
  auto sorted = sorted_scales(scales);
  if (sorted.size() < 3) throw DomainError("slope estimate needs at least 3 distinct scales");
  if (sorted.front() / sorted.back() < 4.0) {
    throw DomainError("slope estimate needs scales spanning a factor of at least 4");
  }
  return sorted;
}

}  // namespace

std::size_t covering_number(const FinMetricSpace& m, double r, CountMode mode) {
  return covering_number(m, all_points(m.size()), r, mode);
}

std::size_t covering_number(const FinMetricSpace& m, const IndexSet& points, double r,
                            CountMode mode) {
  require_radius(r);
  return cover_dense(gather(m, points), points.size(), r, mode);
}

std::size_t packing_number(const FinMetricSpace& m, double r, CountMode mode) {
  require_radius(r);
  const std::size_t k = m.size();
  if (k == 0) return 0;
  const std::vector<double> dense(m.data().begin(), m.data().end());
  const std::size_t lower = greedy_pack(dense, k, r);
  if (!use_exact(mode, k)) return lower;
  const auto masks = ball_masks(dense, k, r, false);
  std::vector<std::uint32_t> conflicts;
  for (const auto& mk : masks) conflicts.push_back(narrow(mk));
  return ExactPacking(std::move(conflicts)).solve((1u << k) - 1, lower);
}

ScaleProfile scale_profile(const FinMetricSpace& m, std::vector<double> scales, CountMode mode) {
  ScaleProfile out;
  out.scales = sorted_scales(std::move(scales));
  for (double r : out.scales) {
    out.counts.push_back(covering_number(m, r, mode));
    out.packing.push_back(packing_number(m, r, mode));
  }
  return out;
}

SlopeEstimate ubdim_estimate(const FinMetricSpace& m, const std::vector<double>& scales,
                             CountMode mode) {
  if (m.size() <= 1) return SlopeEstimate{};
  const auto sorted = checked_scales(scales);
  std::vector<std::size_t> counts;
  for (double r : sorted) counts.push_back(covering_number(m, r, mode));
  return fit(sorted, counts);
}

SlopeEstimate packing_slope_estimate(const FinMetricSpace& m, const std::vector<double>& scales,
                                     CountMode mode) {
  if (m.size() <= 1) return SlopeEstimate{};
  const auto sorted = checked_scales(scales);
  std::vector<std::size_t> counts;
  for (double r : sorted) counts.push_back(packing_number(m, r, mode));
  return fit(sorted, counts);
}

AssouadEstimate adim_estimate(const FinMetricSpace& m,
                              const std::vector<std::pair<double, double>>& scale_pairs,
                              CountMode mode) {
  if (scale_pairs.empty()) throw DomainError("Assouad estimate needs at least one (R, r) pair");
  for (const auto& [big, small] : scale_pairs) {
    if (!(small > 0.0) || !(small < big)) throw DomainError("each pair needs 0 < r < R");
  }
  AssouadEstimate best;
  bool seen = false;
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (const auto& [big, small] : scale_pairs) {
      IndexSet ball;
      for (std::size_t y = 0; y < m.size(); ++y)
        if (m(x, y) <= big) ball.push_back(y);
      const std::size_t count = covering_number(m, ball, small, mode);
      const double ratio = std::log(static_cast<double>(count)) / std::log(big / small);
      if (!seen || ratio > best.value) best = {ratio, x, big, small, count};
      seen = true;
    }
  }
  return best;
}

std::vector<double> default_scales(const FinMetricSpace& m, double base) {
  if (!(base > 1.0)) throw DomainError("scale base must exceed 1");
  std::vector<double> out;
  const double lo = m.min_positive_distance(), hi = m.diameter();
  if (!(lo > 0.0) || !(hi > lo)) return out;
  const int top = static_cast<int>(std::ceil(std::log(hi) / std::log(base))) + 1;
  for (int j = top;; --j) {
    const double s = std::pow(base, static_cast<double>(j));
    if (s <= lo || approx_eq(s, lo)) break;
    if (s < hi && !approx_eq(s, hi)) out.push_back(s);
  }
  return out;
}

std::vector<std::pair<double, double>> standard_assouad_pairs(const FinMetricSpace& m) {
  const auto spectrum = m.distance_spectrum();
  std::vector<std::pair<double, double>> out;
  if (spectrum.size() < 2) return out;
  const double threshold = std::sqrt(spectrum.back() / spectrum.front());
  for (auto big = spectrum.rbegin(); big != spectrum.rend(); ++big)
    for (double small : spectrum)
      if (small < *big && approx_le(threshold, *big / small)) out.emplace_back(*big, small);
  return out;
}

FinMetricSpace single_linkage_ultrametric(const FinMetricSpace& m) {
  const std::size_t n = m.size();
  struct Edge {
    double w;
    std::size_t i, j;
  };
  std::vector<Edge> edges;
  edges.reserve(n * (n - (n > 0)) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({m(i, j), i, j});
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::vector<std::size_t> cluster(n);
  std::vector<IndexSet> members(n);
  for (std::size_t i = 0; i < n; ++i) {
    cluster[i] = i;
    members[i] = {i};
  }
  std::vector<double> flat(n * n, 0.0);
  for (const auto& e : edges) {
    std::size_t a = cluster[e.i], b = cluster[e.j];
    if (a == b) continue;
    if (members[a].size() < members[b].size()) std::swap(a, b);
    for (auto x : members[a])
      for (auto y : members[b]) flat[x * n + y] = flat[y * n + x] = e.w;
    for (auto y : members[b]) cluster[y] = a;
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
  }
  return FinMetricSpace(m.labels(), std::move(flat));
}

FinMetricSpace sparse_ultrametric(const FinMetricSpace& m) {
  const FinMetricSpace tree = single_linkage_ultrametric(m);
  const auto heights = tree.distance_spectrum();
  const std::size_t k = heights.size();
  if (k > 9) {
    throw CapacityError("sparse ultrametric supports at most 9 distinct merge heights, got " +
                        std::to_string(k));
  }
  std::vector<double> flat(tree.data().begin(), tree.data().end());
  for (double& v : flat) {
    if (v == 0.0) continue;
    // Grouped spectrum: the group is the last representative not above v.
    std::size_t g = 0;
    while (g + 1 < k && (heights[g + 1] <= v || approx_eq(heights[g + 1], v))) ++g;
    v = std::ldexp(1.0, -(1 << (k - g)));
  }
  return FinMetricSpace(m.labels(), std::move(flat));
}

ProductCoveringReport product_covering_check(const FinMetricSpace& m1, const FinMetricSpace& m2,
                                             ProductNorm norm, const std::vector<double>& scales) {
  if (m1.size() * m2.size() > kExactCapacity) {
    throw CapacityError("product of " + std::to_string(m1.size()) + " x " +
                        std::to_string(m2.size()) + " points exceeds exact capacity");
  }
  const FinMetricSpace product = product_metric(m1, m2, norm);
  ProductCoveringReport report;
  report.norm = norm;
  for (double r : sorted_scales(scales)) {
    require_radius(r);
    ProductCoveringRow row;
    row.scale = r;
    const double factor_r = norm == ProductNorm::Linf ? r : r / 2.0;
    row.product = covering_number(product, r, CountMode::Exact);
    row.first = covering_number(m1, factor_r, CountMode::Exact);
    row.second = covering_number(m2, factor_r, CountMode::Exact);
    row.bound = row.first * row.second;
    report.passed = report.passed && row.product <= row.bound;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace metfact
