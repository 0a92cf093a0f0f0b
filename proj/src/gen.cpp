#include "metfact/gen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "metfact/core.hpp"
#include "metfact/error.hpp"
#include "metfact/rng.hpp"
#include "metfact/tolerance.hpp"

namespace metfact::gen {
namespace {

void require_count(std::size_t n, const char* what) {
  if (n == 0) throw DomainError(std::string(what) + " must be positive");
}

void require_step(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("step must be positive and finite");
}

}  // namespace

FinMetricSpace cantor(int depth) {
  if (depth < 0) throw DomainError("Cantor depth must be non-negative");
  if (depth > kMaxCantorDepth) {
    throw CapacityError("Cantor depth " + std::to_string(depth) + " exceeds " +
                        std::to_string(kMaxCantorDepth));
  }
  const std::size_t n = std::size_t{1} << depth;
  // Left endpoints in units of 3^-depth: sum of 2 * 3^(depth - i) over chosen digits.
  std::vector<long long> units(n, 0);
  std::vector<std::string> labels(n, "c");
  for (std::size_t code = 0; code < n; ++code) {
    long long weight = 1;
    for (int i = 0; i < depth; ++i) weight *= 3;
    for (int i = 0; i < depth; ++i) {
      weight /= 3;
      const bool right = (code >> (depth - 1 - i)) & 1u;
      labels[code] += right ? '1' : '0';
      if (right) units[code] += 2 * weight;
    }
  }
  double scale = 1.0;
  for (int i = 0; i < depth; ++i) scale *= 3.0;
  std::vector<double> flat(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      flat[i * n + j] = static_cast<double>(std::llabs(units[i] - units[j])) / scale;
  return FinMetricSpace(std::move(labels), std::move(flat));
}

FinMetricSpace line(std::size_t n, double step) {
  require_count(n, "line size");
  require_step(step);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  std::vector<double> flat(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      flat[i * n + j] = static_cast<double>(i > j ? i - j : j - i) * step;
  return FinMetricSpace(std::move(labels), std::move(flat));
}

FinMetricSpace grid(std::size_t n, std::size_t m, double step) {
  require_count(n, "grid rows");
  require_count(m, "grid columns");
  require_step(step);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) labels.push_back("g" + std::to_string(i) + "_" + std::to_string(j));
  const std::size_t k = n * m;
  std::vector<double> flat(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const double di = static_cast<double>(a / m) - static_cast<double>(b / m);
      const double dj = static_cast<double>(a % m) - static_cast<double>(b % m);
      flat[a * k + b] = step * std::sqrt(di * di + dj * dj);
    }
  }
  return FinMetricSpace(std::move(labels), std::move(flat));
}

FinMetricSpace random_ultra(std::size_t n, std::uint64_t seed, double height_base) {
  require_count(n, "ultrametric size");
  if (!(height_base > 1.0)) throw DomainError("height base must exceed 1");
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<double> flat(n * n, 0.0);
  std::function<void(std::size_t, std::size_t, int)> split = [&](std::size_t lo, std::size_t hi,
                                                                 int level) {
    const std::size_t size = hi - lo;
    if (size < 2) return;
    const std::size_t cut = lo + 1 + rng.below(size - 1);
    const double height = std::pow(height_base, -static_cast<double>(level));
    for (std::size_t a = lo; a < cut; ++a) {
      for (std::size_t b = cut; b < hi; ++b) {
        flat[order[a] * n + order[b]] = height;
        flat[order[b] * n + order[a]] = height;
      }
    }
    split(lo, cut, level + 1);
    split(cut, hi, level + 1);
  };
  split(0, n, 0);

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("u" + std::to_string(i));
  return FinMetricSpace(std::move(labels), std::move(flat));
}

FinMetricSpace random_metric(std::size_t n, std::uint64_t seed, std::size_t ambient_dim) {
  require_count(n, "metric size");
  require_count(ambient_dim, "ambient dimension");
  Rng rng(seed);
  std::vector<double> coords(n * ambient_dim);
  for (double& c : coords) c = rng.uniform();
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < ambient_dim; ++k) {
        const double diff = coords[i * ambient_dim + k] - coords[j * ambient_dim + k];
        sq += diff * diff;
      }
      flat[i * n + j] = flat[j * n + i] = std::sqrt(sq);
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("r" + std::to_string(i));
  return FinMetricSpace(std::move(labels), std::move(flat));
}

FinMetricSpace generate(const GenSpec& spec) {
  return std::visit(
      [](const auto& s) -> FinMetricSpace {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Cantor>) {
          return cantor(s.depth);
        } else if constexpr (std::is_same_v<T, Line>) {
          return line(s.n, s.step);
        } else if constexpr (std::is_same_v<T, Grid>) {
          return grid(s.n, s.m, s.step);
        } else if constexpr (std::is_same_v<T, RandomUltra>) {
          return random_ultra(s.n, s.seed, s.height_base);
        } else {
          return random_metric(s.n, s.seed, s.ambient_dim);
        }
      },
      spec);
}

std::map<std::string, std::string> cantor_code(const FinMetricSpace& m) {
  require_ultrametric(m, "cantor_code input");
  const std::size_t n = m.size();
  std::vector<double> radii{0.0};
  for (double v : m.distance_spectrum()) radii.push_back(v);

  std::set<std::string> unique;
  for (std::size_t x = 0; x < n; ++x) {
    for (double t : radii) {
      std::string ball(n, '0');
      for (std::size_t y = 0; y < n; ++y)
        if (approx_le(m(x, y), t)) ball[y] = '1';
      unique.insert(std::move(ball));
    }
  }
  // Larger balls first, then by membership pattern.
  std::vector<std::string> balls(unique.begin(), unique.end());
  std::stable_sort(balls.begin(), balls.end(), [](const std::string& a, const std::string& b) {
    const auto ca = std::count(a.begin(), a.end(), '1');
    const auto cb = std::count(b.begin(), b.end(), '1');
    if (ca != cb) return ca > cb;
    return a > b;
  });

  std::map<std::string, std::string> codes;
  for (std::size_t x = 0; x < n; ++x) {
    std::string code;
    code.reserve(balls.size());
    for (const auto& ball : balls) code += ball[x];
    codes[m.label(x)] = std::move(code);
  }
  return codes;
}

}  // namespace metfact::gen
