#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "metfact/space.hpp"

namespace metfact::gen {

struct Cantor {
  int depth = 1;
};
struct Line {
  std::size_t n = 1;
  double step = 1.0;
};
struct Grid {
  std::size_t n = 1;
  std::size_t m = 1;
  double step = 1.0;
};
struct RandomUltra {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  double height_base = 2.0;
};
struct RandomMetric {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::size_t ambient_dim = 2;
};

using GenSpec = std::variant<Cantor, Line, Grid, RandomUltra, RandomMetric>;

inline constexpr int kMaxCantorDepth = 12;

// Pure function of the spec. Throws CapacityError for depth > 12 and
// DomainError for zero sizes or non-positive steps/bases <= 1.
FinMetricSpace generate(const GenSpec& spec);

// Left endpoints of the 2^k depth-k middle-thirds intervals, labelled by
// their ternary-choice bit strings.
FinMetricSpace cantor(int depth);
// Points 0, step, ..., (n-1) step on a line.
FinMetricSpace line(std::size_t n, double step);
// n x m lattice with spacing step, Euclidean distance.
FinMetricSpace grid(std::size_t n, std::size_t m, double step);
// Ultrametric read off a random recursive bipartition tree; the split at
// depth l sits at height base^-l.
FinMetricSpace random_ultra(std::size_t n, std::uint64_t seed, double height_base);
// Euclidean distances of n uniform points in the unit cube of dimension dim.
FinMetricSpace random_metric(std::size_t n, std::uint64_t seed, std::size_t ambient_dim);

// One bit per distinct closed ball of the ultrametric m: bit b of x's code
// is 1 iff x lies in ball b. Distinct points get distinct codes.
// DomainError for non-ultrametric input.
std::map<std::string, std::string> cantor_code(const FinMetricSpace& m);

}  // namespace metfact::gen
