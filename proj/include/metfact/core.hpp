#pragma once

// Finite metric spaces: axiom validation, distance to a subset, metric
// neighbourhoods of a subset, products, joins and the two distances
// between metrics (sup-distance and the ultrametric distance over S).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "metfact/scale_set.hpp"
#include "metfact/space.hpp"

namespace metfact {

// Most violated condition found by validate_metric. Indices refer to the
// validated space. For triangle checks (i, j, k) means
// d(i,j) vs d(i,k) (+ or max) d(k,j); slack < 0 means violated.
struct Violation {
  enum class Kind { None, Diagonal, Asymmetry, ZeroDistance, Triangle, StrongTriangle };
  Kind kind = Kind::None;
  std::size_t i = 0, j = 0, k = 0;
  double slack = 0.0;

  std::string describe(const FinMetricSpace& m) const;
};

struct ValidationReport {
  bool is_metric = false;
  bool is_ultrametric = false;
  Violation worst_violation;  // metric axioms first, then the strong triangle
};

ValidationReport validate_metric(const FinMetricSpace& m);
bool is_metric(const FinMetricSpace& m);
bool is_ultrametric(const FinMetricSpace& m);
// DomainError naming the worst violation unless m is a metric (ultrametric).
void require_metric(const FinMetricSpace& m, const char* what);
void require_ultrametric(const FinMetricSpace& m, const char* what);

// rho_A(x) = min_{a in A} d(x, a). DomainError on empty A.
double dist_to_set(const FinMetricSpace& m, const IndexSet& subset, std::size_t x);
// rho_A for every point of m.
std::vector<double> dist_to_set_all(const FinMetricSpace& m, const IndexSet& subset);

struct Neighborhoods {
  IndexSet closed;      // {x : rho_A(x) <= eps}
  IndexSet open;        // {x : rho_A(x) <  eps}
  IndexSet far;         // complement of open: {x : rho_A(x) >= eps}
};
Neighborhoods set_neighborhoods(const FinMetricSpace& m, const IndexSet& subset, double eps);

enum class ProductNorm { L1, Linf };

// Points are pairs (x, y), labelled "x|y", ordered x-major.
FinMetricSpace product_metric(const FinMetricSpace& m1, const FinMetricSpace& m2,
                              ProductNorm norm);

// Pointwise maximum of two metrics on the same labels.
FinMetricSpace join_metrics(const FinMetricSpace& d, const FinMetricSpace& e);

// max over pairs of |d(x,y) - e(x,y)|.
double sup_distance(const FinMetricSpace& d, const FinMetricSpace& e);

// Least eps in S \ {0} with d <= e v eps and e <= d v eps. Entries that
// agree up to the shared tolerance count as equal. DomainError for a
// non-characteristic S or non-ultrametric inputs.
ExtReal ultra_distance(const FinMetricSpace& d, const FinMetricSpace& e, const ScaleSet& scales);

inline ExtReal scale_ceiling(const ScaleSet& scales, double t) { return scales.ceiling(t); }

struct SeparationDensity {
  bool is_h_separated = false;
  bool is_eta_dense = false;
};
// A is h-separated if distinct members are >= h apart; eta-dense if every
// point lies within eta of A.
SeparationDensity separated_and_dense(const FinMetricSpace& m, const IndexSet& subset,
                                      double h, double eta);

// Every entry v of m lies in S (scale_ceiling(S, v) = v).
bool values_in_scale_set(const FinMetricSpace& m, const ScaleSet& scales);

// Replaces every entry by its ceiling in S. For an ultrametric input and a
// characteristic S the result is again an ultrametric, now S-valued.
FinMetricSpace snap_to_scale(const FinMetricSpace& m, const ScaleSet& scales);

}  // namespace metfact
