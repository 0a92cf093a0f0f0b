#pragma once

// The embedding Phi(x) = (r(x), pi(x)) of X into F x X/F and the two
// extension operators built by pulling product metrics back along it:
//   Xi(d)    = Phi^*(d x_1 v)    (sum of the factors)
//   Sigma(d) = Phi^*(d x_inf v)  (max of the factors)

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metfact/quotient.hpp"
#include "metfact/retraction.hpp"
#include "metfact/scale_set.hpp"
#include "metfact/space.hpp"

namespace metfact {

struct FactorizationOptions {
  // Defaults to BDHM when the auxiliary metric is an ultrametric.
  std::optional<RetractionMethod> method;
  double tau = 2.0;
  // Factor metric on the quotient labels; defaults to the quotient metric.
  std::optional<FinMetricSpace> factor;
};

class FactorizationContext {
 public:
  // lambda drives both r and pi. Throws DomainError on empty F or an
  // invalid lambda/factor, StructuralError if the factor labels differ
  // from the quotient labels.
  FactorizationContext(FinMetricSpace lambda, IndexSet subset,
                       FactorizationOptions options = {});

  const FinMetricSpace& base() const { return base_; }
  const IndexSet& subset() const { return subset_; }
  const Retraction& retraction() const { return retraction_; }
  const QuotientSpace& quotient() const { return quotient_; }
  const FinMetricSpace& factor() const { return factor_; }

  // Same context with another factor metric (for instance a truncation).
  FactorizationContext with_factor(FinMetricSpace v) const;

  // Labels of F in base order; extension inputs must carry these labels.
  std::vector<std::string> subset_labels() const { return base_.labels_of(subset_); }

 private:
  FactorizationContext() = default;

  FinMetricSpace base_;
  IndexSet subset_;
  Retraction retraction_;
  QuotientSpace quotient_;
  FinMetricSpace factor_;
};

// Phi(x) as (base index of r(x), quotient index of pi(x)).
using Embedding = std::vector<std::pair<std::size_t, std::size_t>>;
Embedding embed_phi(const FactorizationContext& ctx);

struct Pullback {
  std::vector<double> matrix;  // n x n row-major
  bool is_metric = false;      // false: zero off-diagonal entries (pseudo-metric)
};
// (f^* m)(x, y) = m(f(x), f(y)). StructuralError if f leaves m's index range.
Pullback pullback(const std::vector<std::size_t>& f, const FinMetricSpace& target);

// Xi(d)(x, y) = d(r x, r y) + v(pi x, pi y). d must live on the labels of F
// (any order). StructuralError on label mismatch, DomainError if d is not
// a metric.
FinMetricSpace extend_l1(const FactorizationContext& ctx, const FinMetricSpace& d);

// Sigma(d)(x, y) = max(d(r x, r y), v(pi x, pi y)). With scales set, the
// factor must be an S-valued ultrametric (DomainError otherwise), which
// makes Sigma map S-valued ultrametrics on F to S-valued ultrametrics on X.
FinMetricSpace extend_linf(const FactorizationContext& ctx, const FinMetricSpace& d,
                           const std::optional<ScaleSet>& scales = std::nullopt);

// min(v, eta) pointwise. DomainError for eta <= 0.
FinMetricSpace truncate_factor(const FinMetricSpace& v, double eta);

}  // namespace metfact
