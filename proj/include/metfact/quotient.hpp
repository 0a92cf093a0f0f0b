#pragma once

// Hausdorff metric quotient X/F: the subset F collapses to one point theta
// and the remaining points keep d(x,y) unless a detour through F is shorter.

#include <string>
#include <vector>

#include "metfact/space.hpp"

namespace metfact {

struct QuotientSpace {
  std::vector<std::string> base_labels;
  IndexSet subset;            // F, as indices into the base space
  std::string theta;          // fresh label for the collapsed point
  FinMetricSpace space;       // on (X \ F) in base order, then theta last
  std::vector<std::size_t> projection;  // base index -> index into space

  std::size_t theta_index() const { return space.size() - 1; }
};

// Reserved label "__theta__", suffixed until it clashes with nothing in labels.
std::string fresh_theta_label(const std::vector<std::string>& labels);

// DomainError on empty F.
QuotientSpace quotient(const FinMetricSpace& m, const IndexSet& subset);

struct QuotientLawReport {
  bool ok = true;
  std::vector<std::string> violations;  // one line per offending pair/triple
};

// Re-derives every quotient invariant from (m, F): projection shape,
// d~(x, theta) = rho_F(x), the min-formula, metric axioms on d~, and the
// 1-Lipschitz projection. Stops collecting after max_violations lines.
QuotientLawReport check_quotient_laws(const QuotientSpace& q, const FinMetricSpace& m,
                                      const IndexSet& subset, std::size_t max_violations = 16);

}  // namespace metfact
