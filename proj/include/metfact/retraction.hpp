#pragma once

// Retractions r: X -> F that fix F pointwise.
//
// retract_engelking follows the scale decomposition: closed neighbourhoods
// V_i = {rho_F <= 2^-(i+1)}, annuli U_0 = X \ V_0 and U_i = V_(i-1) \ V_i,
// a partition of each annulus into pieces of diameter <= 2^-i, nested
// maximal 2^-i-separated nets P_i of F, and every piece sent to a net point
// near the piece's closest point of F.
//
// retract_bdhm works on ultrametrics: r(x) is the first point, in label
// order, of st(F, x) = {a in F : d(x, a) <= tau * rho_F(x)}.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "metfact/space.hpp"

namespace metfact {

struct EngelkingPiece {
  std::size_t annulus = 0;
  IndexSet members;
  std::size_t o = 0;  // point of the piece closest to F
  std::size_t a = 0;  // closest point of F to the piece
  std::size_t p = 0;  // net point of P_annulus the piece maps to
  double reach = 0.0; // R_s = min over piece x F of d
};

struct EngelkingTrace {
  // Active scales are 0..last_scale.
  int last_scale = -1;
  std::vector<IndexSet> neighborhoods;  // V_i
  std::vector<IndexSet> annuli;         // U_i
  std::vector<IndexSet> nets;           // P_i, subsets of F
  std::vector<EngelkingPiece> pieces;
  std::vector<int> annulus_of;          // per base point, -1 for points of F
};

enum class RetractionMethod { Engelking, Bdhm };

struct Retraction {
  std::vector<std::size_t> mapping;  // base index -> base index in F
  RetractionMethod method = RetractionMethod::Engelking;
  double tau = 0.0;                  // BDHM only
  std::optional<EngelkingTrace> trace;
};

// Annulus index M(x) of a point off F: 0 if rho > 1/2, else the i >= 1
// with 2^-(i+1) < rho <= 2^-i.
int annulus_index(double rho);

// DomainError on empty F.
Retraction retract_engelking(const FinMetricSpace& m, const IndexSet& subset);

// DomainError if m is not an ultrametric, F is empty or tau <= 1.
Retraction retract_bdhm(const FinMetricSpace& m, const IndexSet& subset, double tau);

struct Certificate {
  std::string name;
  bool passed = true;
  // Smallest (bound - observed) over all checked instances; negative on failure.
  double worst_slack = 0.0;
  std::string counterexample;  // first failure, human readable
};

struct CertificateReport {
  std::vector<Certificate> certificates;
  bool all_passed() const;
  const Certificate* find(const std::string& name) const;
};

// Checks every certificate applicable to r.method. Engelking: fixes F,
// range in F, idempotence, additive and 17x displacement bounds, and, with
// a trace, net containment r(E(F, 2^-i)) in P_i plus all trace invariants.
// BDHM: fixes F, range, idempotence, tau^2-Lipschitz, tau displacement and
// eps-separation of r(E(F, eps)) over eps_grid (the distance spectrum when
// eps_grid is empty).
CertificateReport verify_retraction(const FinMetricSpace& m, const IndexSet& subset,
                                    const Retraction& r, const std::vector<double>& eps_grid = {});

}  // namespace metfact
