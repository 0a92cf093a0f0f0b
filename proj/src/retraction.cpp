#include "metfact/retraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metfact/core.hpp"
#include "metfact/error.hpp"
#include "metfact/tolerance.hpp"

namespace metfact {
namespace {

double dyadic(int i) { return std::ldexp(1.0, -i); }

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Greedy maximal h-separated extension of `net` inside `pool`, scanning
// pool in index order.
IndexSet extend_net(IndexSet net, const FinMetricSpace& m, const IndexSet& pool, double h) {
  auto in_net = membership(net, m.size());
  for (auto a : pool) {
    if (in_net[a]) continue;
    const bool separated =
        std::all_of(net.begin(), net.end(), [&](std::size_t p) { return m(a, p) >= h; });
    if (separated) {
      net.push_back(a);
      in_net[a] = true;
    }
  }
  std::sort(net.begin(), net.end());
  return net;
}

Retraction identity_on(const FinMetricSpace& m, RetractionMethod method) {
  Retraction r;
  r.method = method;
  r.mapping.resize(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) r.mapping[x] = x;
  return r;
}

class CertificateBuilder {
 public:
  explicit CertificateBuilder(std::string name) { cert_.name = std::move(name); }

  // Records bound - observed; fails unless observed <= bound up to tolerance.
  void bound(double observed, double bound, const std::string& where) {
    const double slack = bound - observed;
    if (!seen_ || slack < cert_.worst_slack) cert_.worst_slack = slack;
    seen_ = true;
    if (!approx_le(observed, bound) && cert_.passed) {
      cert_.passed = false;
      cert_.counterexample = where + ": observed " + num(observed) + " > bound " + num(bound);
    }
  }

  // Boolean condition; a failure counts as slack -1.
  void require(bool ok, const std::string& where) {
    if (!seen_) cert_.worst_slack = 0.0;
    seen_ = true;
    if (!ok) {
      cert_.worst_slack = std::min(cert_.worst_slack, -1.0);
      if (cert_.passed) {
        cert_.passed = false;
        cert_.counterexample = where;
      }
    }
  }

  Certificate done() { return std::move(cert_); }

 private:
  Certificate cert_;
  bool seen_ = false;
};

std::string q(const FinMetricSpace& m, std::size_t x) { return "'" + m.label(x) + "'"; }

void check_trace(const FinMetricSpace& m, const IndexSet& subset, const Retraction& r,
                 const std::vector<double>& rho, CertificateReport& report) {
  const EngelkingTrace& t = *r.trace;
  const std::size_t n = m.size();
  const auto in_f = membership(subset, n);
  const int last = t.last_scale;

  const bool shaped = last >= 0 && t.neighborhoods.size() == static_cast<std::size_t>(last) + 1 &&
                      t.annuli.size() == t.neighborhoods.size() &&
                      t.nets.size() == t.neighborhoods.size() && t.annulus_of.size() == n;
  if (!shaped) {
    CertificateBuilder bad("trace_neighborhoods");
    bad.require(false, "scale range and per-scale vectors disagree");
    report.certificates.push_back(bad.done());
    return;
  }
  CertificateBuilder sandwich("trace_neighborhoods");
  std::vector<bool> prev(n, true);  // V_-1 = X
  for (int i = 0; i <= last; ++i) {
    const auto in_v = membership(t.neighborhoods[i], n);
    for (std::size_t x = 0; x < n; ++x) {
      if (rho[x] <= dyadic(i + 1)) sandwich.require(in_v[x], q(m, x) + " in B(F, 2^-" + std::to_string(i + 1) + ") but not in V_" + std::to_string(i));
      if (in_v[x]) {
        sandwich.require(rho[x] < dyadic(i) && prev[x],
                         q(m, x) + " in V_" + std::to_string(i) + " but outside U(F, 2^-" +
                             std::to_string(i) + ") or V_" + std::to_string(i - 1));
      }
    }
    prev = in_v;
  }
  // The last neighbourhood is exactly F: every other point sits in an annulus.
  sandwich.require(t.neighborhoods[last] == subset, "V_last differs from F");
  report.certificates.push_back(sandwich.done());

  CertificateBuilder part("trace_partition");
  std::vector<int> covered(n, 0);
  for (int i = 0; i <= last; ++i) {
    const auto in_v = membership(t.neighborhoods[i], n);
    const std::vector<bool> outer =
        i == 0 ? std::vector<bool>(n, true) : membership(t.neighborhoods[i - 1], n);
    IndexSet expected;
    for (std::size_t x = 0; x < n; ++x)
      if (outer[x] && !in_v[x]) expected.push_back(x);
    part.require(t.annuli[i] == expected, "U_" + std::to_string(i) + " is not V_" +
                                              std::to_string(i - 1) + " minus V_" + std::to_string(i));
  }
  for (const auto& piece : t.pieces) {
    const auto in_u = membership(t.annuli.at(piece.annulus), n);
    for (std::size_t a = 0; a < piece.members.size(); ++a) {
      const std::size_t x = piece.members[a];
      ++covered[x];
      part.require(in_u[x], q(m, x) + " lies in a piece of annulus " +
                                std::to_string(piece.annulus) + " but not in that annulus");
      part.require(t.annulus_of[x] == static_cast<int>(piece.annulus),
                   q(m, x) + " has inconsistent annulus index");
      for (std::size_t b = a + 1; b < piece.members.size(); ++b) {
        part.bound(m(x, piece.members[b]), dyadic(static_cast<int>(piece.annulus)),
                   "diam of piece in annulus " + std::to_string(piece.annulus) + " via " +
                       q(m, x) + "," + q(m, piece.members[b]));
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    part.require(covered[x] == (in_f[x] ? 0 : 1),
                 q(m, x) + " is covered by " + std::to_string(covered[x]) + " pieces");
    if (!in_f[x]) {
      part.require(t.annulus_of[x] == annulus_index(rho[x]),
                   q(m, x) + " sits in the wrong annulus");
    }
  }
  report.certificates.push_back(part.done());

  CertificateBuilder nets("trace_nets");
  for (int i = 0; i <= last; ++i) {
    const IndexSet& p = t.nets[i];
    const auto in_p = membership(p, n);
    const double h = dyadic(i);
    for (std::size_t a = 0; a < p.size(); ++a) {
      nets.require(in_f[p[a]], q(m, p[a]) + " in P_" + std::to_string(i) + " is not in F");
      for (std::size_t b = a + 1; b < p.size(); ++b) {
        nets.require(m(p[a], p[b]) >= h, "P_" + std::to_string(i) + " not separated at " +
                                             q(m, p[a]) + "," + q(m, p[b]));
      }
    }
    for (auto a : subset) {
      if (in_p[a]) continue;
      const bool blocked = std::any_of(p.begin(), p.end(), [&](std::size_t x) { return m(a, x) < h; });
      nets.require(blocked, "P_" + std::to_string(i) + " is not maximal: " + q(m, a) + " fits");
    }
    if (i > 0) {
      nets.require(std::includes(p.begin(), p.end(), t.nets[i - 1].begin(), t.nets[i - 1].end()),
                   "P_" + std::to_string(i - 1) + " is not contained in P_" + std::to_string(i));
    }
  }
  report.certificates.push_back(nets.done());

  CertificateBuilder anchors("trace_anchors");
  for (const auto& piece : t.pieces) {
    const int i = static_cast<int>(piece.annulus);
    double reach = std::numeric_limits<double>::infinity();
    for (auto o : piece.members)
      for (auto a : subset) reach = std::min(reach, m(o, a));
    const std::string where = "piece anchored at " + q(m, piece.o);
    anchors.require(std::find(piece.members.begin(), piece.members.end(), piece.o) != piece.members.end(),
                    where + ": o_s not in the piece");
    anchors.require(in_f[piece.a], where + ": a_s not in F");
    anchors.require(std::binary_search(t.nets[i].begin(), t.nets[i].end(), piece.p),
                    where + ": p_s not in P_" + std::to_string(i));
    anchors.require(approx_eq(piece.reach, reach), where + ": R_s is not the piece-to-F minimum");
    anchors.require(approx_eq(m(piece.o, piece.a), piece.reach), where + ": d(o_s, a_s) != R_s");
    anchors.require(m(piece.a, piece.p) < dyadic(i), where + ": d(a_s, p_s) >= 2^-" + std::to_string(i));
    for (auto x : piece.members) anchors.require(r.mapping[x] == piece.p, q(m, x) + " is not sent to p_s");
  }
  report.certificates.push_back(anchors.done());

  // r(E(F, 2^-i)) within P_i: points with rho >= 2^-i land in the net.
  CertificateBuilder contain("net_containment");
  for (int i = 0; i <= last; ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      if (in_f[x] || rho[x] < dyadic(i)) continue;
      contain.require(std::binary_search(t.nets[i].begin(), t.nets[i].end(), r.mapping[x]),
                      "r(" + q(m, x) + ") = " + q(m, r.mapping[x]) + " is not in P_" + std::to_string(i));
    }
  }
  report.certificates.push_back(contain.done());
}

}  // namespace

int annulus_index(double rho) {
  if (!(rho > 0.0)) return -1;
  int i = 0;
  while (rho <= dyadic(i + 1)) ++i;
  return i;
}

Retraction retract_engelking(const FinMetricSpace& m, const IndexSet& subset_in) {
  const IndexSet subset = normalize_subset(subset_in, m.size());
  if (subset.empty()) throw DomainError("retraction needs a non-empty subset");
  const std::size_t n = m.size();
  const auto rho = dist_to_set_all(m, subset);
  const auto in_f = membership(subset, n);

  Retraction r = identity_on(m, RetractionMethod::Engelking);
  EngelkingTrace t;
  t.annulus_of.assign(n, -1);

  // Least scale whose neighbourhood has shrunk to F.
  int last = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (!in_f[x]) last = std::max(last, annulus_index(rho[x]));
  }
  t.last_scale = last;

  for (int i = 0; i <= last; ++i) {
    IndexSet v, u;
    for (std::size_t x = 0; x < n; ++x) {
      const bool inside = rho[x] <= dyadic(i + 1);
      const bool inside_prev = i == 0 || rho[x] <= dyadic(i);
      if (inside) v.push_back(x);
      if (inside_prev && !inside) u.push_back(x);
    }
    t.neighborhoods.push_back(std::move(v));
    t.annuli.push_back(std::move(u));
    t.nets.push_back(extend_net(i == 0 ? IndexSet{} : t.nets.back(), m, subset, dyadic(i)));
  }

  for (int i = 0; i <= last; ++i) {
    const double radius = dyadic(i + 1);
    std::vector<bool> assigned(n, false);
    for (auto o : t.annuli[i]) {
      if (assigned[o]) continue;
      EngelkingPiece piece;
      piece.annulus = static_cast<std::size_t>(i);
      for (auto y : t.annuli[i]) {
        if (!assigned[y] && m(o, y) <= radius) {
          piece.members.push_back(y);
          assigned[y] = true;
        }
      }
      piece.reach = std::numeric_limits<double>::infinity();
      for (auto x : piece.members) {
        for (auto a : subset) {
          if (m(x, a) < piece.reach) {
            piece.reach = m(x, a);
            piece.o = x;
            piece.a = a;
          }
        }
      }
      const IndexSet& net = t.nets[i];
      auto hit = std::find_if(net.begin(), net.end(),
                              [&](std::size_t p) { return m(piece.a, p) < dyadic(i); });
      // Maximality of the net guarantees a hit.
      piece.p = hit != net.end() ? *hit : piece.a;
      for (auto x : piece.members) {
        r.mapping[x] = piece.p;
        t.annulus_of[x] = i;
      }
      t.pieces.push_back(std::move(piece));
    }
  }
  r.trace = std::move(t);
  return r;
}

Retraction retract_bdhm(const FinMetricSpace& m, const IndexSet& subset_in, double tau) {
  const IndexSet subset = normalize_subset(subset_in, m.size());
  if (subset.empty()) throw DomainError("retraction needs a non-empty subset");
  if (!(tau > 1.0)) throw DomainError("BDHM retraction needs tau > 1");
  require_ultrametric(m, "BDHM input");
  const auto rho = dist_to_set_all(m, subset);

  Retraction r = identity_on(m, RetractionMethod::Bdhm);
  r.tau = tau;
  for (std::size_t x = 0; x < m.size(); ++x) {
    const double reach = tau * rho[x];
    // subset is sorted, so the first hit is the least in label order.
    for (auto a : subset) {
      if (m(x, a) <= reach) {
        r.mapping[x] = a;
        break;
      }
    }
  }
  return r;
}

bool CertificateReport::all_passed() const {
  return std::all_of(certificates.begin(), certificates.end(),
                     [](const Certificate& c) { return c.passed; });
}

const Certificate* CertificateReport::find(const std::string& name) const {
  for (const auto& c : certificates)
    if (c.name == name) return &c;
  return nullptr;
}

CertificateReport verify_retraction(const FinMetricSpace& m, const IndexSet& subset_in,
                                    const Retraction& r, const std::vector<double>& eps_grid) {
  const IndexSet subset = normalize_subset(subset_in, m.size());
  if (subset.empty()) throw DomainError("retraction needs a non-empty subset");
  const std::size_t n = m.size();
  CertificateReport report;
  if (r.mapping.size() != n) {
    CertificateBuilder shape("range_in_F");
    shape.require(false, "mapping has " + std::to_string(r.mapping.size()) + " entries for " +
                             std::to_string(n) + " points");
    report.certificates.push_back(shape.done());
    return report;
  }
  const auto in_f = membership(subset, n);
  const auto rho = dist_to_set_all(m, subset);

  CertificateBuilder fixes("fixes_F"), range("range_in_F"), idem("idempotent");
  bool range_ok = true;
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t rx = r.mapping[x];
    const bool inside = rx < n && in_f[rx];
    range_ok = range_ok && inside;
    range.require(inside, "r(" + q(m, x) + ") is not a point of F");
    if (in_f[x]) fixes.require(rx == x, "r moves " + q(m, x) + " to " + (rx < n ? q(m, rx) : "?"));
  }
  for (std::size_t x = 0; x < n && range_ok; ++x) {
    idem.require(r.mapping[r.mapping[x]] == r.mapping[x], "r(r(" + q(m, x) + ")) != r(" + q(m, x) + ")");
  }
  report.certificates.push_back(fixes.done());
  report.certificates.push_back(range.done());
  report.certificates.push_back(idem.done());
  if (!range_ok) return report;

  std::vector<double> grid = eps_grid;
  if (grid.empty()) grid = m.distance_spectrum();

  if (r.method == RetractionMethod::Engelking) {
    CertificateBuilder additive("sr_additive"), linear("sr_17");
    for (std::size_t x = 0; x < n; ++x) {
      if (in_f[x]) continue;
      const double moved = m(x, r.mapping[x]);
      const int level = annulus_index(rho[x]);
      additive.bound(moved, rho[x] + dyadic(level - 2), "x = " + q(m, x));
      linear.bound(moved, 17.0 * rho[x], "x = " + q(m, x));
    }
    report.certificates.push_back(additive.done());
    report.certificates.push_back(linear.done());
    if (r.trace) {
      check_trace(m, subset, r, rho, report);
      // The eps grid maps onto the nets: E(F, eps) lies in E(F, 2^-i) once 2^-i <= eps.
      CertificateBuilder grid_cert("net_containment_grid");
      const auto& t = *r.trace;
      for (double eps : grid) {
        if (!(eps > 0.0)) continue;
        int i = 0;
        while (dyadic(i) > eps && i < t.last_scale) ++i;
        for (std::size_t x = 0; x < n; ++x) {
          if (in_f[x] || rho[x] < eps) continue;
          grid_cert.require(std::binary_search(t.nets[i].begin(), t.nets[i].end(), r.mapping[x]),
                            "eps = " + num(eps) + ": r(" + q(m, x) + ") outside P_" + std::to_string(i));
        }
      }
      report.certificates.push_back(grid_cert.done());
    }
  } else {
    const double tau = r.tau;
    CertificateBuilder lip("lipschitz_tau2"), disp("displacement_tau"), sep("image_separation");
    for (std::size_t x = 0; x < n; ++x) {
      disp.bound(m(x, r.mapping[x]), tau * rho[x], "x = " + q(m, x));
      for (std::size_t y = x + 1; y < n; ++y) {
        lip.bound(m(r.mapping[x], r.mapping[y]), tau * tau * m(x, y),
                  "pair " + q(m, x) + "," + q(m, y));
      }
    }
    for (double eps : grid) {
      if (!(eps > 0.0)) continue;
      IndexSet images;
      for (std::size_t x = 0; x < n; ++x)
        if (rho[x] >= eps) images.push_back(r.mapping[x]);
      images = normalize_subset(std::move(images), n);
      for (std::size_t a = 0; a < images.size(); ++a)
        for (std::size_t b = a + 1; b < images.size(); ++b)
          sep.bound(eps, m(images[a], images[b]),
                    "eps = " + num(eps) + ", images " + q(m, images[a]) + "," + q(m, images[b]));
    }
    report.certificates.push_back(lip.done());
    report.certificates.push_back(disp.done());
    report.certificates.push_back(sep.done());
  }
  return report;
}

}  // namespace metfact
