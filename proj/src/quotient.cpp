#include "metfact/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "metfact/core.hpp"
#include "metfact/error.hpp"
#include "metfact/tolerance.hpp"

namespace metfact {

std::string fresh_theta_label(const std::vector<std::string>& labels) {
  const std::unordered_set<std::string> taken(labels.begin(), labels.end());
  std::string candidate = "__theta__";
  for (int suffix = 1; taken.count(candidate) != 0; ++suffix) {
    candidate = "__theta__" + std::to_string(suffix);
  }
  return candidate;
}

QuotientSpace quotient(const FinMetricSpace& m, const IndexSet& subset_in) {
  const IndexSet subset = normalize_subset(subset_in, m.size());
  if (subset.empty()) throw DomainError("quotient needs a non-empty subset");
  const std::size_t n = m.size();
  const auto rho = dist_to_set_all(m, subset);
  const IndexSet rest = complement(subset, n);

  QuotientSpace q;
  q.base_labels = m.labels();
  q.subset = subset;
  q.theta = fresh_theta_label(m.labels());

  const std::size_t qn = rest.size() + 1;
  const std::size_t theta = rest.size();
  std::vector<std::string> labels = m.labels_of(rest);
  labels.push_back(q.theta);

  std::vector<double> flat(qn * qn, 0.0);
  for (std::size_t a = 0; a < rest.size(); ++a) {
    const std::size_t x = rest[a];
    for (std::size_t b = 0; b < rest.size(); ++b) {
      if (a == b) continue;
      const std::size_t y = rest[b];
      flat[a * qn + b] = std::min(m(x, y), rho[x] + rho[y]);
    }
    flat[a * qn + theta] = rho[x];
    flat[theta * qn + a] = rho[x];
  }
  q.space = FinMetricSpace(std::move(labels), std::move(flat));

  q.projection.assign(n, theta);
  for (std::size_t a = 0; a < rest.size(); ++a) q.projection[rest[a]] = a;
  return q;
}

QuotientLawReport check_quotient_laws(const QuotientSpace& q, const FinMetricSpace& m,
                                      const IndexSet& subset_in, std::size_t max_violations) {
  QuotientLawReport report;
  auto fail = [&](std::string line) {
    report.ok = false;
    if (report.violations.size() < max_violations) report.violations.push_back(std::move(line));
  };
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };

  const IndexSet subset = normalize_subset(subset_in, m.size());
  if (subset.empty()) {
    fail("subset is empty");
    return report;
  }
  const std::size_t n = m.size();
  const auto& d = q.space;
  if (q.projection.size() != n || d.empty()) {
    fail("projection does not cover the base space");
    return report;
  }
  const std::size_t theta = q.theta_index();
  if (d.label(theta) != q.theta) fail("theta label is not the last quotient point");
  const auto in_f = membership(subset, n);
  const auto rho = dist_to_set_all(m, subset);

  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t px = q.projection[x];
    if (px >= d.size()) {
      fail("projection of '" + m.label(x) + "' is out of range");
      return report;
    }
    if (in_f[x] != (px == theta)) {
      fail("projection of '" + m.label(x) + "' should be " + (in_f[x] ? "theta" : "itself"));
    } else if (!in_f[x] && d.label(px) != m.label(x)) {
      fail("projection of '" + m.label(x) + "' lands on '" + d.label(px) + "'");
    }
    if (!in_f[x] && !approx_eq(d(px, theta), rho[x])) {
      fail("d~('" + m.label(x) + "', theta) = " + num(d(px, theta)) + " but rho_F = " + num(rho[x]));
    }
  }

  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const std::size_t px = q.projection[x], py = q.projection[y];
      if (!in_f[x] && !in_f[y]) {
        const double expected = std::min(m(x, y), rho[x] + rho[y]);
        if (!approx_eq(d(px, py), expected)) {
          fail("d~('" + m.label(x) + "','" + m.label(y) + "') = " + num(d(px, py)) +
               " but the min-formula gives " + num(expected));
        }
        if (!approx_eq(d(px, py), d(py, px))) {
          fail("d~ is not symmetric on ('" + m.label(x) + "','" + m.label(y) + "')");
        }
      }
      if (!approx_le(d(px, py), m(x, y))) {
        fail("projection is not 1-Lipschitz on ('" + m.label(x) + "','" + m.label(y) + "'): " +
             num(d(px, py)) + " > " + num(m(x, y)));
      }
    }
  }

  const auto rep = validate_metric(d);
  if (!rep.is_metric) fail("quotient is not a metric: " + rep.worst_violation.describe(d));
  return report;
}

}  // namespace metfact
