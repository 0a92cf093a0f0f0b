#include "metfact/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metfact/error.hpp"
#include "metfact/simd/kernels.hpp"
#include "metfact/tolerance.hpp"

namespace metfact {
namespace {

std::vector<double> transpose(const FinMetricSpace& m) {
  const std::size_t n = m.size();
  std::vector<double> t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[j * n + i] = m(i, j);
  return t;
}

// Keeps the violation with the most negative slack.
void consider(Violation& worst, Violation candidate) {
  if (candidate.slack < 0.0 && (worst.kind == Violation::Kind::None || candidate.slack < worst.slack)) {
    worst = candidate;
  }
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string Violation::describe(const FinMetricSpace& m) const {
  auto L = [&](std::size_t k) { return "'" + m.label(k) + "'"; };
  switch (kind) {
    case Kind::None:
      return "none";
    case Kind::Diagonal:
      return "d(" + L(i) + "," + L(i) + ") = " + fmt_num(m(i, i)) + " is not 0";
    case Kind::Asymmetry:
      return "d(" + L(i) + "," + L(j) + ") = " + fmt_num(m(i, j)) + " but d(" + L(j) + "," + L(i) +
             ") = " + fmt_num(m(j, i));
    case Kind::ZeroDistance:
      return "distinct points " + L(i) + " and " + L(j) + " are at distance 0";
    case Kind::Triangle:
      return "triangle inequality fails for (" + L(i) + "," + L(j) + ") via " + L(k) +
             ", slack " + fmt_num(slack);
    case Kind::StrongTriangle:
      return "strong triangle inequality fails for (" + L(i) + "," + L(j) + ") via " + L(k) +
             ", slack " + fmt_num(slack);
  }
  return {};
}

ValidationReport validate_metric(const FinMetricSpace& m) {
  const std::size_t n = m.size();
  const auto& K = simd::kernels();
  Violation metric_worst;
  for (std::size_t i = 0; i < n; ++i) {
    consider(metric_worst, {Violation::Kind::Diagonal, i, i, i, -m(i, i)});
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = std::fabs(m(i, j) - m(j, i));
      if (gap > tol_scale(m(i, j), m(j, i))) {
        consider(metric_worst, {Violation::Kind::Asymmetry, i, j, i, -gap});
      }
      if (m(i, j) == 0.0 || m(j, i) == 0.0) {
        // Reported with a tiny negative slack so genuine triangle failures rank first.
        consider(metric_worst, {Violation::Kind::ZeroDistance, i, j, i,
                                -std::numeric_limits<double>::min()});
      }
    }
  }

  // Column j of m is row j of the transpose: d(k, j) = t[j][k].
  const std::vector<double> t = transpose(m);
  Violation ultra_worst;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row_i = m.row(i).data();
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double* col_j = t.data() + j * n;
      const double dij = m(i, j);
      const double via_sum = K.min_sum(row_i, col_j, n);
      if (!approx_le(dij, via_sum)) {
        std::size_t k = 0;
        while (row_i[k] + col_j[k] != via_sum) ++k;
        consider(metric_worst, {Violation::Kind::Triangle, i, j, k, via_sum - dij});
      }
      const double via_max = K.min_max(row_i, col_j, n);
      if (!approx_le(dij, via_max)) {
        std::size_t k = 0;
        while (std::max(row_i[k], col_j[k]) != via_max) ++k;
        consider(ultra_worst, {Violation::Kind::StrongTriangle, i, j, k, via_max - dij});
      }
    }
  }

  ValidationReport report;
  report.is_metric = metric_worst.kind == Violation::Kind::None;
  report.is_ultrametric = report.is_metric && ultra_worst.kind == Violation::Kind::None;
  report.worst_violation = report.is_metric ? ultra_worst : metric_worst;
  return report;
}

bool is_metric(const FinMetricSpace& m) { return validate_metric(m).is_metric; }
bool is_ultrametric(const FinMetricSpace& m) { return validate_metric(m).is_ultrametric; }

void require_metric(const FinMetricSpace& m, const char* what) {
  auto rep = validate_metric(m);
  if (!rep.is_metric) {
    throw DomainError(std::string(what) + " is not a metric: " + rep.worst_violation.describe(m));
  }
}

void require_ultrametric(const FinMetricSpace& m, const char* what) {
  auto rep = validate_metric(m);
  if (!rep.is_ultrametric) {
    throw DomainError(std::string(what) + " is not an ultrametric: " +
                      rep.worst_violation.describe(m));
  }
}

double dist_to_set(const FinMetricSpace& m, const IndexSet& subset, std::size_t x) {
  if (subset.empty()) throw DomainError("distance to an empty set is undefined");
  double best = std::numeric_limits<double>::infinity();
  for (auto a : subset) best = std::min(best, m(x, a));
  return best;
}

std::vector<double> dist_to_set_all(const FinMetricSpace& m, const IndexSet& subset) {
  if (subset.empty()) throw DomainError("distance to an empty set is undefined");
  const std::size_t n = m.size();
  const auto& K = simd::kernels();
  // By symmetry rho(x) = min over a in A of row a at column x.
  std::vector<double> rho(m.row(subset.front()).begin(), m.row(subset.front()).end());
  for (std::size_t k = 1; k < subset.size(); ++k) {
    K.elementwise_min(rho.data(), m.row(subset[k]).data(), rho.data(), n);
  }
  for (auto a : subset) rho[a] = 0.0;
  return rho;
}

Neighborhoods set_neighborhoods(const FinMetricSpace& m, const IndexSet& subset, double eps) {
  if (!(eps > 0.0)) throw DomainError("neighbourhood radius must be positive");
  const auto rho = dist_to_set_all(m, subset);
  Neighborhoods out;
  for (std::size_t x = 0; x < m.size(); ++x) {
    if (rho[x] <= eps) out.closed.push_back(x);
    if (rho[x] < eps) {
      out.open.push_back(x);
    } else {
      out.far.push_back(x);
    }
  }
  return out;
}

FinMetricSpace product_metric(const FinMetricSpace& m1, const FinMetricSpace& m2,
                              ProductNorm norm) {
  const std::size_t n1 = m1.size(), n2 = m2.size(), n = n1 * n2;
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t x = 0; x < n1; ++x)
    for (std::size_t y = 0; y < n2; ++y) labels.push_back(m1.label(x) + "|" + m2.label(y));
  std::vector<double> flat(n * n);
  for (std::size_t x = 0; x < n1; ++x) {
    for (std::size_t y = 0; y < n2; ++y) {
      double* out = flat.data() + (x * n2 + y) * n;
      for (std::size_t u = 0; u < n1; ++u) {
        for (std::size_t v = 0; v < n2; ++v) {
          const double a = m1(x, u), b = m2(y, v);
          out[u * n2 + v] = norm == ProductNorm::L1 ? a + b : std::max(a, b);
        }
      }
    }
  }
  return FinMetricSpace(std::move(labels), std::move(flat));
}

FinMetricSpace join_metrics(const FinMetricSpace& d, const FinMetricSpace& e) {
  require_same_labels(d, e);
  std::vector<double> flat(d.data().size());
  simd::kernels().elementwise_max(d.data().data(), e.data().data(), flat.data(), flat.size());
  return FinMetricSpace(d.labels(), std::move(flat));
}

double sup_distance(const FinMetricSpace& d, const FinMetricSpace& e) {
  require_same_labels(d, e);
  return simd::kernels().max_abs_diff(d.data().data(), e.data().data(), d.data().size());
}

ExtReal ultra_distance(const FinMetricSpace& d, const FinMetricSpace& e, const ScaleSet& scales) {
  require_same_labels(d, e);
  if (!scales.characteristic()) {
    throw DomainError("the ultrametric distance needs a characteristic scale set");
  }
  require_ultrametric(d, "first argument");
  require_ultrametric(e, "second argument");
  double raw = 0.0;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!approx_eq(d(i, j), e(i, j))) raw = std::max(raw, std::max(d(i, j), e(i, j)));
    }
  }
  if (raw == 0.0) return ExtReal(0.0);
  return scales.ceiling(raw);
}

SeparationDensity separated_and_dense(const FinMetricSpace& m, const IndexSet& subset, double h,
                                      double eta) {
  if (subset.empty()) throw DomainError("separated_and_dense needs a non-empty subset");
  SeparationDensity out;
  out.is_h_separated = true;
  for (std::size_t a = 0; a < subset.size() && out.is_h_separated; ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b)
      if (strictly_lt(m(subset[a], subset[b]), h)) {
        out.is_h_separated = false;
        break;
      }
  const auto rho = dist_to_set_all(m, subset);
  out.is_eta_dense = std::all_of(rho.begin(), rho.end(), [&](double r) { return approx_le(r, eta); });
  return out;
}

bool values_in_scale_set(const FinMetricSpace& m, const ScaleSet& scales) {
  return std::all_of(m.data().begin(), m.data().end(), [&](double v) { return scales.contains(v); });
}

FinMetricSpace snap_to_scale(const FinMetricSpace& m, const ScaleSet& scales) {
  std::vector<double> flat(m.data().begin(), m.data().end());
  for (double& v : flat) {
    const ExtReal c = scales.ceiling(v);
    if (c.is_infinite()) throw DomainError("value " + fmt_num(v) + " exceeds the scale set");
    v = c.value();
  }
  return FinMetricSpace(m.labels(), std::move(flat));
}

}  // namespace metfact
