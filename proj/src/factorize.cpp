#include "metfact/factorize.hpp"

#include <algorithm>

#include "metfact/core.hpp"
#include "metfact/error.hpp"
#include "metfact/simd/kernels.hpp"

namespace metfact {
namespace {

// Reorders v onto `labels` (same set, any order).
FinMetricSpace align_to(const FinMetricSpace& v, const std::vector<std::string>& labels,
                        const char* what) {
  if (v.size() != labels.size()) {
    throw StructuralError(std::string(what) + " has " + std::to_string(v.size()) +
                          " points, expected " + std::to_string(labels.size()));
  }
  if (v.labels() == labels) return v;
  IndexSet order;
  order.reserve(labels.size());
  for (const auto& l : labels) {
    if (!v.contains(l)) throw StructuralError(std::string(what) + " lacks label '" + l + "'");
    order.push_back(v.index_of(l));
  }
  return v.restrict_to(order);
}

// For every base point, the index of r(x) inside d.
std::vector<std::size_t> retraction_in(const FactorizationContext& ctx, const FinMetricSpace& d) {
  const auto& base = ctx.base();
  const auto& sub_labels = ctx.subset_labels();
  if (d.size() != sub_labels.size()) {
    throw StructuralError("metric on F has " + std::to_string(d.size()) + " points, F has " +
                          std::to_string(sub_labels.size()));
  }
  std::vector<std::size_t> out(base.size());
  const auto& mapping = ctx.retraction().mapping;
  for (std::size_t x = 0; x < base.size(); ++x) {
    const std::string& l = base.label(mapping[x]);
    if (!d.contains(l)) throw StructuralError("metric on F lacks label '" + l + "'");
    out[x] = d.index_of(l);
  }
  for (const auto& l : sub_labels) {
    if (!d.contains(l)) throw StructuralError("metric on F lacks label '" + l + "'");
  }
  return out;
}

enum class Combine { Sum, Max };

FinMetricSpace extend(const FactorizationContext& ctx, const FinMetricSpace& d, Combine how) {
  require_metric(d, "metric on F");
  const auto rd = retraction_in(ctx, d);
  const auto& proj = ctx.quotient().projection;
  const auto& v = ctx.factor();
  const std::size_t n = ctx.base().size();
  const auto& K = simd::kernels();

  std::vector<double> flat(n * n);
  std::vector<double> first(n), second(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      first[y] = d(rd[x], rd[y]);
      second[y] = v(proj[x], proj[y]);
    }
    double* out = flat.data() + x * n;
    if (how == Combine::Sum) {
      K.add(first.data(), second.data(), out, n);
    } else {
      K.elementwise_max(first.data(), second.data(), out, n);
    }
  }
  return FinMetricSpace(ctx.base().labels(), std::move(flat));
}

}  // namespace

FactorizationContext::FactorizationContext(FinMetricSpace lambda, IndexSet subset,
                                           FactorizationOptions options)
    : base_(std::move(lambda)), subset_(normalize_subset(std::move(subset), base_.size())) {
  if (subset_.empty()) throw DomainError("factorization needs a non-empty subset");
  const auto rep = validate_metric(base_);
  if (!rep.is_metric) {
    throw DomainError("auxiliary metric is not a metric: " + rep.worst_violation.describe(base_));
  }
  const RetractionMethod method =
      options.method.value_or(rep.is_ultrametric ? RetractionMethod::Bdhm : RetractionMethod::Engelking);
  retraction_ = method == RetractionMethod::Bdhm ? retract_bdhm(base_, subset_, options.tau)
                                                 : retract_engelking(base_, subset_);
  quotient_ = metfact::quotient(base_, subset_);
  if (options.factor) {
    factor_ = align_to(*options.factor, quotient_.space.labels(), "factor metric");
    require_metric(factor_, "factor metric");
  } else {
    factor_ = quotient_.space;
  }
}

FactorizationContext FactorizationContext::with_factor(FinMetricSpace v) const {
  FactorizationContext out = *this;
  out.factor_ = align_to(v, quotient_.space.labels(), "factor metric");
  require_metric(out.factor_, "factor metric");
  return out;
}

Embedding embed_phi(const FactorizationContext& ctx) {
  const auto& mapping = ctx.retraction().mapping;
  const auto& proj = ctx.quotient().projection;
  Embedding phi(mapping.size());
  for (std::size_t x = 0; x < mapping.size(); ++x) phi[x] = {mapping[x], proj[x]};
  return phi;
}

Pullback pullback(const std::vector<std::size_t>& f, const FinMetricSpace& target) {
  const std::size_t n = f.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (f[x] >= target.size()) {
      throw StructuralError("map sends point " + std::to_string(x) + " outside the target space");
    }
  }
  Pullback out;
  out.matrix.resize(n * n);
  out.is_metric = true;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double v = target(f[x], f[y]);
      out.matrix[x * n + y] = v;
      if (x != y && v == 0.0) out.is_metric = false;
    }
  }
  return out;
}

FinMetricSpace extend_l1(const FactorizationContext& ctx, const FinMetricSpace& d) {
  return extend(ctx, d, Combine::Sum);
}

FinMetricSpace extend_linf(const FactorizationContext& ctx, const FinMetricSpace& d,
                           const std::optional<ScaleSet>& scales) {
  if (scales) {
    const auto rep = validate_metric(ctx.factor());
    if (!rep.is_ultrametric) {
      throw DomainError("S-valued extension needs an ultrametric factor: " +
                        rep.worst_violation.describe(ctx.factor()));
    }
    if (!values_in_scale_set(ctx.factor(), *scales)) {
      throw DomainError("factor metric takes values outside " + scales->to_string());
    }
  }
  return extend(ctx, d, Combine::Max);
}

FinMetricSpace truncate_factor(const FinMetricSpace& v, double eta) {
  if (!(eta > 0.0)) throw DomainError("truncation level must be positive");
  std::vector<double> flat(v.data().size());
  simd::kernels().clamp_above(v.data().data(), eta, flat.data(), flat.size());
  return FinMetricSpace(v.labels(), std::move(flat));
}

}  // namespace metfact
