#include "metfact/suites.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "metfact/core.hpp"
#include "metfact/dimension.hpp"
#include "metfact/error.hpp"
#include "metfact/factorize.hpp"
#include "metfact/gen.hpp"
#include "metfact/io.hpp"
#include "metfact/quotient.hpp"
#include "metfact/retraction.hpp"
#include "metfact/rng.hpp"
#include "metfact/tolerance.hpp"

namespace metfact::suites {
namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

class Outcomes {
 public:
  void add(const std::string& property, bool ok, const std::string& detail = {}) {
    out_.push_back({property, ok, ok ? std::string{} : detail});
  }
  std::vector<Outcome> take() { return std::move(out_); }

 private:
  std::vector<Outcome> out_;
};

FinMetricSpace scaled(const FinMetricSpace& m, double factor) {
  std::vector<double> flat(m.data().begin(), m.data().end());
  for (double& v : flat) v *= factor;
  return FinMetricSpace(m.labels(), std::move(flat));
}

FinMetricSpace relabel(const FinMetricSpace& m, std::vector<std::string> labels) {
  return FinMetricSpace(std::move(labels), std::vector<double>(m.data().begin(), m.data().end()));
}

// Random subset: each point with a random probability, occasionally all of
// X or a single point, never empty.
IndexSet random_subset(Rng& rng, std::size_t n) {
  const auto mode = rng.below(10);
  IndexSet subset;
  if (mode == 0) {
    subset.push_back(rng.below(n));
  } else if (mode == 1 && n <= 6) {
    for (std::size_t x = 0; x < n; ++x) subset.push_back(x);
  } else {
    const double p = 0.1 + 0.5 * rng.uniform();
    for (std::size_t x = 0; x < n; ++x)
      if (rng.uniform() < p) subset.push_back(x);
    if (subset.empty()) subset.push_back(rng.below(n));
  }
  return subset;
}

// Random metric space: Euclidean, ultrametric, or lattice, rescaled by a
// power of two so that several Engelking scales come into play.
FinMetricSpace random_space(Rng& rng, std::size_t n) {
  const std::uint64_t sub_seed = rng.next();
  FinMetricSpace base;
  switch (rng.below(4)) {
    case 0:
    case 1:
      base = gen::random_metric(n, sub_seed, 1 + rng.below(3));
      break;
    case 2:
      base = gen::random_ultra(n, sub_seed, rng.below(2) == 0 ? 2.0 : 3.0);
      break;
    default:
      base = gen::line(n, 1.0 / static_cast<double>(n));
      break;
  }
  const int shift = static_cast<int>(rng.below(8)) - 4;
  return scaled(base, std::ldexp(1.0, shift));
}

std::size_t random_size(Rng& rng, std::size_t max_size) {
  if (max_size <= 1) return 1;
  return 2 + rng.below(max_size - 1);
}

Instance base_generator(std::uint64_t seed, std::size_t index, std::size_t max_size) {
  Rng rng(instance_seed(seed, index));
  Instance inst;
  inst.space = random_space(rng, random_size(rng, max_size));
  inst.subset = random_subset(rng, inst.space.size());
  return inst;
}

// d and e on the labels of F: powers-of-two ultrametrics on even indices,
// Euclidean metrics on odd ones.
Instance extensor_generator(std::uint64_t seed, std::size_t index, std::size_t max_size) {
  Instance inst = base_generator(seed, index, max_size);
  Rng rng(instance_seed(seed, index) ^ 0xD1B54A32D192ED03ULL);
  const auto labels = inst.space.labels_of(inst.subset);
  const std::size_t k = labels.size();
  if (index % 2 == 0) {
    inst.d = relabel(gen::random_ultra(k, rng.next(), 2.0), labels);
    inst.e = relabel(gen::random_ultra(k, rng.next(), 2.0), labels);
  } else {
    inst.d = relabel(gen::random_metric(k, rng.next(), 2), labels);
    inst.e = relabel(gen::random_metric(k, rng.next(), 3), labels);
  }
  return inst;
}

Instance dimension_generator(std::uint64_t seed, std::size_t index, std::size_t max_size) {
  Rng rng(instance_seed(seed, index));
  Instance inst;
  const std::size_t n = random_size(rng, std::min<std::size_t>(max_size, 12));
  switch (rng.below(4)) {
    case 0:
      inst.space = gen::random_metric(n, rng.next(), 1 + rng.below(3));
      break;
    case 1:
      inst.space = gen::random_ultra(n, rng.next(), 2.0);
      break;
    case 2:
      inst.space = gen::line(n, 1.0);
      break;
    default: {
      const std::size_t rows = 1 + rng.below(3);
      inst.space = gen::grid(rows, std::max<std::size_t>(1, n / rows), 1.0);
      break;
    }
  }
  inst.subset = {0};
  return inst;
}

// ---------------------------------------------------------------------------

std::vector<Outcome> check_quotient(const Instance& inst) {
  Outcomes out;
  const auto& m = inst.space;
  const auto q = quotient(m, inst.subset);
  const auto& d = q.space;
  const auto rho = dist_to_set_all(m, inst.subset);
  const auto in_f = membership(inst.subset, m.size());
  const std::size_t theta = q.theta_index();

  const auto rep = validate_metric(d);
  out.add("quotient_is_metric", rep.is_metric, rep.worst_violation.describe(d));

  std::string lip, thet, local, ball;
  for (std::size_t x = 0; x < m.size(); ++x) {
    const std::size_t px = q.projection[x];
    if (!in_f[x] && !approx_eq(d(px, theta), rho[x]) && thet.empty()) {
      thet = "d~(" + m.label(x) + ", theta) = " + num(d(px, theta)) + ", rho_F = " + num(rho[x]);
    }
    for (std::size_t y = 0; y < m.size(); ++y) {
      const std::size_t py = q.projection[y];
      if (!approx_le(d(px, py), m(x, y)) && lip.empty()) {
        lip = "pair (" + m.label(x) + ", " + m.label(y) + "): " + num(d(px, py)) + " > " + num(m(x, y));
      }
      if (!in_f[x] && !in_f[y] && d(px, py) < std::max(rho[x], rho[y]) &&
          !approx_eq(d(px, py), m(x, y)) && local.empty()) {
        local = "pair (" + m.label(x) + ", " + m.label(y) + ") below max(rho) but d~ != d";
      }
    }
    if (in_f[x]) continue;
    // eps-balls around x agree in X and X/F for every eps < rho_F(x).
    for (std::size_t y = 0; y < m.size() && ball.empty(); ++y) {
      const double eps = m(x, y);
      if (!(eps < rho[x])) continue;
      for (std::size_t z = 0; z < m.size(); ++z) {
        const bool in_x = m(x, z) <= eps;
        const bool in_q = d(px, q.projection[z]) <= eps;
        if (in_x != in_q) {
          ball = "ball around " + m.label(x) + " of radius " + num(eps) + " differs at " + m.label(z);
          break;
        }
      }
    }
  }
  out.add("projection_1_lipschitz", lip.empty(), lip);
  out.add("theta_distance_is_rho", thet.empty(), thet);
  out.add("local_isometry", local.empty() && ball.empty(), local + ball);
  const auto laws = check_quotient_laws(q, m, inst.subset);
  out.add("quotient_law_report", laws.ok, laws.violations.empty() ? "" : laws.violations.front());
  return out.take();
}

void add_certificates(Outcomes& out, const std::string& prefix, const CertificateReport& rep) {
  for (const auto& c : rep.certificates) out.add(prefix + c.name, c.passed, c.counterexample);
}

std::vector<Outcome> check_retraction(const Instance& inst, const SuiteOptions& opt) {
  Outcomes out;
  const auto& m = inst.space;
  const auto eng = retract_engelking(m, inst.subset);
  add_certificates(out, "engelking.", verify_retraction(m, inst.subset, eng));

  const bool ultra = is_ultrametric(m);
  const FinMetricSpace u = ultra ? m : single_linkage_ultrametric(m);
  for (double tau : opt.taus) {
    const auto bdhm = retract_bdhm(u, inst.subset, tau);
    add_certificates(out, "bdhm(tau=" + num(tau) + ").", verify_retraction(u, inst.subset, bdhm));
  }
  return out.take();
}

std::vector<Outcome> check_embedding(const Instance& inst) {
  Outcomes out;
  const FactorizationContext ctx(inst.space, inst.subset);
  const auto phi = embed_phi(ctx);
  const auto in_f = membership(inst.subset, inst.space.size());
  const std::size_t theta = ctx.quotient().theta_index();

  std::string fixed, injective;
  for (std::size_t x = 0; x < phi.size(); ++x) {
    if (in_f[x] && (phi[x].first != x || phi[x].second != theta) && fixed.empty()) {
      fixed = "Phi(" + inst.space.label(x) + ") is not (" + inst.space.label(x) + ", theta)";
    }
    for (std::size_t y = x + 1; y < phi.size() && injective.empty(); ++y) {
      if (phi[x] == phi[y]) {
        injective = "Phi(" + inst.space.label(x) + ") = Phi(" + inst.space.label(y) + ")";
      }
    }
  }
  out.add("phi_fixes_F", fixed.empty(), fixed);
  out.add("phi_injective", injective.empty(), injective);
  return out.take();
}

// Entrywise equality (shared tolerance) of two matrices over the same labels.
std::string compare(const FinMetricSpace& a, const FinMetricSpace& b, const char* what) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!approx_eq(a(i, j), b(i, j))) {
        return std::string(what) + " differs at (" + a.label(i) + ", " + a.label(j) + "): " +
               num(a(i, j)) + " vs " + num(b(i, j));
      }
  return {};
}

std::string dominated(const FinMetricSpace& a, const FinMetricSpace& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!approx_le(a(i, j), b(i, j))) {
        return "not monotone at (" + a.label(i) + ", " + a.label(j) + "): " + num(a(i, j)) + " > " +
               num(b(i, j));
      }
  return {};
}

FinMetricSpace on_subset(const FinMetricSpace& ext, const FactorizationContext& ctx,
                         const FinMetricSpace& like) {
  IndexSet idx;
  for (const auto& l : like.labels()) idx.push_back(ctx.base().index_of(l));
  return ext.restrict_to(idx);
}

// Xi(d) recomputed literally as the pullback of d x_1 v along Phi.
FinMetricSpace xi_by_pullback(const FactorizationContext& ctx, const FinMetricSpace& d) {
  const auto product = product_metric(d, ctx.factor(), ProductNorm::L1);
  const auto phi = embed_phi(ctx);
  std::vector<std::size_t> f(phi.size());
  for (std::size_t x = 0; x < phi.size(); ++x) {
    f[x] = d.index_of(ctx.base().label(phi[x].first)) * ctx.factor().size() + phi[x].second;
  }
  return FinMetricSpace(ctx.base().labels(), pullback(f, product).matrix);
}

std::vector<Outcome> check_extensor(const Instance& inst) {
  Outcomes out;
  if (!inst.d || !inst.e) {
    out.add("instance_has_metrics", false, "extensor instances need metrics d and e on F");
    return out.take();
  }
  const FinMetricSpace& d = *inst.d;
  const FinMetricSpace& e = *inst.e;
  const FactorizationContext ctx(inst.space, inst.subset);
  const FinMetricSpace upper = join_metrics(d, e);  // d <= upper pointwise

  {
    const auto xd = extend_l1(ctx, d), xe = extend_l1(ctx, e);
    out.add("xi.restriction", compare(on_subset(xd, ctx, d), d, "Xi(d)|F").empty(),
            compare(on_subset(xd, ctx, d), d, "Xi(d)|F"));
    const auto rep = validate_metric(xd);
    out.add("xi.metric", rep.is_metric, rep.worst_violation.describe(xd));
    const double lhs = sup_distance(xd, xe), rhs = sup_distance(d, e);
    out.add("xi.isometry", approx_eq(lhs, rhs), "D_X = " + num(lhs) + ", D_F = " + num(rhs));
    const auto mono = dominated(xd, extend_l1(ctx, upper));
    out.add("xi.monotone", mono.empty(), mono);
    const auto join = compare(extend_l1(ctx, upper), join_metrics(xd, xe), "Xi(d v e)");
    out.add("xi.join", join.empty(), join);
    const auto route = compare(xd, xi_by_pullback(ctx, d), "Xi(d) vs pullback");
    out.add("xi.pullback_route", route.empty(), route);
  }
  {
    const auto sd = extend_linf(ctx, d);
    out.add("sigma.restriction", compare(on_subset(sd, ctx, d), d, "Sigma(d)|F").empty(),
            compare(on_subset(sd, ctx, d), d, "Sigma(d)|F"));
    const auto rep = validate_metric(sd);
    out.add("sigma.metric", rep.is_metric, rep.worst_violation.describe(sd));
  }

  const auto quotient_tree = single_linkage_ultrametric(ctx.quotient().space);
  for (const auto& scales : {ScaleSet::geometric(0.5), ScaleSet::all_reals()}) {
    const std::string p = "sigma[" + scales.to_string() + "].";
    const auto ctx_s = ctx.with_factor(snap_to_scale(quotient_tree, scales));
    const auto du = snap_to_scale(single_linkage_ultrametric(d), scales);
    const auto eu = snap_to_scale(single_linkage_ultrametric(e), scales);
    const auto uu = join_metrics(du, eu);
    const auto sd = extend_linf(ctx_s, du, scales), se = extend_linf(ctx_s, eu, scales);

    const auto restr = compare(on_subset(sd, ctx_s, du), du, "Sigma(d)|F");
    out.add(p + "restriction", restr.empty(), restr);
    const auto rep = validate_metric(sd);
    out.add(p + "ultrametric", rep.is_ultrametric, rep.worst_violation.describe(sd));
    out.add(p + "values_in_S", values_in_scale_set(sd, scales), "an entry of Sigma(d) is outside S");
    const auto lhs = ultra_distance(sd, se, scales), rhs = ultra_distance(du, eu, scales);
    out.add(p + "isometry", approx_eq(lhs, rhs), "UD(Sigma) = " + lhs.to_string() + ", UD = " + rhs.to_string());
    const auto su = extend_linf(ctx_s, uu, scales);
    const auto mono = dominated(sd, su);
    out.add(p + "monotone", mono.empty(), mono);
    const auto join = compare(su, join_metrics(sd, se), "Sigma(d v e)");
    out.add(p + "join", join.empty(), join);
  }
  return out.take();
}

std::vector<Outcome> check_eta_density(const Instance& inst, const SuiteOptions& opt) {
  Outcomes out;
  const FactorizationContext ctx(inst.space, inst.subset);
  const auto labels = ctx.subset_labels();
  // The extended metric does not matter for density; any metric on F works.
  const FinMetricSpace d = inst.d ? *inst.d : inst.space.restrict_to(inst.subset);
  for (double eta : opt.etas) {
    const auto c = ctx.with_factor(truncate_factor(ctx.factor(), eta));
    const auto& r = c.retraction().mapping;
    for (const auto& [name, ext] : {std::pair{"xi", extend_l1(c, d)}, std::pair{"sigma", extend_linf(c, d)}}) {
      const auto sd = separated_and_dense(ext, inst.subset, 0.0, eta);
      std::string moved;
      for (std::size_t x = 0; x < ext.size() && moved.empty(); ++x) {
        if (!approx_le(ext(x, r[x]), eta)) {
          moved = std::string(name) + "(d)(" + ext.label(x) + ", r(x)) = " + num(ext(x, r[x]));
        }
      }
      const std::string p = std::string(name) + "(eta=" + num(eta) + ").";
      out.add(p + "F_eta_dense", sd.is_eta_dense, "F is not eta-dense");
      out.add(p + "retraction_within_eta", moved.empty(), moved);
    }
  }
  return out.take();
}

// Radii probing every combinatorial regime: each distinct distance, the
// midpoints between them, and one radius beyond the diameter.
std::vector<double> probe_radii(const FinMetricSpace& m) {
  const auto spectrum = m.distance_spectrum();
  std::vector<double> radii;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    radii.push_back(spectrum[k]);
    const double next = k + 1 < spectrum.size() ? spectrum[k + 1] : 2.0 * spectrum[k];
    radii.push_back(0.5 * (spectrum[k] + next));
  }
  if (radii.empty()) radii.push_back(1.0);
  radii.push_back(spectrum.empty() ? 0.5 : 0.5 * spectrum.front());
  std::sort(radii.begin(), radii.end());
  return radii;
}

std::vector<Outcome> check_dimension(const Instance& inst) {
  Outcomes out;
  const auto& m = inst.space;
  const auto radii = probe_radii(m);
  std::vector<std::size_t> cover, pack;
  std::string bracket, ln_bound, order, mono;
  const double ln_factor = 1.0 + std::log(static_cast<double>(std::max<std::size_t>(m.size(), 1)));
  for (double r : radii) {
    const auto exact_n = covering_number(m, r, CountMode::Exact);
    const auto greedy_n = covering_number(m, r, CountMode::Greedy);
    const auto exact_p = packing_number(m, r, CountMode::Exact);
    const auto greedy_p = packing_number(m, r, CountMode::Greedy);
    if ((greedy_n < exact_n || greedy_p > exact_p) && bracket.empty()) {
      bracket = "r = " + num(r) + ": greedy cover " + std::to_string(greedy_n) + " vs exact " +
                std::to_string(exact_n) + ", greedy pack " + std::to_string(greedy_p) +
                " vs exact " + std::to_string(exact_p);
    }
    if (static_cast<double>(greedy_n) > ln_factor * static_cast<double>(exact_n) && ln_bound.empty()) {
      ln_bound = "r = " + num(r) + ": greedy " + std::to_string(greedy_n) + " > (1 + ln n) * " +
                 std::to_string(exact_n);
    }
    if (exact_n > exact_p && order.empty()) {
      order = "r = " + num(r) + ": N = " + std::to_string(exact_n) + " > pack = " + std::to_string(exact_p);
    }
    cover.push_back(exact_n);
    pack.push_back(exact_p);
  }
  std::string doubling;
  for (std::size_t a = 0; a < radii.size(); ++a) {
    if (a > 0 && (cover[a] > cover[a - 1] || pack[a] > pack[a - 1]) && mono.empty()) {
      mono = "counts increase from r = " + num(radii[a - 1]) + " to r = " + num(radii[a]);
    }
    for (std::size_t b = 0; b < radii.size(); ++b) {
      if (radii[b] > 2.0 * radii[a] && pack[b] > cover[a] && doubling.empty()) {
        doubling = "pack(" + num(radii[b]) + ") = " + std::to_string(pack[b]) + " > N(" +
                   num(radii[a]) + ") = " + std::to_string(cover[a]);
      }
    }
  }
  out.add("greedy_brackets_exact", bracket.empty(), bracket);
  out.add("greedy_cover_log_factor", ln_bound.empty(), ln_bound);
  out.add("cover_le_pack", order.empty(), order);
  out.add("pack_wide_le_cover", doubling.empty(), doubling);
  out.add("counts_monotone", mono.empty(), mono);

  const auto profile = scale_profile(m, radii, CountMode::Exact);
  bool profile_ok = true;
  for (std::size_t a = 1; a < profile.scales.size(); ++a) {
    profile_ok = profile_ok && profile.counts[a] >= profile.counts[a - 1];
  }
  for (std::size_t a = 0; a < profile.scales.size(); ++a) {
    profile_ok = profile_ok && profile.counts[a] <= profile.packing[a];
  }
  out.add("scale_profile_invariants", profile_ok, "scale profile invariants fail");
  return out.take();
}

struct SuiteDef {
  GeneratorFn generator;
  std::function<CheckFn(const SuiteOptions&)> make_check;
};

const std::map<std::string, SuiteDef>& registry() {
  static const std::map<std::string, SuiteDef> suites{
      {"quotient-laws", {base_generator, [](const SuiteOptions&) -> CheckFn { return check_quotient; }}},
      {"retraction-certificates",
       {base_generator,
        [](const SuiteOptions& o) -> CheckFn {
          return [o](const Instance& i) { return check_retraction(i, o); };
        }}},
      {"embedding", {base_generator, [](const SuiteOptions&) -> CheckFn { return check_embedding; }}},
      {"extensor-contracts",
       {extensor_generator, [](const SuiteOptions&) -> CheckFn { return check_extensor; }}},
      {"eta-density",
       {extensor_generator,
        [](const SuiteOptions& o) -> CheckFn {
          return [o](const Instance& i) { return check_eta_density(i, o); };
        }}},
      {"dimension-profile",
       {dimension_generator, [](const SuiteOptions&) -> CheckFn { return check_dimension; }}},
  };
  return suites;
}

const SuiteDef& lookup(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    std::string known;
    for (const auto& [k, _] : reg) known += (known.empty() ? "" : ", ") + k;
    throw DomainError("unknown suite '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

std::vector<Outcome> guarded(const CheckFn& check, const Instance& inst) {
  try {
    return check(inst);
  } catch (const std::exception& e) {
    return {{"no_exception", false, e.what()}};
  }
}

const Outcome* first_failure(const std::vector<Outcome>& outcomes) {
  for (const auto& o : outcomes)
    if (!o.ok) return &o;
  return nullptr;
}

bool fails_property(const CheckFn& check, const Instance& inst, const std::string& property) {
  const auto outcomes = guarded(check, inst);
  return std::any_of(outcomes.begin(), outcomes.end(),
                     [&](const Outcome& o) { return !o.ok && o.property == property; });
}

Instance without_point(const Instance& inst, std::size_t drop) {
  Instance out;
  IndexSet keep;
  for (std::size_t x = 0; x < inst.space.size(); ++x)
    if (x != drop) keep.push_back(x);
  out.space = inst.space.restrict_to(keep);
  for (auto a : inst.subset)
    if (a != drop) out.subset.push_back(a > drop ? a - 1 : a);
  const std::string& gone = inst.space.label(drop);
  auto shrink_metric = [&](const std::optional<FinMetricSpace>& m) -> std::optional<FinMetricSpace> {
    if (!m) return std::nullopt;
    if (!m->contains(gone)) return m;
    IndexSet rest;
    for (std::size_t i = 0; i < m->size(); ++i)
      if (m->label(i) != gone) rest.push_back(i);
    return m->restrict_to(rest);
  };
  out.d = shrink_metric(inst.d);
  out.e = shrink_metric(inst.e);
  return out;
}

Json instance_json(const Instance& inst) { return Json::parse(instance_to_json(inst)); }

}  // namespace

std::uint64_t instance_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1));
  return splitmix64(state);
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

CheckFn suite_check(const std::string& name, const SuiteOptions& options) {
  return lookup(name).make_check(options);
}

Instance shrink(Instance instance, const CheckFn& check, const std::string& property) {
  bool progress = true;
  while (progress && instance.space.size() > 1) {
    progress = false;
    for (std::size_t x = instance.space.size(); x-- > 0;) {
      const bool sole_anchor = instance.subset.size() == 1 && instance.subset.front() == x;
      if (sole_anchor) continue;
      Instance smaller = without_point(instance, x);
      if (fails_property(check, smaller, property)) {
        instance = std::move(smaller);
        progress = true;
        break;
      }
    }
  }
  return instance;
}

SuiteReport run_property(const std::string& suite, const GeneratorFn& generator,
                         const CheckFn& check, const SuiteOptions& options) {
  const std::size_t count = options.instances;
  std::vector<std::vector<Outcome>> results(count);
  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));

  auto work = [&](std::size_t worker) {
    for (std::size_t i = worker; i < count; i += threads) {
      Instance inst;
      try {
        inst = generator(options.seed, i, options.max_size);
      } catch (const std::exception& e) {
        results[i] = {{"generator", false, e.what()}};
        continue;
      }
      results[i] = guarded(check, inst);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  SuiteReport report;
  report.suite = suite;
  report.seed = options.seed;
  report.instances = count;
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < count; ++i) {
    bool failed = false;
    for (const auto& o : results[i]) {
      auto [it, fresh] = slot.emplace(o.property, report.properties.size());
      if (fresh) report.properties.push_back({o.property, 0, 0});
      auto& tally = report.properties[it->second];
      ++tally.checked;
      if (!o.ok) {
        ++tally.failed;
        failed = true;
      }
    }
    if (failed) {
      ++report.failed_instances;
      if (!report.first_failure) {
        const Outcome* bad = first_failure(results[i]);
        report.first_failure = i;
        report.first_message = bad->property + ": " + bad->detail;
        if (bad->property != "generator") {
          report.counterexample =
              shrink(generator(options.seed, i, options.max_size), check, bad->property);
        }
      }
    }
  }
  return report;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  const auto& def = lookup(name);
  return run_property(name, def.generator, def.make_check(options), options);
}

SuiteReport run_suite_on(const std::string& name, const Instance& instance,
                         const SuiteOptions& options) {
  const auto& def = lookup(name);
  SuiteOptions single = options;
  single.instances = 1;
  single.threads = 1;
  return run_property(
      name, [&](std::uint64_t, std::size_t, std::size_t) { return instance; },
      def.make_check(options), single);
}

std::string instance_to_json(const Instance& inst) {
  io::SpaceFile file;
  file.space = inst.space;
  file.subsets["F"] = inst.space.labels_of(inst.subset);
  if (inst.d) file.metrics["d"] = *inst.d;
  if (inst.e) file.metrics["e"] = *inst.e;
  return io::to_json(file);
}

Instance instance_from_json(const std::string& text) {
  auto file = io::from_json(text);
  Instance inst;
  inst.space = file.space;
  auto it = file.subsets.find("F");
  if (it == file.subsets.end()) throw io::ParseError("counterexample lacks subset \"F\"");
  inst.subset = inst.space.indices_of(it->second);
  if (auto d = file.metrics.find("d"); d != file.metrics.end()) inst.d = d->second;
  if (auto e = file.metrics.find("e"); e != file.metrics.end()) inst.e = e->second;
  return inst;
}

std::string SuiteReport::to_json() const {
  Json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["instances"] = instances;
  j["passed"] = passed();
  j["failed_instances"] = failed_instances;
  Json props = Json::array();
  for (const auto& p : properties) {
    props.push_back({{"property", p.name}, {"checked", p.checked}, {"failed", p.failed}});
  }
  j["properties"] = props;
  if (first_failure) {
    Json f;
    f["index"] = *first_failure;
    f["message"] = first_message;
    if (counterexample) f["counterexample"] = instance_json(*counterexample);
    j["first_failure"] = f;
  }
  return j.dump(2) + "\n";
}

std::string SuiteReport::to_text() const {
  std::ostringstream os;
  os << "suite " << suite << " (seed " << seed << ", " << instances << " instances): "
     << (passed() ? "PASS" : "FAIL") << "\n";
  for (const auto& p : properties) {
    os << "  " << (p.failed ? "FAIL " : "ok   ") << p.name << "  " << (p.checked - p.failed) << "/"
       << p.checked << "\n";
  }
  if (first_failure) {
    os << "first failure: instance " << *first_failure << ": " << first_message << "\n";
    if (counterexample) {
      os << "shrunk counterexample (" << counterexample->space.size() << " points):\n"
         << instance_to_json(*counterexample);
    }
  }
  return os.str();
}

}  // namespace metfact::suites
