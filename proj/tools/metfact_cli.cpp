// metfact: command-line front end.
//
// Exit codes: 0 success, 1 contract violation (validate, check),
// 2 malformed input or invalid arguments.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "metfact/core.hpp"
#include "metfact/dimension.hpp"
#include "metfact/error.hpp"
#include "metfact/factorize.hpp"
#include "metfact/gen.hpp"
#include "metfact/io.hpp"
#include "metfact/quotient.hpp"
#include "metfact/retraction.hpp"
#include "metfact/suites.hpp"

namespace {

using namespace metfact;
using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

// Default seed for `gen` and `check` when --seed is absent.
constexpr const char* kSeedVariable = "METFACT_SEED";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedVariable);
  if (!env || !*env) return 1;
  char* end = nullptr;
  const auto v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw UsageError(std::string(kSeedVariable) + " is not an unsigned integer");
  return v;
}

void write_text(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw io::ParseError("cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double to_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v)) {
    throw UsageError(std::string(what) + ": '" + s + "' is not a number");
  }
  return v;
}

// --subset names a subset block of the file, or lists labels separated by
// commas. Without --subset the block "F" is used when present.
IndexSet resolve_subset(const io::SpaceFile& file, const std::optional<std::string>& spec) {
  std::vector<std::string> labels;
  if (!spec) {
    auto it = file.subsets.find("F");
    if (it == file.subsets.end()) throw UsageError("--subset is required (the file has no subset \"F\")");
    labels = it->second;
  } else if (auto it = file.subsets.find(*spec); it != file.subsets.end()) {
    labels = it->second;
  } else {
    labels = split(*spec, ',');
  }
  for (const auto& l : labels) {
    if (!file.space.contains(l)) throw StructuralError("subset label '" + l + "' is not a point of the space");
  }
  return file.space.indices_of(labels);
}

// Reorders `m` onto the labels of `like` (same label set required).
FinMetricSpace reorder(const FinMetricSpace& m, const FinMetricSpace& like) {
  require_same_labels(m, like);
  IndexSet idx;
  for (const auto& l : like.labels()) idx.push_back(m.index_of(l));
  std::vector<double> flat;
  for (auto i : idx)
    for (auto j : idx) flat.push_back(m(i, j));
  return FinMetricSpace(like.labels(), std::move(flat));
}

struct Common {
  std::string input = "-";
  std::string output = "-";
  std::optional<std::string> subset;
  std::string labels = "detect";

  io::SpaceFile load(const std::string& path) const {
    const auto mode = labels == "auto" ? io::CsvLabels::Auto
                      : labels == "header" ? io::CsvLabels::Header
                                           : io::CsvLabels::Detect;
    return io::load(path, mode);
  }
};

void add_labels_option(CLI::App* cmd, Common& c) {
  cmd->add_option("--labels", c.labels, "CSV labels: detect, auto (p0, p1, ...) or header")
      ->check(CLI::IsMember({"detect", "auto", "header"}));
}

// ---------------------------------------------------------------------------

int run_validate(const Common& c) {
  const auto file = c.load(c.input);
  const auto rep = validate_metric(file.space);
  std::ostringstream os;
  os << "points: " << file.space.size() << "\n"
     << "metric: " << (rep.is_metric ? "yes" : "no") << "\n"
     << "ultrametric: " << (rep.is_ultrametric ? "yes" : "no") << "\n";
  if (rep.worst_violation.kind != Violation::Kind::None) {
    os << "worst violation: " << rep.worst_violation.describe(file.space) << "\n";
  }
  write_text(os.str(), c.output);
  return rep.is_metric ? kOk : kViolation;
}

int run_quotient(const Common& c) {
  const auto file = c.load(c.input);
  const auto subset = resolve_subset(file, c.subset);
  const auto q = quotient(file.space, subset);
  io::SpaceFile out;
  out.space = q.space;
  auto& proj = out.maps["projection"];
  for (std::size_t x = 0; x < file.space.size(); ++x) {
    proj[file.space.label(x)] = q.space.label(q.projection[x]);
  }
  io::save(out, c.output);
  return kOk;
}

Json label_list(const FinMetricSpace& m, const IndexSet& s) { return Json(m.labels_of(s)); }

Json trace_json(const FinMetricSpace& m, const Retraction& r) {
  Json j;
  j["method"] = r.method == RetractionMethod::Engelking ? "engelking" : "bdhm";
  if (r.method == RetractionMethod::Bdhm) j["tau"] = r.tau;
  Json mapping = Json::object();
  for (std::size_t x = 0; x < m.size(); ++x) mapping[m.label(x)] = m.label(r.mapping[x]);
  j["mapping"] = mapping;
  if (!r.trace) return j;
  const auto& t = *r.trace;
  j["last_scale"] = t.last_scale;
  Json v = Json::array(), u = Json::array(), p = Json::array(), pieces = Json::array();
  for (const auto& s : t.neighborhoods) v.push_back(label_list(m, s));
  for (const auto& s : t.annuli) u.push_back(label_list(m, s));
  for (const auto& s : t.nets) p.push_back(label_list(m, s));
  for (const auto& piece : t.pieces) {
    pieces.push_back({{"annulus", piece.annulus},
                      {"members", label_list(m, piece.members)},
                      {"o", m.label(piece.o)},
                      {"a", m.label(piece.a)},
                      {"p", m.label(piece.p)},
                      {"reach", piece.reach}});
  }
  j["neighborhoods"] = v;
  j["annuli"] = u;
  j["nets"] = p;
  j["pieces"] = pieces;
  Json annulus_of = Json::object();
  for (std::size_t x = 0; x < m.size(); ++x) annulus_of[m.label(x)] = t.annulus_of[x];
  j["annulus_of"] = annulus_of;
  return j;
}

int run_retract(const Common& c, const std::string& method, double tau,
                const std::optional<std::string>& trace_path, bool verify) {
  const auto file = c.load(c.input);
  const auto subset = resolve_subset(file, c.subset);
  const Retraction r = method == "bdhm" ? retract_bdhm(file.space, subset, tau)
                                        : retract_engelking(file.space, subset);
  std::ostringstream os;
  os << "point\tretract\n";
  for (std::size_t x = 0; x < file.space.size(); ++x) {
    os << file.space.label(x) << "\t" << file.space.label(r.mapping[x]) << "\n";
  }
  write_text(os.str(), c.output);
  if (trace_path) write_text(trace_json(file.space, r).dump(2) + "\n", *trace_path);
  if (!verify) return kOk;
  const auto rep = verify_retraction(file.space, subset, r);
  for (const auto& cert : rep.certificates) {
    std::cerr << (cert.passed ? "ok   " : "FAIL ") << cert.name;
    if (!cert.passed) std::cerr << ": " << cert.counterexample;
    std::cerr << "\n";
  }
  return rep.all_passed() ? kOk : kViolation;
}

int run_embed(const Common& c, const std::optional<std::string>& lambda_path) {
  const auto file = c.load(c.input);
  const auto subset = resolve_subset(file, c.subset);
  FinMetricSpace lambda = file.space;
  if (lambda_path) lambda = reorder(c.load(*lambda_path).space, file.space);
  const FactorizationContext ctx(lambda, subset);
  const auto phi = embed_phi(ctx);
  const auto& q = ctx.quotient().space;
  std::ostringstream os;
  os << "point\tphi\n";
  for (std::size_t x = 0; x < phi.size(); ++x) {
    os << file.space.label(x) << "\t" << file.space.label(phi[x].first) << "|"
       << q.label(phi[x].second) << "\n";
  }
  write_text(os.str(), c.output);
  return kOk;
}

int run_extend(const Common& c, const std::string& context_path, const std::string& norm,
               const std::string& v_spec, const std::optional<double>& eta,
               const std::optional<std::string>& scale_spec) {
  const auto d_file = c.load(c.input);
  const auto x_file = c.load(context_path);
  const auto subset = resolve_subset(x_file, c.subset);
  std::optional<ScaleSet> scales;
  if (scale_spec) scales = ScaleSet::parse(*scale_spec);
  if (scales && norm != "linf") throw UsageError("--scale-set applies to --norm linf only");

  FactorizationContext ctx(x_file.space, subset);
  if (v_spec != "auto") {
    ctx = ctx.with_factor(c.load(v_spec).space);
  } else if (scales) {
    // the quotient metric is rarely ultrametric; use its S-snapped subdominant ultrametric
    ctx = ctx.with_factor(snap_to_scale(single_linkage_ultrametric(ctx.factor()), *scales));
  }
  if (eta) ctx = ctx.with_factor(truncate_factor(ctx.factor(), *eta));

  io::SpaceFile out;
  out.space = norm == "l1" ? extend_l1(ctx, d_file.space) : extend_linf(ctx, d_file.space, scales);
  out.subsets["F"] = ctx.subset_labels();
  out.scale_set = scales;
  out.metrics["d"] = d_file.space;
  io::save(out, c.output);
  return kOk;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(to_double(s, what));
  return out;
}

// Powers of `base` in [delta / 2, diam): the default box-counting scales.
std::vector<double> cli_scales(const FinMetricSpace& m, double base) {
  std::vector<double> out;
  const double delta = m.min_positive_distance(), diam = m.diameter();
  if (!(delta > 0.0)) return out;
  const int lo = static_cast<int>(std::floor(std::log(delta / 2.0) / std::log(base))) - 1;
  const int hi = static_cast<int>(std::ceil(std::log(diam) / std::log(base))) + 1;
  for (int k = hi; k >= lo; --k) {
    const double s = std::pow(base, k);
    if (s >= delta / 2.0 * (1.0 - 1e-12) && s < diam * (1.0 - 1e-12)) out.push_back(s);
  }
  return out;
}

int run_dim(const Common& c, const std::string& estimator, const std::optional<std::string>& scales_text,
            const std::optional<std::string>& pairs_text, double base, const std::string& mode_text) {
  const auto file = c.load(c.input);
  const auto& m = file.space;
  const CountMode mode = mode_text == "exact"    ? CountMode::Exact
                         : mode_text == "greedy" ? CountMode::Greedy
                                                 : CountMode::Auto;
  std::ostringstream os;
  os << "estimator: " << estimator << "\n";
  if (estimator == "assouad") {
    if (scales_text) throw UsageError("--scales does not apply to the assouad estimator");
    std::vector<std::pair<double, double>> pairs;
    if (pairs_text) {
      for (const auto& item : split(*pairs_text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw UsageError("--pairs: expected R:r, got '" + item + "'");
        pairs.emplace_back(to_double(parts[0], "--pairs"), to_double(parts[1], "--pairs"));
      }
    } else {
      pairs = standard_assouad_pairs(m);
    }
    const auto est = adim_estimate(m, pairs, mode);
    os << "estimate: " << fmt(est.value) << "\n"
       << "center: " << m.label(est.center) << "\n"
       << "R\tr\tcount\n"
       << fmt(est.big_radius) << "\t" << fmt(est.small_radius) << "\t" << est.count << "\n";
    write_text(os.str(), c.output);
    return kOk;
  }
  if (pairs_text) throw UsageError("--pairs applies to the assouad estimator only");
  const auto scales = scales_text ? parse_list(*scales_text, "--scales") : cli_scales(m, base);
  const auto est =
      estimator == "pack" ? packing_slope_estimate(m, scales, mode) : ubdim_estimate(m, scales, mode);
  os << "estimate: " << fmt(est.slope) << "\n"
     << "intercept: " << fmt(est.intercept) << "\n"
     << "scale\tcount\tresidual\n";
  for (std::size_t k = 0; k < est.scales.size(); ++k) {
    os << fmt(est.scales[k]) << "\t" << est.counts[k] << "\t"
       << (k < est.residuals.size() ? fmt(est.residuals[k]) : "0") << "\n";
  }
  write_text(os.str(), c.output);
  return kOk;
}

struct CheckArgs {
  std::string suite;
  std::size_t instances = 200;
  std::optional<std::uint64_t> seed;
  std::size_t size = 40;
  std::string report = "text";
  std::size_t threads = 0;
  std::optional<std::string> space;
  std::optional<std::string> counterexample;
  std::vector<double> taus;
  std::vector<double> etas;
};

int run_check(const Common& c, const CheckArgs& a) {
  suites::SuiteOptions opt;
  opt.instances = a.instances;
  opt.seed = a.seed ? *a.seed : default_seed();
  opt.max_size = a.size;
  opt.threads = a.threads;
  if (!a.taus.empty()) opt.taus = a.taus;
  if (!a.etas.empty()) opt.etas = a.etas;

  auto check = suites::suite_check(a.suite, opt);
  suites::SuiteReport report;
  if (a.space) {
    const auto file = c.load(*a.space);
    suites::Instance inst;
    inst.space = file.space;
    inst.subset = resolve_subset(file, c.subset);
    if (auto it = file.metrics.find("d"); it != file.metrics.end()) inst.d = it->second;
    if (auto it = file.metrics.find("e"); it != file.metrics.end()) inst.e = it->second;
    if (a.suite == "eta-density" && !a.etas.empty()) {
      // A supplied space is itself held to eta-density of F.
      check = [check, etas = opt.etas](const suites::Instance& i) {
        auto out = check(i);
        for (double eta : etas) {
          const bool dense = separated_and_dense(i.space, i.subset, 0.0, eta).is_eta_dense;
          out.push_back({"input(eta=" + fmt(eta) + ").F_eta_dense", dense, "F is not eta-dense in the input"});
        }
        return out;
      };
    }
    opt.instances = 1;
    opt.threads = 1;
    report = suites::run_property(
        a.suite, [&](std::uint64_t, std::size_t, std::size_t) { return inst; }, check, opt);
  } else {
    report = suites::run_suite(a.suite, opt);
  }
  write_text(a.report == "json" ? report.to_json() : report.to_text(), c.output);
  if (report.counterexample && a.counterexample) {
    write_text(suites::instance_to_json(*report.counterexample), *a.counterexample);
  }
  return report.passed() ? kOk : kViolation;
}

int run_gen(const Common& c, const std::string& kind, const gen::Cantor& cantor, const gen::Line& line,
            const gen::Grid& grid, gen::RandomUltra ultra, gen::RandomMetric metric,
            const std::optional<std::uint64_t>& seed) {
  io::SpaceFile out;
  if (kind == "cantor") {
    out.space = gen::generate(cantor);
  } else if (kind == "line") {
    out.space = gen::generate(line);
  } else if (kind == "grid") {
    out.space = gen::generate(grid);
  } else if (kind == "random-ultra") {
    ultra.seed = seed ? *seed : default_seed();
    out.space = gen::generate(ultra);
    out.scale_set = ScaleSet::geometric(1.0 / ultra.height_base);
  } else {
    metric.seed = seed ? *seed : default_seed();
    out.space = gen::generate(metric);
  }
  io::save(out, c.output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metfact: quotients, retractions, extensions and dimension estimates of finite metric spaces"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  auto add_io = [&](CLI::App* cmd, bool subset) {
    cmd->add_option("space", common.input, "SpaceFile (JSON) or CSV matrix; '-' for stdin");
    cmd->add_option("-o,--output", common.output, "output path; '-' for stdout");
    if (subset) cmd->add_option("--subset", common.subset, "subset block name or comma-separated labels");
    add_labels_option(cmd, common);
  };

  auto* validate = app.add_subcommand("validate", "check the metric and ultrametric axioms");
  add_io(validate, false);

  auto* quot = app.add_subcommand("quotient", "collapse F to a single point");
  add_io(quot, true);

  std::string method = "engelking";
  double tau = 2.0;
  std::optional<std::string> trace_path;
  bool verify = false;
  auto* retract = app.add_subcommand("retract", "retraction of X onto F");
  add_io(retract, true);
  retract->add_option("--method", method)->check(CLI::IsMember({"engelking", "bdhm"}));
  retract->add_option("--tau", tau, "BDHM star parameter (> 1)");
  retract->add_option("--trace", trace_path, "write the construction trace as JSON");
  retract->add_flag("--verify", verify, "check all certificates; exit 1 if any fails");

  std::optional<std::string> lambda_path;
  auto* embed = app.add_subcommand("embed", "the embedding Phi = (r, pi)");
  add_io(embed, true);
  embed->add_option("--lambda", lambda_path, "metric on X driving r and pi (default: the space)");

  std::string context_path, norm = "l1", v_spec = "auto";
  std::optional<double> eta;
  std::optional<std::string> scale_spec;
  auto* extend = app.add_subcommand("extend", "extend a metric on F to X");
  add_io(extend, true);
  extend->add_option("--context", context_path, "the space X containing F")->required();
  extend->add_option("--norm", norm)->check(CLI::IsMember({"l1", "linf"}));
  extend->add_option("--v", v_spec, "factor metric on X/F: auto or a SpaceFile");
  extend->add_option("--eta", eta, "truncate the factor at eta");
  extend->add_option("--scale-set", scale_spec, "all | geometric:q | explicit:v1,v2,...");

  std::string estimator = "box", count_mode = "auto";
  std::optional<std::string> scales_text, pairs_text;
  double base = 2.0;
  auto* dim = app.add_subcommand("dim", "box-counting, packing and Assouad estimates");
  add_io(dim, false);
  dim->add_option("--estimator", estimator)->check(CLI::IsMember({"box", "assouad", "pack"}));
  dim->add_option("--scales", scales_text, "comma-separated radii");
  dim->add_option("--pairs", pairs_text, "comma-separated R:r pairs");
  dim->add_option("--base", base, "ratio of the default scales")->check(CLI::Range(1.0 + 1e-9, 1e9));
  dim->add_option("--mode", count_mode)->check(CLI::IsMember({"auto", "exact", "greedy"}));

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "run a named invariant suite");
  check->add_option("suite", check_args.suite)->required()->check(CLI::IsMember(suites::suite_names()));
  check->add_option("--instances", check_args.instances);
  check->add_option("--seed", check_args.seed, std::string("default: $") + kSeedVariable + " or 1");
  check->add_option("--size", check_args.size, "maximum number of points");
  check->add_option("--report", check_args.report)->check(CLI::IsMember({"text", "json"}));
  check->add_option("--threads", check_args.threads, "0: all cores");
  check->add_option("--space", check_args.space, "replay the suite on one SpaceFile");
  check->add_option("--subset", common.subset, "subset for --space (default: block F)");
  check->add_option("--counterexample", check_args.counterexample, "write the shrunk counterexample here");
  check->add_option("--tau", check_args.taus, "BDHM parameters")->delimiter(',');
  check->add_option("--eta", check_args.etas, "truncation levels")->delimiter(',');
  check->add_option("-o,--output", common.output);
  add_labels_option(check, common);

  std::string kind;
  gen::Cantor cantor{3};
  gen::Line line{8, 1.0};
  gen::Grid grid{4, 4, 1.0};
  gen::RandomUltra ultra{16, 0, 2.0};
  gen::RandomMetric metric{16, 0, 2};
  std::optional<std::uint64_t> gen_seed;
  auto* generate = app.add_subcommand("gen", "write a fixture space");
  generate->add_option("kind", kind)
      ->required()
      ->check(CLI::IsMember({"cantor", "line", "grid", "random-ultra", "random-metric"}));
  generate->add_option("--depth", cantor.depth, "cantor depth");
  generate->add_option("--n", [&](CLI::results_t r) {
    const auto n = std::stoull(r.front());
    line.n = grid.n = ultra.n = metric.n = n;
    return true;
  }, "number of points (grid: rows)");
  generate->add_option("--m", grid.m, "grid columns");
  generate->add_option("--step", [&](CLI::results_t r) {
    line.step = grid.step = std::stod(r.front());
    return true;
  }, "spacing");
  generate->add_option("--base", ultra.height_base, "random-ultra height base");
  generate->add_option("--dim", metric.ambient_dim, "random-metric ambient dimension");
  generate->add_option("--seed", gen_seed, std::string("default: $") + kSeedVariable + " or 1");
  generate->add_option("-o,--output", common.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*validate) return run_validate(common);
    if (*quot) return run_quotient(common);
    if (*retract) return run_retract(common, method, tau, trace_path, verify);
    if (*embed) return run_embed(common, lambda_path);
    if (*extend) return run_extend(common, context_path, norm, v_spec, eta, scale_spec);
    if (*dim) return run_dim(common, estimator, scales_text, pairs_text, base, count_mode);
    if (*check) return run_check(common, check_args);
    if (*generate) return run_gen(common, kind, cantor, line, grid, ultra, metric, gen_seed);
  } catch (const io::ParseError& e) {
    std::cerr << "metfact: " << e.what() << "\n";
    return kInputError;
  } catch (const std::logic_error& e) {  // structural, domain and capacity errors
    std::cerr << "metfact: " << e.what() << "\n";
    return kInputError;
  } catch (const UsageError& e) {
    std::cerr << "metfact: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "metfact: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
