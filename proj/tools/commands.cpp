#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "phaselab/cech.hpp"
#include "phaselab/dimer.hpp"
#include "phaselab/homotopy.hpp"
#include "phaselab/io.hpp"
#include "phaselab/projective.hpp"
#include "phaselab/states.hpp"
#include "phaselab/supernatural.hpp"

namespace phaselab::cli {

namespace {

using io::json;

const std::vector<std::string> kSuites = {"metric", "partial_trace", "gns", "cocycle", "supernatural"};

struct Options {
  std::string config_path;
  std::string out_path;
  std::string grid;
  int n_dimers = 2;
  double epsilon = 0.25;
  bool conjugate = false;
  bool constant_field = false;
  bool no_timestamp = false;

  std::string loop_path;

  std::uint64_t seed = 1;
  std::string inject_fault;

  std::string a_text;
  std::string type_sequence;
  Natural tail = 0;
  int k_max = 4;
  std::string rational;
  std::string compare;

  CLI::Option* grid_opt = nullptr;
  CLI::Option* n_dimers_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* tail_opt = nullptr;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Prints the report and, with --out, writes the same text to the file.
void emit(json report, const Options& opts, std::ostream& out, bool to_file = true) {
  if (!opts.no_timestamp) report["timestamp"] = utc_timestamp();
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (to_file && !opts.out_path.empty()) io::write_file(opts.out_path, text);
}

SphereGrid parse_grid(const std::string& text) {
  const auto x = text.find('x');
  const auto digits = [](const std::string& s) { return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos; };
  if (x == std::string::npos || !digits(text.substr(0, x)) || !digits(text.substr(x + 1))) {
    throw InputError("--grid expects KxM, got '" + text + "'");
  }
  try {
    return SphereGrid(std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1)));
  } catch (const DomainError& e) {
    throw InputError(std::string("--grid: ") + e.what());
  } catch (const std::out_of_range&) {
    throw InputError("--grid: value out of range");
  }
}

/// Config file first, then command-line overrides.
ModelConfig resolve_model(const Options& opts) {
  ModelConfig cfg;
  if (!opts.config_path.empty()) {
    json j;
    try {
      j = json::parse(io::read_file(opts.config_path));
    } catch (const json::parse_error& e) {
      throw InputError(opts.config_path + ": " + e.what());
    }
    if (!j.is_object()) throw InputError(opts.config_path + ": config must be an object");
    for (const auto& [key, value] : j.items()) {
      try {
        if (key == "epsilon") {
          cfg.epsilon = value.get<double>();
        } else if (key == "n_dimers") {
          cfg.n_dimers = value.get<int>();
        } else if (key == "grid") {
          if (!value.is_array() || value.size() != 2) throw InputError(opts.config_path + ": grid must be [K, M]");
          cfg.grid = SphereGrid(value[0].get<Index>(), value[1].get<Index>());
        } else if (key == "conjugate") {
          cfg.conjugate = value.get<bool>();
        } else if (key == "constant_field") {
          cfg.constant_field = value.get<bool>();
        } else {
          throw InputError(opts.config_path + ": unknown key '" + key + "'");
        }
      } catch (const json::type_error& e) {
        throw InputError(opts.config_path + ": bad value for '" + key + "': " + e.what());
      } catch (const DomainError& e) {
        throw InputError(opts.config_path + ": " + e.what());
      }
    }
  }
  if (opts.grid_opt->count() > 0) cfg.grid = parse_grid(opts.grid);
  if (opts.n_dimers_opt->count() > 0) cfg.n_dimers = opts.n_dimers;
  if (opts.epsilon_opt->count() > 0) cfg.epsilon = opts.epsilon;
  cfg.conjugate = cfg.conjugate || opts.conjugate;
  cfg.constant_field = cfg.constant_field || opts.constant_field;
  cfg.validate();
  return cfg;
}

json model_json(const ModelConfig& cfg, double scale) {
  return {{"epsilon", cfg.epsilon},
          {"n_dimers", cfg.n_dimers},
          {"grid", {cfg.grid.k_theta, cfg.grid.m_phi}},
          {"conjugate", cfg.conjugate},
          {"constant_field", cfg.constant_field},
          {"tol_scale", scale}};
}

int cmd_invariant(const Options& opts, json& context, std::ostream& out) {
  const double scale = tolerance_scale();
  const ModelConfig cfg = resolve_model(opts);
  context["config"] = model_json(cfg, scale);

  const InvariantReport r = invariant_degree(cfg);
  const int expected = cfg.constant_field ? 0 : (cfg.conjugate ? -r.bloch_degree : r.bloch_degree);
  const double agreement_tol = 1e-8 * scale, intertwiner_tol = 1e-8 * scale, weight_tol = kWeightTol * scale;
  const double y_floor = 1 - 0.01 * scale;
  const bool agreement = r.degree == expected && 1 - r.agreement_min <= agreement_tol;
  const bool y_ok = r.y_overlap_min >= y_floor;
  const bool inter_ok = r.intertwiner_max <= intertwiner_tol;
  const bool weight_ok = 1 - r.weight_min <= weight_tol;
  const bool pass = agreement && y_ok && inter_ok && weight_ok;

  json report = context;
  report["degree"] = r.degree;
  report["bloch_degree"] = r.bloch_degree;
  report["expected_degree"] = expected;
  report["agreement"] = agreement;
  report["max_flux"] = r.max_flux;
  report["bloch_max_flux"] = r.bloch_max_flux;
  report["y_overlap_min"] = r.y_overlap_min;
  report["residuals"] = {{"agreement_deficit", 1 - r.agreement_min},
                         {"intertwiner_max", r.intertwiner_max},
                         {"weight_deficit", 1 - r.weight_min}};
  report["gates"] = {{"agreement", agreement},
                     {"y_overlap", {{"pass", y_ok}, {"floor", y_floor}}},
                     {"intertwiner", {{"pass", inter_ok}, {"tol", intertwiner_tol}}},
                     {"weight", {{"pass", weight_ok}, {"tol", weight_tol}}}};
  report["pass"] = pass;
  emit(report, opts, out);
  return pass ? kExitPass : kExitGate;
}

int cmd_contract_loop(const Options& opts, json& context, std::ostream& out) {
  const double scale = tolerance_scale();
  context["config"] = {{"loop", opts.loop_path}, {"tol_scale", scale}};
  const StateLoop loop = io::loop_from_text(io::read_file(opts.loop_path), opts.loop_path);
  const double delta = loop.modulus();
  context["config"]["n"] = loop.n;
  context["config"]["samples"] = loop.samples.size();
  context["config"]["delta"] = delta;
  context["config"]["modulus_factor"] = kModulusFactor;
  if (delta > kMaxLoopStep) {
    throw InputError(opts.loop_path + ": largest step " + std::to_string(delta) + " exceeds " +
                     std::to_string(kMaxLoopStep) + "; resample the loop more finely");
  }
  const HomotopySheet sheet = contract_loop(loop);
  const VerifyReport v = verify_homotopy(sheet, loop, kModulusFactor * delta);

  json report = context;
  report["verifier"] = {{"pass", v.pass},     {"max_step", v.max_step}, {"modulus", v.modulus},
                        {"rows", v.rows},     {"cols", v.cols},         {"violations", v.violations}};
  report["pass"] = v.pass;
  emit(report, opts, out, false);
  if (!opts.out_path.empty()) {
    json doc = report;
    doc["sheet"] = io::to_json(sheet);
    if (!opts.no_timestamp) doc["timestamp"] = utc_timestamp();
    io::write_file(opts.out_path, doc.dump() + "\n");
  }
  return v.pass ? kExitPass : kExitGate;
}

// Self-check suites. Each returns {pass, worst, threshold, cases}; a fault perturbs the suite's input data.

ComplexVector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

ComplexMatrix random_matrix(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

ComplexMatrix random_density(std::mt19937_64& rng, Index n) {
  const ComplexMatrix a = random_matrix(rng, n);
  const ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

std::vector<ComplexMatrix> hermitian_basis(Index d) {
  std::vector<ComplexMatrix> out;
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) {
      ComplexMatrix a = ComplexMatrix::Zero(d, d);
      if (i == j) {
        a(i, i) = 1;
        out.push_back(a);
        continue;
      }
      a(i, j) = a(j, i) = 1;
      out.push_back(a);
      ComplexMatrix b = ComplexMatrix::Zero(d, d);
      b(i, j) = cplx(0, -1);
      b(j, i) = cplx(0, 1);
      out.push_back(b);
    }
  }
  return out;
}

json suite_result(bool pass, double worst, double threshold, int cases) {
  return {{"pass", pass && worst <= threshold}, {"worst", worst}, {"threshold", threshold}, {"cases", cases}};
}

json suite_metric(std::mt19937_64& rng, bool fault, double scale) {
  const double c = std::numbers::pi * std::sqrt(2.0) / 4;
  double worst = 0;
  const int cases = 2000;
  for (int i = 0; i < cases; ++i) {
    const Index n = 2 + i % 4;
    const Ray a(random_vector(rng, n).normalized()), b(random_vector(rng, n).normalized());
    const RayDistances d = ray_distances(a, b);
    const double p = ray_product(a, b);
    ComplexMatrix pb = b.projector();
    if (fault && i == 0) pb(0, 0) += 1e-6;
    worst = std::max({worst, std::abs(d.chord * d.chord - (2 - 2 * p)), std::abs(d.gap - std::sqrt(1 - p * p)),
                      d.chord - d.fubini_study, d.fubini_study - c * d.chord,
                      std::abs(d.gap - 0.5 * trace_norm(ComplexMatrix(a.projector() - pb)))});
  }
  return suite_result(true, worst, 1e-9 * scale, cases);
}

json suite_partial_trace(std::mt19937_64& rng, bool fault, double scale) {
  const std::array<std::pair<Index, Index>, 3> shapes{{{2, 2}, {2, 4}, {4, 2}}};
  double worst = 0;
  const int cases = 300;
  for (int i = 0; i < cases; ++i) {
    const auto [dl, dr] = shapes[std::size_t(i % 3)];
    const ComplexMatrix t = random_matrix(rng, dl * dr);
    ComplexMatrix left = partial_trace(t, dl, dr, Keep::left);
    const ComplexMatrix right = partial_trace(t, dl, dr, Keep::right);
    if (fault && i == 0) left(0, 0) += 1e-6;
    for (const auto& a : hermitian_basis(dl)) {
      worst = std::max(worst, std::abs((left * a).trace() - (t * kron(a, ComplexMatrix::Identity(dr, dr))).trace()));
    }
    for (const auto& a : hermitian_basis(dr)) {
      worst = std::max(worst, std::abs((right * a).trace() - (t * kron(ComplexMatrix::Identity(dl, dl), a)).trace()));
    }
  }
  return suite_result(true, worst, 1e-11 * scale, cases);
}

json suite_gns(std::mt19937_64& rng, bool fault, double scale) {
  bool dims_ok = true;
  double worst = 0;
  int cases = 0;
  for (Index n = 2; n <= 6; ++n) {
    const auto pure = gns(state_from_vector(random_vector(rng, n)));
    dims_ok = dims_ok && pure.dim == n && Index(pure.ideal_basis.size()) == n * (n - 1);
    dims_ok = dims_ok && gns(DensityState::maximally_mixed(n)).dim == n * n;
    const auto mixed = gns(DensityState(random_density(rng, n)));
    dims_ok = dims_ok && mixed.dim == n * n;
    for (const auto* g : {&pure, &mixed}) {
      for (int k = 0; k < 10; ++k, ++cases) {
        const ComplexMatrix a = random_matrix(rng, n), b = random_matrix(rng, n);
        ComplexMatrix ra = g->represent(a);
        if (fault && cases == 0) ra *= 1 + 1e-6;
        worst = std::max(worst, (g->represent(ComplexMatrix(a * b)) - ra * g->represent(b)).norm());
      }
    }
  }
  json out = suite_result(dims_ok, worst, 1e-9 * scale, cases);
  out["dimensions_ok"] = dims_ok;
  return out;
}

json suite_cocycle(std::mt19937_64& rng, bool fault, double scale) {
  std::uniform_real_distribution<double> u(0, 1), angle(-std::numbers::pi, std::numbers::pi);
  std::vector<SamplePoint> xs;
  for (int i = 0; i < 20; ++i) xs.push_back({u(rng), u(rng)});
  SampledCover cover(3);
  cover.set_overlap(0, 1, xs);
  cover.set_overlap(1, 2, xs);
  cover.set_overlap(0, 2, xs);
  cover.set_triple(0, 1, 2, xs);

  std::array<double, 3> slope{};
  for (auto& s : slope) s = angle(rng);
  const auto lambda = [&](std::size_t i, const SamplePoint& x) { return std::polar(1.0, slope[i] * (x[0] + 2 * x[1])); };
  U1Cochain1 c(3, 1.0);
  for (const auto& [pair, points] : cover.overlaps()) {
    std::vector<U1Cochain1::Entry> entries;
    for (const auto& x : points) entries.push_back({x, lambda(pair.first, x) * std::conj(lambda(pair.second, x))});
    if (fault) entries[3].value *= std::polar(1.0, 1e-3);
    c.set(pair.first, pair.second, entries);
  }
  const CocycleReport clean = check_cocycle_u1(c, cover);
  double worst = clean.max_defect;
  bool ok = clean.pass;

  // Corruption must be caught at the corrupted point.
  U1Cochain1 bad = c;
  auto entries = bad.entries().at({0, 2});
  entries[11].value *= std::polar(1.0, 1e-3);
  bad.set(0, 2, entries);
  const CocycleReport caught = check_cocycle_u1(bad, cover);
  ok = ok && !caught.pass && caught.witness_point.has_value() && *caught.witness_point == xs[11];

  // delta_1 of phase-twisted lifts.
  std::map<ChartPair, std::vector<cplx>> mu;
  PUCochain1 lifts(3, ComplexMatrix::Identity(2, 2));
  for (const auto& [pair, points] : cover.overlaps()) {
    std::vector<PUCochain1::Entry> e;
    for (std::size_t p = 0; p < points.size(); ++p) {
      mu[pair].push_back(std::polar(1.0, angle(rng)));
      const ComplexMatrix g = site_rotation(slope[pair.first], 0.3) * site_rotation(slope[pair.second], 0.3).adjoint();
      e.push_back({points[p], mu[pair].back() * g});
    }
    lifts.set(pair.first, pair.second, e);
  }
  const Delta1Result d1 = delta1_lift(lifts, cover);
  const auto& phases = d1.phases.at({0, 1, 2});
  for (std::size_t p = 0; p < xs.size(); ++p) {
    const cplx expected = std::conj(mu[{0, 2}][p]) * mu[{0, 1}][p] * mu[{1, 2}][p];
    worst = std::max(worst, std::abs(phases[p] - expected));
  }

  // Two-chart windings.
  for (int k = -3; k <= 3; ++k) {
    SampledCover circle(2);
    std::vector<SamplePoint> pts;
    std::vector<U1Cochain1::Entry> e;
    for (int i = 0; i < 64; ++i) {
      const double t = i / 64.0;
      pts.push_back({t});
      e.push_back({{t}, std::polar(1.0, 2 * std::numbers::pi * k * t)});
    }
    circle.set_overlap(0, 1, pts);
    U1Cochain1 g(2, 1.0);
    g.set(0, 1, e);
    const CoboundaryResult r = is_coboundary_two_chart(g);
    ok = ok && r.winding == k && r.coboundary == (k == 0);
  }
  return suite_result(ok, worst, 1e-8 * scale, 20 + 20 + 7);
}

json suite_supernatural(std::mt19937_64& rng, bool fault, double) {
  std::uniform_int_distribution<int> pick(0, 4);
  const auto random_sn = [&] {
    SupernaturalNumber a;
    for (Natural p : {2, 3, 5, 7}) {
      const int e = pick(rng);
      if (e == 4) {
        a.set(p, Exponent::inf());
      } else if (e > 0) {
        a.set(p, {false, Natural(e)});
      }
    }
    return a;
  };
  bool ok = true;
  const int cases = 300;
  for (int i = 0; i < cases; ++i) {
    const auto a = random_sn(), b = random_sn(), c = random_sn();
    ok = ok && mul(a, b) == mul(b, a) && mul(mul(a, b), c) == mul(a, mul(b, c));
    const IsoWitness w = iso_equivalent(a, b);
    ok = ok && iso_equivalent(a, a).equivalent && w.equivalent == iso_equivalent(b, a).equivalent;
    if (w.equivalent) {
      const Natural cw = fault ? w.c + 1 : w.c;
      ok = ok && mul(a, SupernaturalNumber::from_natural(cw)) == mul(b, SupernaturalNumber::from_natural(w.d));
      if (iso_equivalent(b, c).equivalent) ok = ok && iso_equivalent(a, c).equivalent;
    }
  }
  for (const auto& row : homotopy_table(SupernaturalNumber::parse("2^inf"), 8)) {
    if (row.k % 2 == 0) {
      ok = ok && row.unitary == GroupSymbol::zero && row.isotropy == GroupSymbol::zero;
    } else {
      ok = ok && row.unitary == GroupSymbol::q_a &&
           row.isotropy == (row.k == 1 ? GroupSymbol::z_times_q_a : GroupSymbol::q_a);
    }
  }
  const IsoWitness w = iso_equivalent(SupernaturalNumber::parse("2^inf"), SupernaturalNumber::parse("2^inf*3"));
  ok = ok && w.equivalent && w.c == 3 && w.d == 1;
  return suite_result(ok, ok ? 0.0 : 1.0, 0.0, cases);
}

int cmd_selfcheck(const Options& opts, json& context, std::ostream& out) {
  const double scale = tolerance_scale();
  context["config"] = {{"seed", opts.seed}, {"tol_scale", scale}};
  if (!opts.inject_fault.empty()) context["config"]["inject_fault"] = opts.inject_fault;
  using Suite = std::function<json(std::mt19937_64&, bool, double)>;
  const std::vector<std::pair<std::string, Suite>> suites = {{"metric", suite_metric},
                                                             {"partial_trace", suite_partial_trace},
                                                             {"gns", suite_gns},
                                                             {"cocycle", suite_cocycle},
                                                             {"supernatural", suite_supernatural}};
  json report = context;
  bool pass = true;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    std::mt19937_64 rng(opts.seed * 1000 + i);
    const json r = suites[i].second(rng, opts.inject_fault == suites[i].first, scale);
    report["suites"][suites[i].first] = r;
    pass = pass && r["pass"].get<bool>();
  }
  report["pass"] = pass;
  emit(report, opts, out);
  return pass ? kExitPass : kExitGate;
}

int cmd_supernatural(const Options& opts, json& context, std::ostream& out) {
  if (opts.a_text.empty() == opts.type_sequence.empty()) {
    throw InputError("supernatural: give exactly one of --a and --type");
  }
  SupernaturalNumber a;
  if (!opts.a_text.empty()) {
    a = SupernaturalNumber::parse(opts.a_text);
  } else {
    std::vector<Natural> ns;
    std::stringstream ss(opts.type_sequence);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
        throw InputError("--type expects comma-separated matrix sizes, got '" + opts.type_sequence + "'");
      }
      ns.push_back(std::stoull(item));
    }
    std::optional<Natural> tail;
    if (opts.tail_opt->count() > 0) tail = opts.tail;
    try {
      a = from_type_sequence(ns, tail);
    } catch (const DomainError& e) {
      throw InputError(e.what());
    }
  }
  if (opts.k_max < 1) throw InputError("--k-max must be >= 1");
  context["config"] = {{"a", opts.a_text}, {"type", opts.type_sequence}, {"k_max", opts.k_max}};
  if (opts.tail_opt->count() > 0) context["config"]["tail"] = opts.tail;

  json report = context;
  report["a"] = a.to_string();
  for (const auto& row : homotopy_table(a, opts.k_max)) {
    report["table"].push_back({{"k", row.k}, {"unitary", to_string(row.unitary)}, {"isotropy", to_string(row.isotropy)}});
  }
  if (!opts.rational.empty()) {
    const Rational r = Rational::parse(opts.rational);
    report["contains"] = {{"rational", std::to_string(r.num) + "/" + std::to_string(r.den)}, {"member", q_contains(a, r)}};
  }
  if (!opts.compare.empty()) {
    const SupernaturalNumber b = SupernaturalNumber::parse(opts.compare);
    const IsoWitness w = iso_equivalent(a, b);
    report["iso"] = {{"b", b.to_string()}, {"equivalent", w.equivalent}};
    if (w.equivalent) {
      report["iso"]["c"] = w.c;
      report["iso"]["d"] = w.d;
    }
  }
  report["pass"] = true;
  emit(report, opts, out);
  return kExitPass;
}

void add_model_options(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON config {epsilon, n_dimers, grid: [K, M]}");
  o.grid_opt = sub->add_option("--grid", o.grid, "sphere grid KxM");
  o.n_dimers_opt = sub->add_option("--n-dimers", o.n_dimers, "dimers in the truncated chain");
  o.epsilon_opt = sub->add_option("--epsilon", o.epsilon, "band half-width");
  sub->add_flag("--conjugate", o.conjugate, "complex-conjugate every unitary of the construction");
  sub->add_flag("--constant-field", o.constant_field, "debug: replace the projected map by a constant ray");
}

void add_common_options(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out_path, "also write the report to this path");
  sub->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp for byte-stable reports");
}

}  // namespace

double tolerance_scale() {
  const char* env = std::getenv("PHASELAB_TOL_SCALE");
  if (env == nullptr || *env == '\0') return 1.0;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v)) {
    throw InputError(std::string("PHASELAB_TOL_SCALE must be a positive number, got '") + env + "'");
  }
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical invariants of parametrized quantum phases", "phaselab"};
  app.require_subcommand(1);
  Options o;

  auto* invariant = app.add_subcommand("invariant", "integer invariant of the dimer-chain family");
  add_model_options(invariant, o);
  add_common_options(invariant, o);

  auto* contract = app.add_subcommand("contract-loop", "contract a based loop of states and verify the homotopy");
  contract->add_option("--loop", o.loop_path, "loop document {n, samples}")->required();
  add_common_options(contract, o);

  auto* selfcheck = app.add_subcommand("selfcheck", "seeded property suites");
  selfcheck->add_option("--seed", o.seed, "random seed");
  selfcheck->add_option("--inject-fault", o.inject_fault, "test mode: corrupt one suite's data")
      ->check(CLI::IsMember(kSuites));
  add_common_options(selfcheck, o);

  auto* super = app.add_subcommand("supernatural", "supernatural numbers and homotopy tables");
  super->add_option("--a", o.a_text, "supernatural number, e.g. 2^inf*3");
  super->add_option("--type", o.type_sequence, "divisibility chain of matrix sizes, e.g. 2,4,8");
  o.tail_opt = super->add_option("--tail", o.tail, "the chain continues forever by this ratio");
  super->add_option("--k-max", o.k_max, "largest homotopy degree");
  super->add_option("--rational", o.rational, "test membership of p/q in Q(a)");
  super->add_option("--compare", o.compare, "test a ~ b");
  add_common_options(super, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitPass;
    }
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  json context;
  std::function<int()> body;
  if (invariant->parsed()) {
    context["command"] = "invariant";
    body = [&] { return cmd_invariant(o, context, out); };
  } else if (contract->parsed()) {
    context["command"] = "contract-loop";
    body = [&] { return cmd_contract_loop(o, context, out); };
  } else if (selfcheck->parsed()) {
    context["command"] = "selfcheck";
    body = [&] { return cmd_selfcheck(o, context, out); };
  } else {
    context["command"] = "supernatural";
    body = [&] { return cmd_supernatural(o, context, out); };
  }

  const auto failure = [&](const std::string& kind, const std::string& message, int code) {
    json record = context;
    record["error"] = {{"kind", kind}, {"message", message}};
    record["pass"] = false;
    emit(record, o, out, false);
    err << "error: " << message << "\n";
    return code;
  };
  try {
    return body();
  } catch (const InputError& e) {
    return failure("input", e.what(), kExitInput);
  } catch (const GateError& e) {
    return failure("gate", e.what(), kExitGate);
  } catch (const Error& e) {
    return failure("numerical", e.what(), kExitGate);
  }
}

}  // namespace phaselab::cli
