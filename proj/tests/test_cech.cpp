#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"
#include "phaselab/cech.hpp"

using namespace phaselab;

namespace {

constexpr double kPi = std::numbers::pi;

/// Ground ray of -r.sigma in the gauge that is regular at the north pole.
ComplexVector bloch(const Eigen::Vector3d& r) {
  const double th = std::acos(std::clamp(r.z(), -1.0, 1.0)), ph = std::atan2(r.y(), r.x());
  ComplexVector v(2);
  v << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
  return v;
}

// Orientation pinned once: the Bloch field has degree +1 on the default grid.
constexpr int kBlochDegree = 1;

std::vector<cplx> loop_phases(int samples, const std::function<cplx(double)>& g) {
  std::vector<cplx> out;
  for (int i = 0; i <= samples; ++i) out.push_back(g(double(i) / samples));
  return out;
}

/// Three charts on a line with points shared by all overlaps.
SampledCover line_cover(std::mt19937_64& rng, int points) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<SamplePoint> xs;
  for (int i = 0; i < points; ++i) xs.push_back({u(rng), u(rng)});
  SampledCover cover(3);
  cover.set_overlap(0, 1, xs);
  cover.set_overlap(1, 2, xs);
  cover.set_overlap(0, 2, xs);
  cover.set_triple(0, 1, 2, xs);
  return cover;
}

/// lambda_i(x) lambda_j(x)^{-1} with smooth random chart phases.
U1Cochain1 coboundary(std::mt19937_64& rng, const SampledCover& cover) {
  std::normal_distribution<double> g;
  std::vector<std::array<double, 3>> coeff(cover.n_charts());
  for (auto& c : coeff) c = {g(rng), g(rng), g(rng)};
  const auto lambda = [&](std::size_t i, const SamplePoint& x) {
    return std::polar(1.0, coeff[i][0] + coeff[i][1] * x[0] + coeff[i][2] * x[1]);
  };
  U1Cochain1 c(cover.n_charts(), 1.0);
  for (const auto& [pair, points] : cover.overlaps()) {
    std::vector<U1Cochain1::Entry> entries;
    for (const auto& x : points) entries.push_back({x, lambda(pair.first, x) * std::conj(lambda(pair.second, x))});
    c.set(pair.first, pair.second, entries);
  }
  return c;
}

/// Two charts whose overlap is the circle, sampled at t = i/K.
std::pair<SampledCover, U1Cochain1> circle_cochain(int samples, const std::function<cplx(double)>& g) {
  SampledCover cover(2);
  std::vector<SamplePoint> pts;
  std::vector<U1Cochain1::Entry> entries;
  for (int i = 0; i < samples; ++i) {
    const double t = double(i) / samples;
    pts.push_back({t});
    entries.push_back({{t}, g(t)});
  }
  cover.set_overlap(0, 1, pts);
  U1Cochain1 c(2, 1.0);
  c.set(0, 1, entries);
  return {cover, c};
}

}  // namespace

TEST_CASE("cover validation") {
  SampledCover cover(3);
  cover.set_overlap(0, 1, {{0.1}, {0.2}});
  cover.set_overlap(1, 2, {{0.2}});
  cover.set_overlap(0, 2, {{0.2}, {0.3}});
  CHECK_NOTHROW(cover.set_triple(0, 1, 2, {{0.2}}));
  CHECK_THROWS_AS(cover.set_triple(0, 1, 2, {{0.1}}), DomainError);
  CHECK(cover.overlap(1, 0).size() == 2);
  CHECK_THROWS_AS(cover.set_overlap(0, 3, {}), DimensionError);
}

TEST_CASE("cochain storage and inverses") {
  U1Cochain1 c(2, 1.0);
  const cplx g = std::polar(1.0, 0.4);
  c.set(1, 0, {{{0.5}, g}});
  CHECK(std::abs(c.value(0, 1, {0.5}) - std::conj(g)) <= 1e-15);
  CHECK(std::abs(c.value(1, 0, {0.5}) - g) <= 1e-15);
  CHECK(c.value(1, 1, {0.5}) == cplx(1));
  CHECK_THROWS_AS(c.value(0, 1, {0.6}), DomainError);
}

TEST_CASE("coboundaries are cocycles") {
  std::mt19937_64 rng(41);
  const SampledCover cover = line_cover(rng, 30);
  const auto report = check_cocycle_u1(coboundary(rng, cover), cover);
  CHECK(report.pass);
  CHECK_FALSE(report.vacuous);
  CHECK(report.max_defect <= 1e-12);
}

TEST_CASE("two-chart cover is a vacuous cocycle") {
  const auto [cover, c] = circle_cochain(16, [](double t) { return std::polar(1.0, 2 * kPi * t); });
  const auto report = check_cocycle_u1(c, cover);
  CHECK(report.pass);
  CHECK(report.vacuous);
}

TEST_CASE("corrupted cocycle entry is located") {
  std::mt19937_64 rng(42);
  const SampledCover cover = line_cover(rng, 10);
  U1Cochain1 c = coboundary(rng, cover);
  auto entries = c.entries().at({0, 2});
  entries[7].value *= std::polar(1.0, 1e-3);
  const SamplePoint bad = entries[7].point;
  c.set(0, 2, entries);
  const auto report = check_cocycle_u1(c, cover);
  CHECK_FALSE(report.pass);
  CHECK(report.max_defect == doctest::Approx(std::abs(std::polar(1.0, 1e-3) - 1.0)).epsilon(1e-6));
  REQUIRE(report.witness_point.has_value());
  CHECK(*report.witness_point == bad);
  CHECK(*report.witness_triple == ChartTriple{0, 1, 2});
}

TEST_CASE("missing cochain samples are reported") {
  std::mt19937_64 rng(43);
  const SampledCover cover = line_cover(rng, 4);
  U1Cochain1 c(3, 1.0);
  CHECK_THROWS_AS(check_cocycle_u1(c, cover), DomainError);
}

TEST_CASE("refinement") {
  std::mt19937_64 rng(44);
  const SampledCover cover = line_cover(rng, 12);
  const U1Cochain1 c = coboundary(rng, cover);

  const U1Cochain1 same = refine(c, {0, 1, 2}, cover);
  for (const auto& [pair, entries] : c.entries())
    for (std::size_t k = 0; k < entries.size(); ++k)
      CHECK(std::abs(same.entries().at(pair)[k].value - entries[k].value) == 0);

  // Duplicate chart 0: charts 0 and 3 both map to old chart 0.
  const auto& xs = cover.overlap(0, 1);
  SampledCover dup(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) dup.set_overlap(i, j, xs);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      for (std::size_t k = j + 1; k < 4; ++k) dup.set_triple(i, j, k, xs);
  const U1Cochain1 r = refine(c, {0, 1, 2, 0}, dup);
  for (const auto& x : xs) {
    CHECK(r.value(0, 3, x) == cplx(1));
    CHECK(std::abs(r.value(3, 1, x) - c.value(0, 1, x)) == 0);
    CHECK(std::abs(r.value(3, 2, x) - c.value(0, 2, x)) == 0);
  }
  CHECK(check_cocycle_u1(r, dup).pass);

  std::uniform_int_distribution<std::size_t> pick(0, 2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::size_t> map(4);
    for (auto& m : map) m = pick(rng);
    CHECK(check_cocycle_u1(refine(c, map, dup), dup).pass);
  }
  CHECK_THROWS_AS(refine(c, {0, 1, 5, 0}, dup), DimensionError);
  CHECK_THROWS_AS(refine(c, {0, 1}, dup), DimensionError);
}

TEST_CASE("winding numbers") {
  CHECK(winding_number(std::vector<cplx>(10, 1.0)).winding == 0);
  for (int k = -3; k <= 3; ++k) {
    const auto w = winding_number(loop_phases(64, [k](double t) { return std::polar(1.0, 2 * kPi * k * t); }));
    CHECK(w.winding == k);
    CHECK(w.defect <= 1e-12);
  }
  // Closing step appended when the last sample does not repeat the first.
  std::vector<cplx> open;
  for (int i = 0; i < 16; ++i) open.push_back(std::polar(1.0, 2 * kPi * i / 16));
  CHECK(winding_number(open).winding == 1);
  CHECK_THROWS_AS(winding_number({1.0, -1.0, 1.0}), GateError);
}

TEST_CASE("winding is additive and flips under conjugation") {
  std::mt19937_64 rng(45);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int k1 = trial % 5 - 2, k2 = trial % 3 - 1;
    const double a = 0.3 * g(rng), b = 0.3 * g(rng);
    const auto f1 = [&](double t) { return std::polar(1.0, 2 * kPi * k1 * t + a * std::sin(2 * kPi * t)); };
    const auto f2 = [&](double t) { return std::polar(1.0, 2 * kPi * k2 * t + b * std::sin(4 * kPi * t)); };
    const auto w1 = winding_number(loop_phases(200, f1)).winding;
    const auto w2 = winding_number(loop_phases(200, f2)).winding;
    CHECK(w1 == k1);
    CHECK(winding_number(loop_phases(200, [&](double t) { return f1(t) * f2(t); })).winding == w1 + w2);
    CHECK(winding_number(loop_phases(200, [&](double t) { return std::conj(f1(t)); })).winding == -w1);
  }
}

TEST_CASE("two-chart coboundary test") {
  const auto [c0cover, c0] = circle_cochain(32, [](double) { return cplx(1); });
  const auto r0 = is_coboundary_two_chart(c0);
  CHECK(r0.coboundary);
  CHECK(r0.winding == 0);
  const auto [c1cover, c1] = circle_cochain(32, [](double t) { return std::polar(1.0, 2 * kPi * t); });
  const auto r1 = is_coboundary_two_chart(c1);
  CHECK_FALSE(r1.coboundary);
  CHECK(r1.winding == 1);
  const auto [c2cover, c2] = circle_cochain(32, [](double t) { return std::polar(1.0, -4 * kPi * t); });
  CHECK(is_coboundary_two_chart(c2).winding == -2);

  // Refinement keeps the winding.
  const U1Cochain1 swapped = refine(c1, {1, 0}, c1cover);
  CHECK(is_coboundary_two_chart(swapped).winding == -1);
  CHECK(is_coboundary_two_chart(refine(c1, {0, 1}, c1cover)).winding == 1);
}

TEST_CASE("delta_1 of a unitary cochain") {
  std::mt19937_64 rng(46);
  const SampledCover cover = line_cover(rng, 6);
  std::vector<ComplexMatrix> lambda;
  for (int i = 0; i < 3; ++i) lambda.push_back(fixtures::random_unitary(rng, 3));

  const auto build = [&](const std::function<cplx(std::size_t, std::size_t, std::size_t)>& mu) {
    PUCochain1 c(3, ComplexMatrix::Identity(3, 3));
    for (const auto& [pair, points] : cover.overlaps()) {
      std::vector<PUCochain1::Entry> entries;
      for (std::size_t p = 0; p < points.size(); ++p)
        entries.push_back({points[p], mu(pair.first, pair.second, p) * lambda[pair.first] * lambda[pair.second].adjoint()});
      c.set(pair.first, pair.second, entries);
    }
    return c;
  };

  const auto exact = delta1_lift(build([](std::size_t, std::size_t, std::size_t) { return cplx(1); }), cover);
  CHECK_FALSE(exact.no_triples);
  for (const auto& [t, phases] : exact.phases)
    for (const auto& f : phases) CHECK(std::abs(f - 1.0) <= 1e-12);

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, cplx> mu;
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (std::size_t p = 0; p < 6; ++p)
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 2}, {0, 2}}) mu[{i, j, p}] = std::polar(1.0, angle(rng));
  const auto twisted = delta1_lift(build([&](std::size_t i, std::size_t j, std::size_t p) { return mu[{i, j, p}]; }), cover);
  const auto& phases = twisted.phases.at({0, 1, 2});
  for (std::size_t p = 0; p < 6; ++p) {
    const cplx expected = std::conj(mu[{0, 2, p}]) * mu[{0, 1, p}] * mu[{1, 2, p}];
    CHECK(std::abs(phases[p] - expected) <= 1e-12);
  }
  CHECK(twisted.max_scalar_defect <= 1e-12);

  // A non-cocycle modulo phase is rejected.
  PUCochain1 broken = build([](std::size_t, std::size_t, std::size_t) { return cplx(1); });
  auto e2 = broken.entries().at({0, 2});
  e2[0].value = fixtures::random_unitary(rng, 3);
  broken.set(0, 2, e2);
  CHECK_THROWS_AS(delta1_lift(broken, cover), GateError);
}

TEST_CASE("delta_1 on a cover without triples") {
  SampledCover cover(2);
  cover.set_overlap(0, 1, {{0.0}, {0.5}});
  PUCochain1 c(2, ComplexMatrix::Identity(2, 2));
  c.set(0, 1, {{{0.0}, pauli::x()}, {{0.5}, pauli::z()}});
  const auto r = delta1_lift(c, cover);
  CHECK(r.no_triples);
  CHECK(r.phases.empty());
}

TEST_CASE("sphere grid") {
  const SphereGrid g(4, 8);
  CHECK(g.theta(0) == doctest::Approx(kPi / 8));
  CHECK(g.phi(2) == doctest::Approx(kPi / 2));
  CHECK(g.point(0, 0).norm() == doctest::Approx(1));
  CHECK(g.size() == 32);
  CHECK_THROWS(SphereGrid(1, 1));
}

TEST_CASE("constant field has degree zero") {
  const auto d = plaquette_degree(SphereGrid(), [](const Eigen::Vector3d&) {
    ComplexVector v(2);
    v << 0.6, cplx(0, 0.8);
    return v;
  });
  CHECK(d.degree == 0);
  CHECK(d.max_flux <= 1e-12);
}

TEST_CASE("Bloch field degree is pinned and stable") {
  const auto d = plaquette_degree(SphereGrid(), bloch);
  CHECK(d.degree == kBlochDegree);
  CHECK(std::abs(d.total_flux - kBlochDegree) <= 1e-6);
  CHECK(plaquette_degree(SphereGrid(64, 128), bloch).degree == kBlochDegree);
  CHECK(plaquette_degree(SphereGrid(8, 16), bloch).degree == kBlochDegree);
}

TEST_CASE("single plaquette flux matches half the solid angle") {
  // Bloch field flux over a band plaquette is half its solid angle, signed by the pinned orientation.
  const SphereGrid g(64, 128);
  const auto d = plaquette_degree(g, bloch);
  for (Index k = 0; k + 1 < g.k_theta; ++k) {
    const double solid = (std::cos(g.theta(k)) - std::cos(g.theta(k + 1))) * 2 * kPi / g.m_phi;
    const double flux = d.band_flux[std::size_t(k * g.m_phi)];
    CHECK(std::abs(std::abs(flux) - solid / 2) <= 1e-2 * solid);
    CHECK(flux * kBlochDegree > 0);
  }
}

TEST_CASE("conjugated field flips the degree") {
  const auto d = plaquette_degree(SphereGrid(), [](const Eigen::Vector3d& r) { return ComplexVector(bloch(r).conjugate()); });
  CHECK(d.degree == -kBlochDegree);
}

TEST_CASE("degree is gauge invariant") {
  const SphereGrid g;
  std::vector<ComplexVector> field, gauged;
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (Index k = 0; k < g.k_theta; ++k)
    for (Index m = 0; m < g.m_phi; ++m) {
      field.push_back(bloch(g.point(k, m)));
      gauged.push_back(field.back() * std::polar(1.0, angle(rng)));
    }
  const auto a = plaquette_degree(g, field), b = plaquette_degree(g, gauged);
  CHECK(a.degree == b.degree);
  for (std::size_t i = 0; i < a.band_flux.size(); ++i) CHECK(std::abs(a.band_flux[i] - b.band_flux[i]) <= 1e-12);
  CHECK(std::abs(a.north_flux - b.north_flux) <= 1e-12);
  CHECK(std::abs(a.south_flux - b.south_flux) <= 1e-12);
}

TEST_CASE("coarse grid and vanishing links are rejected") {
  CHECK_THROWS_AS(plaquette_degree(SphereGrid(1, 3), bloch), GateError);
  const SphereGrid g(4, 8);
  std::vector<ComplexVector> field(std::size_t(g.size()), ComplexVector::Unit(2, 0));
  field[5] = ComplexVector::Unit(2, 1);
  CHECK_THROWS_AS(plaquette_degree(g, field), GateError);
  CHECK_THROWS_AS(plaquette_degree(g, std::vector<ComplexVector>(3, ComplexVector::Unit(2, 0))), DimensionError);
}
