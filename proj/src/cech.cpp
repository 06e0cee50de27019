#include "phaselab/cech.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace phaselab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLinkTol = 1e-12;
constexpr double kIntegerTol = 1e-6;

ChartPair canonical(std::size_t i, std::size_t j) { return i < j ? ChartPair{i, j} : ChartPair{j, i}; }

bool same_point(const SamplePoint& a, const SamplePoint& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > kPointTol) return false;
  return true;
}

}  // namespace

std::optional<std::size_t> find_point(const std::vector<SamplePoint>& points, const SamplePoint& x) {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (same_point(points[i], x)) return i;
  return std::nullopt;
}

void SampledCover::check_chart(std::size_t i) const {
  if (i >= n_charts_) throw DimensionError("SampledCover: chart " + std::to_string(i) + " out of range");
}

void SampledCover::set_overlap(std::size_t i, std::size_t j, std::vector<SamplePoint> points) {
  check_chart(i);
  check_chart(j);
  if (i == j) throw DomainError("SampledCover: overlap of a chart with itself");
  overlaps_[canonical(i, j)] = std::move(points);
}

void SampledCover::set_triple(std::size_t i, std::size_t j, std::size_t k, std::vector<SamplePoint> points) {
  check_chart(i);
  check_chart(j);
  check_chart(k);
  ChartTriple t{i, j, k};
  std::sort(t.begin(), t.end());
  if (t[0] == t[1] || t[1] == t[2]) throw DomainError("SampledCover: triple needs three distinct charts");
  for (const auto& x : points) {
    for (const auto& [a, b] : {ChartPair{t[0], t[1]}, ChartPair{t[1], t[2]}, ChartPair{t[0], t[2]}}) {
      if (!find_point(overlap(a, b), x)) throw DomainError("SampledCover: triple point missing from a pairwise overlap");
    }
  }
  triples_[t] = std::move(points);
}

const std::vector<SamplePoint>& SampledCover::overlap(std::size_t i, std::size_t j) const {
  static const std::vector<SamplePoint> empty;
  const auto it = overlaps_.find(canonical(i, j));
  return it == overlaps_.end() ? empty : it->second;
}

CocycleReport check_cocycle_u1(const U1Cochain1& c, const SampledCover& cover, double tol) {
  CocycleReport report;
  report.vacuous = cover.triples().empty();
  for (const auto& [t, points] : cover.triples()) {
    const auto [i, j, k] = t;
    for (const auto& x : points) {
      const double defect = std::abs(c.value(i, j, x) * c.value(j, k, x) - c.value(i, k, x));
      if (defect > report.max_defect) {
        report.max_defect = defect;
        if (defect > tol) {
          report.witness_triple = t;
          report.witness_point = x;
        }
      }
    }
  }
  report.pass = report.max_defect <= tol;
  return report;
}

WindingResult winding_number(const std::vector<cplx>& phases) {
  WindingResult out;
  if (phases.size() < 2) return out;
  std::vector<cplx> loop = phases;
  if (std::abs(loop.front() - loop.back()) > kPointTol) loop.push_back(loop.front());
  double sum = 0;
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
    const double step = std::arg(loop[i + 1] / loop[i]);
    out.max_step = std::max(out.max_step, std::abs(step));
    sum += step;
  }
  if (out.max_step >= kPi - 1e-6) throw GateError("winding_number: loop too coarsely sampled (phase step near pi)");
  const double turns = sum / (2 * kPi);
  out.winding = int(std::lround(turns));
  out.defect = std::abs(turns - out.winding);
  return out;
}

CoboundaryResult is_coboundary_two_chart(const U1Cochain1& c) {
  if (c.n_charts() != 2) throw DomainError("is_coboundary_two_chart: cochain must live on two charts");
  const auto it = c.entries().find({0, 1});
  if (it == c.entries().end() || it->second.empty()) throw DomainError("is_coboundary_two_chart: empty overlap");
  std::vector<cplx> loop;
  loop.reserve(it->second.size());
  for (const auto& e : it->second) loop.push_back(e.value);
  CoboundaryResult out;
  out.winding = winding_number(loop).winding;
  out.coboundary = out.winding == 0;
  return out;
}

Delta1Result delta1_lift(const PUCochain1& c, const SampledCover& cover, double tol) {
  Delta1Result out;
  out.no_triples = cover.triples().empty();
  for (const auto& [t, points] : cover.triples()) {
    const auto [i, j, k] = t;
    auto& phases = out.phases[t];
    for (const auto& x : points) {
      const ComplexMatrix m = c.value(i, k, x).adjoint() * c.value(i, j, x) * c.value(j, k, x);
      const cplx scalar = m.trace() / double(m.rows());
      const double defect = (m - scalar * ComplexMatrix::Identity(m.rows(), m.cols())).norm();
      out.max_scalar_defect = std::max(out.max_scalar_defect, defect);
      if (defect > tol) throw GateError("delta1_lift: triple product is not a scalar (cochain is not a cocycle mod phase)");
      phases.push_back(scalar / std::abs(scalar));
    }
  }
  return out;
}

SphereGrid::SphereGrid(Index k, Index m) : k_theta(k), m_phi(m) {
  if (k < 1 || m < 3) throw DomainError("SphereGrid: need K >= 1 and M >= 3");
}

double SphereGrid::theta(Index k) const { return (double(k) + 0.5) * kPi / double(k_theta); }

double SphereGrid::phi(Index m) const { return 2 * kPi * double(m) / double(m_phi); }

Eigen::Vector3d SphereGrid::point(Index k, Index m) const {
  const double t = theta(k), p = phi(m);
  return {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
}

DegreeResult plaquette_degree(const SphereGrid& grid, const std::vector<ComplexVector>& field) {
  const Index kk = grid.k_theta, mm = grid.m_phi;
  if (Index(field.size()) != kk * mm) throw DimensionError("plaquette_degree: field size does not match the grid");
  const auto at = [&](Index k, Index m) -> const ComplexVector& { return field[std::size_t(k * mm + (m % mm))]; };
  const auto link = [](const ComplexVector& a, const ComplexVector& b) {
    const cplx v = a.dot(b);
    if (std::abs(v) <= kLinkTol) throw GateError("plaquette_degree: vanishing link overlap");
    return v / std::abs(v);
  };
  const auto polygon_flux = [&](const std::vector<const ComplexVector*>& cycle) {
    cplx prod = 1;
    for (std::size_t i = 0; i < cycle.size(); ++i) prod *= link(*cycle[i], *cycle[(i + 1) % cycle.size()]);
    return std::arg(prod);
  };

  DegreeResult out;
  double sum = 0;
  out.band_flux.reserve(std::size_t((kk - 1) * mm));
  for (Index k = 0; k + 1 < kk; ++k) {
    for (Index m = 0; m < mm; ++m) {
      const double f = polygon_flux({&at(k, m), &at(k + 1, m), &at(k + 1, m + 1), &at(k, m + 1)});
      out.band_flux.push_back(f);
      out.max_flux = std::max(out.max_flux, std::abs(f));
      sum += f;
    }
  }
  std::vector<const ComplexVector*> north, south;
  for (Index m = 0; m < mm; ++m) {
    north.push_back(&at(0, m));
    south.push_back(&at(kk - 1, mm - 1 - m));
  }
  out.north_flux = polygon_flux(north);
  out.south_flux = polygon_flux(south);
  out.max_flux = std::max({out.max_flux, std::abs(out.north_flux), std::abs(out.south_flux)});
  sum += out.north_flux + out.south_flux;

  if (out.max_flux > kPi - kFluxMargin) {
    throw GateError("plaquette_degree: plaquette flux " + std::to_string(out.max_flux) + " is near pi (grid too coarse)");
  }
  out.total_flux = sum / (2 * kPi);
  out.degree = int(std::lround(out.total_flux));
  if (std::abs(out.total_flux - out.degree) > kIntegerTol) throw GateError("plaquette_degree: total flux is not an integer");
  return out;
}

DegreeResult plaquette_degree(const SphereGrid& grid, const std::function<ComplexVector(const Eigen::Vector3d&)>& f) {
  std::vector<ComplexVector> field;
  field.reserve(std::size_t(grid.size()));
  for (Index k = 0; k < grid.k_theta; ++k)
    for (Index m = 0; m < grid.m_phi; ++m) field.push_back(f(grid.point(k, m)));
  return plaquette_degree(grid, field);
}

}  // namespace phaselab
