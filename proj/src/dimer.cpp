#include "phaselab/dimer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phaselab/projective.hpp"
#include "phaselab/states.hpp"

namespace phaselab {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kChartTol = 1e-14;


/// s_a.s_b on two sites.
ComplexMatrix heisenberg() {
  return kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y()) + kron(pauli::z(), pauli::z());
}

/// wvec.sigma
ComplexMatrix field_term(const Eigen::Vector3d& v) { return pauli::dot(v); }

/// |up down> and |down up> swapped.
ComplexMatrix swap_gate() {
  ComplexMatrix s = ComplexMatrix::Zero(4, 4);
  s(0, 0) = s(3, 3) = 1;
  s(1, 2) = s(2, 1) = 1;
  return s;
}

}  // namespace

ParamPoint::ParamPoint(const Eigen::Vector4d& w) : w_(w) {
  if (!w.allFinite() || std::abs(w.norm() - 1.0) > kUnitTol) throw DomainError("ParamPoint: w is not a unit vector");
}

ParamPoint ParamPoint::normalized(const Eigen::Vector4d& w) {
  const double n = w.norm();
  if (!(n > 0)) throw DomainError("ParamPoint: zero vector");
  return ParamPoint(w / n);
}

ParamPoint ParamPoint::equator(const Eigen::Vector3d& r) {
  Eigen::Vector4d w;
  w << r, 0.0;
  return normalized(w);
}

std::array<double, 2> ParamPoint::angles() const {
  const double n = wnorm();
  if (!(n > 0)) throw DomainError("ParamPoint::angles: wvec vanishes");
  return {std::acos(std::clamp(w_(2) / n, -1.0, 1.0)), std::atan2(w_(1), w_(0))};
}

void ModelConfig::validate() const {
  if (!(epsilon > 0 && epsilon < 1)) throw InputError("epsilon must lie in (0, 1)");
  if (n_dimers < 2) throw InputError("n_dimers must be >= 2");
  if (n_dimers > 6) throw InputError("n_dimers must be <= 6 (dense dimension 2^(2N))");
  if (grid.k_theta < 1 || grid.m_phi < 3) throw InputError("grid must be at least 1x3");
}

double bump(const ParamPoint& w, Hemisphere h, double eps) {
  if (!(eps > 0 && eps < 1)) throw DomainError("bump: epsilon must lie in (0, 1)");
  const double s = h == Hemisphere::plus ? w.w4() : -w.w4();
  return std::max(0.0, (s - eps) / (1.0 - eps));
}

bool in_chart(const ParamPoint& w, Hemisphere h, double eps) {
  return (h == Hemisphere::plus ? w.w4() : -w.w4()) > -eps;
}

bool in_band(const ParamPoint& w, double eps) { return std::abs(w.w4()) < eps; }

ComplexMatrix dimer_hamiltonian(const ParamPoint& w, Hemisphere h, double eps) {
  if (!in_chart(w, h, eps)) throw DomainError("dimer_hamiltonian: w lies outside the hemisphere chart");
  const double g = bump(w, h, eps);
  const ComplexMatrix field = field_term(w.wvec());
  const ComplexMatrix id = pauli::identity();
  // plus: field on the first site minus field on the second; minus: the reverse.
  const ComplexMatrix split = kron(field, id) - kron(id, field);
  return g * heisenberg() + (h == Hemisphere::plus ? split : ComplexMatrix(-split));
}

DimerClosedForm dimer_closed_form(const ParamPoint& w, Hemisphere h, double eps) {
  if (!in_chart(w, h, eps)) throw DomainError("dimer_closed_form: w lies outside the hemisphere chart");
  DimerClosedForm out;
  const double a = w.wnorm();
  out.g = bump(w, h, eps);
  out.f = std::hypot(out.g, a);
  if (out.f <= kChartTol) throw DomainError("dimer_closed_form: f vanishes");
  out.c = std::sqrt((out.f + a) / (2 * out.f));
  out.d = std::sqrt(std::max(0.0, (out.f - a) / (2 * out.f)));
  out.spectrum << -out.g - 2 * out.f, out.g, out.g, -out.g + 2 * out.f;

  const double w1 = w.w()(0), w2 = w.w()(1), w3 = w.w()(2);
  const double s = out.c + out.d;
  const double k = 1.0 / (2 * out.f * s);
  const cplx i(0, 1);
  ComplexVector v(4);
  // Order |uu>, |ud>, |du>, |dd>.
  v(0) = -(w1 - i * w2) * k;
  v(1) = -(s / 2 - w3 * k);
  v(2) = s / 2 + w3 * k;
  v(3) = (w1 + i * w2) * k;
  out.ground = h == Hemisphere::plus ? v : ComplexVector(swap_gate() * v);
  return out;
}

ComplexMatrix site_rotation(double theta, double phi) {
  const cplx i(0, 1);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const cplx p = std::exp(i * (phi / 2));
  ComplexMatrix u(2, 2);
  u << c * p, s * std::conj(p), -s * p, c * std::conj(p);
  return u;
}

Eigen::Vector3d bloch_direction(double theta, double phi) {
  return {std::cos(phi) * std::sin(theta), std::sin(phi) * std::sin(theta), std::cos(theta)};
}

ComplexMatrix dimer_swap_unitary() {
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  return 0.5 * (1 + r) * id + 0.5 * (1 - r) * kron(pauli::z(), pauli::z()) -
         r * (kron(pauli::plus(), pauli::minus()) - kron(pauli::minus(), pauli::plus()));
}

ComplexMatrix dimer_transport(double theta, double phi, Hemisphere h) {
  const ComplexMatrix u1 = site_rotation(theta, phi);
  const ComplexMatrix u = kron(u1, u1);
  const ComplexMatrix w = dimer_swap_unitary();
  if (h == Hemisphere::plus) return u.adjoint() * w.adjoint() * u * w;
  return u.adjoint() * w * u * w.adjoint();
}

ComplexMatrix dimer_transport(const ParamPoint& w, Hemisphere h, double eps) {
  if (!in_band(w, eps)) throw DomainError("dimer_transport: w lies outside the band |w4| < eps");
  const auto [theta, phi] = w.angles();
  return dimer_transport(theta, phi, h);
}

ComplexVector omega_right(int n_dimers) {
  const Index dim = Index(1) << (2 * n_dimers);
  // Sites alternate up, down: the bit pattern 0101... read left to right.
  Index idx = 0;
  for (int site = 0; site < 2 * n_dimers; ++site) idx = 2 * idx + (site % 2);
  ComplexVector v = ComplexVector::Zero(dim);
  v(idx) = 1;
  return v;
}

namespace {

struct ChainPieces {
  ComplexMatrix g, b_minus, b_plus, u_first, u_last;
};

ChainPieces chain_pieces(double theta, double phi, int n_dimers, bool conjugate) {
  const int sites = 2 * n_dimers;
  const ChainLayout layout = ChainLayout::qubits(std::size_t(sites));
  ComplexMatrix u = site_rotation(theta, phi);
  if (conjugate) u = u.conjugate().eval();
  const ComplexMatrix w = dimer_swap_unitary();  // real, so conjugation leaves it unchanged
  const Index dim = layout.total_dim();
  ChainPieces p;
  p.g = kron_all(std::vector<ComplexMatrix>(std::size_t(sites), u));
  p.b_minus = ComplexMatrix::Identity(dim, dim);
  p.b_plus = ComplexMatrix::Identity(dim, dim);
  // Tensor position i is site i + 1: odd sites start at even positions.
  for (int pos = 0; pos + 1 < sites; ++pos) {
    const ComplexMatrix wp = embed_pair_operator(w, std::size_t(pos), layout);
    if (pos % 2 == 0) {
      p.b_minus = p.b_minus * wp;
    } else {
      p.b_plus = p.b_plus * wp;
    }
  }
  p.u_first = embed_site_operator(u, 0, layout);
  p.u_last = embed_site_operator(u, std::size_t(sites - 1), layout);
  return p;
}

}  // namespace

TruncatedZ truncated_Z(double theta, double phi, int n_dimers, bool conjugate, bool compensate) {
  if (n_dimers < 2) throw DomainError("truncated_Z: need at least two dimers");
  const ChainPieces p = chain_pieces(theta, phi, n_dimers, conjugate);
  TruncatedZ out;
  out.core = p.b_minus * p.g.adjoint() * p.b_minus.adjoint() * p.b_plus.adjoint() * p.g * p.b_plus;
  ComplexMatrix m = out.core * p.u_first.adjoint();
  if (compensate) m = m * p.u_last.adjoint();
  const ComplexVector omega = omega_right(n_dimers);
  const cplx overlap = omega.dot(m * omega);
  out.y_overlap = std::abs(overlap);
  if (out.y_overlap < kYOverlapFloor) {
    throw GateError("truncated_Z: y_overlap " + std::to_string(out.y_overlap) + " below " +
                    std::to_string(kYOverlapFloor) + " (boundary contamination)");
  }
  const ComplexMatrix y = (std::abs(overlap) / overlap) * m;
  out.z = y * p.u_first;
  return out;
}

TruncatedZ truncated_Z(const ParamPoint& w, const ModelConfig& cfg) {
  if (!in_band(w, cfg.epsilon)) throw DomainError("truncated_Z: w lies outside the band");
  const auto [theta, phi] = w.angles();
  return truncated_Z(theta, phi, cfg.n_dimers, cfg.conjugate);
}

double intertwiner_residual(const ParamPoint& w, const ModelConfig& cfg) {
  const auto [theta, phi] = w.angles();
  const ChainPieces p = chain_pieces(theta, phi, cfg.n_dimers, cfg.conjugate);
  const TruncatedZ tz = truncated_Z(w, cfg);
  const auto ad = [](const ComplexMatrix& x, const ComplexMatrix& a) { return ComplexMatrix(x * a * x.adjoint()); };
  const ChainLayout layout = ChainLayout::qubits(std::size_t(2 * cfg.n_dimers));
  const std::array<ComplexMatrix, 3> probes = {embed_site_operator(pauli::x(), 0, layout),
                                               embed_site_operator(pauli::z(), 1, layout),
                                               embed_site_operator(pauli::y(), 2, layout)};
  double worst = 0;
  for (const auto& a : probes) {
    // alpha_+^{-1} = Ad(G^dag) Ad(B+^dag) Ad(G) Ad(B+), applied right to left.
    ComplexMatrix x = ad(p.b_plus, a);
    x = ad(p.g, x);
    x = ad(p.b_plus.adjoint(), x);
    x = ad(p.g.adjoint(), x);
    // alpha_- = Ad(B-) Ad(G^dag) Ad(B-^dag) Ad(G).
    x = ad(p.g, x);
    x = ad(p.b_minus.adjoint(), x);
    x = ad(p.g.adjoint(), x);
    x = ad(p.b_minus, x);
    worst = std::max(worst, operator_norm(ComplexMatrix(ad(tz.z, a) - x)));
  }
  return worst;
}

ProjectedRay projected_equator_map(const ParamPoint& w, const ModelConfig& cfg) {
  const TruncatedZ tz = truncated_Z(w, cfg);
  const ChainLayout layout = ChainLayout::qubits(std::size_t(2 * cfg.n_dimers));
  const ComplexVector omega = omega_right(cfg.n_dimers);
  const ComplexVector flipped = embed_site_operator(pauli::x(), 0, layout) * omega;
  const ComplexVector image = tz.z.adjoint() * omega;
  ProjectedRay out;
  out.y_overlap = tz.y_overlap;
  out.coeffs.resize(2);
  out.coeffs << omega.dot(image), flipped.dot(image);
  out.weight = out.coeffs.squaredNorm();
  if (out.weight < 1.0 - kWeightTol) {
    throw GateError("projected_equator_map: projection weight " + std::to_string(out.weight) + " deficit");
  }
  out.coeffs.normalize();
  return out;
}

ComplexVector bloch_ground_map(const Eigen::Vector3d& r) {
  if (std::abs(r.norm() - 1.0) > 1e-12) throw DomainError("bloch_ground_map: r is not a unit vector");
  const double theta = std::acos(std::clamp(r(2), -1.0, 1.0));
  const double phi = std::atan2(r(1), r(0));
  const cplx i(0, 1);
  ComplexVector v(2);
  v << std::cos(theta / 2) * std::exp(-i * (phi / 2)), std::sin(theta / 2) * std::exp(i * (phi / 2));
  return v;
}

InvariantReport invariant_degree(const ModelConfig& cfg) {
  cfg.validate();
  const SphereGrid& grid = cfg.grid;
  InvariantReport rep;
  std::vector<ComplexVector> field, bloch;
  field.reserve(std::size_t(grid.size()));
  bloch.reserve(std::size_t(grid.size()));
  ComplexVector constant(2);
  constant << 1, 0;
  for (Index k = 0; k < grid.k_theta; ++k) {
    for (Index m = 0; m < grid.m_phi; ++m) {
      const Eigen::Vector3d r = grid.point(k, m);
      ComplexVector b = bloch_ground_map(r);
      if (cfg.conjugate) b = b.conjugate().eval();
      const ProjectedRay pr = projected_equator_map(ParamPoint::equator(r), cfg);
      rep.y_overlap_min = std::min(rep.y_overlap_min, pr.y_overlap);
      rep.weight_min = std::min(rep.weight_min, pr.weight);
      rep.agreement_min = std::min(rep.agreement_min, std::abs(b.dot(pr.coeffs)));
      field.push_back(cfg.constant_field ? constant : pr.coeffs);
      bloch.push_back(bloch_ground_map(r));
    }
  }
  const DegreeResult d = plaquette_degree(grid, field);
  const DegreeResult db = plaquette_degree(grid, bloch);
  rep.degree = d.degree;
  rep.max_flux = d.max_flux;
  rep.bloch_degree = db.degree;
  rep.bloch_max_flux = db.max_flux;
  // Intertwiner residual on a fixed ring of equator points and two off-equator band points.
  for (int j = 0; j < 8; ++j) {
    const double a = 2 * std::numbers::pi * (j + 0.25) / 8;
    rep.intertwiner_max = std::max(
        rep.intertwiner_max, intertwiner_residual(ParamPoint::equator({std::cos(a) * 0.6, std::sin(a) * 0.6, 0.8}), cfg));
  }
  for (double w4 : {0.5 * cfg.epsilon, -0.5 * cfg.epsilon}) {
    rep.intertwiner_max = std::max(rep.intertwiner_max,
                                   intertwiner_residual(ParamPoint::normalized({0.3, -0.5, 0.4, w4}), cfg));
  }
  return rep;
}

ProductBound product_distance_bound(const Eigen::Vector3d& r, const Eigen::Vector3d& s, int n_sites) {
  if (n_sites < 1) throw DomainError("product_distance_bound: need at least one site");
  const ComplexMatrix id = pauli::identity();
  const ComplexMatrix rho_r1 = (id + pauli::dot(Eigen::Vector3d(r))) / 2.0;
  const ComplexMatrix rho_s1 = (id + pauli::dot(Eigen::Vector3d(s))) / 2.0;
  const auto n = std::size_t(n_sites);
  const ComplexMatrix rho_r = kron_all(std::vector<ComplexMatrix>(n, rho_r1));
  const ComplexMatrix rho_s = kron_all(std::vector<ComplexMatrix>(n, rho_s1));
  const ComplexMatrix h = kron_all(std::vector<ComplexMatrix>(n, ComplexMatrix(pauli::dot(Eigen::Vector3d(r)))));
  ProductBound out;
  out.bound = std::abs(1.0 - std::pow(r.dot(s), n_sites));
  out.witness = std::abs(((rho_r - rho_s) * h).trace());
  out.exact = trace_norm(ComplexMatrix(rho_r - rho_s));
  return out;
}

}  // namespace phaselab
