#include "phaselab/projective.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

namespace phaselab {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kOrthogonalTol = 1e-12;
constexpr double kFrameTol = 1e-10;
constexpr double kCayleyTol = 1e-8;

void require_same_dim(Index a, Index b, const char* where) {
  if (a != b) throw DimensionError(std::string(where) + ": dimension mismatch");
}

}  // namespace

Ray::Ray(ComplexVector rep) : rep_(std::move(rep)) {
  if (rep_.size() == 0) throw DimensionError("Ray: empty representative");
  if (std::abs(rep_.norm() - 1.0) > kNormTol) throw DomainError("Ray: representative is not a unit vector");
}

Ray Ray::from_vector(const ComplexVector& v) {
  const double n = v.norm();
  if (!(n > 0)) throw DomainError("Ray: zero vector");
  return Ray(v / n);
}

ComplexMatrix Ray::projector() const { return rep_ * rep_.adjoint(); }

bool operator==(const Ray& a, const Ray& b) {
  return a.dim() == b.dim() && std::abs(1.0 - ray_product(a, b)) <= kRayTol;
}

double ray_product(const Ray& a, const Ray& b) {
  require_same_dim(a.dim(), b.dim(), "ray_product");
  return std::min(1.0, std::abs(a.rep().dot(b.rep())));
}

RayDistances ray_distances(const Ray& a, const Ray& b) {
  const double p = ray_product(a, b);
  RayDistances d;
  d.chord = std::sqrt(std::max(0.0, 2.0 - 2.0 * p));
  d.fubini_study = std::acos(p);
  d.gap = std::sqrt(std::max(0.0, 1.0 - p * p));
  return d;
}

ComplexVector section_positive(const Ray& base, const Ray& target) {
  require_same_dim(base.dim(), target.dim(), "section_positive");
  const cplx overlap = base.rep().dot(target.rep());
  if (std::abs(overlap) <= kOrthogonalTol) throw DomainError("section_positive: rays are orthogonal");
  return target.rep() * (std::abs(overlap) / overlap);
}

ComplexMatrix rotator(const ComplexVector& psi, const ComplexVector& omega) {
  require_same_dim(psi.size(), omega.size(), "rotator");
  const cplx omega_psi = omega.dot(psi);  // <omega, psi>
  const double modulus = std::abs(omega_psi);
  if (modulus <= kOrthogonalTol) throw DomainError("rotator: inputs are orthogonal");
  const cplx lambda = omega_psi / modulus;
  const double mu = 1.0 / (1.0 + modulus);
  const Index n = psi.size();
  ComplexMatrix u = lambda * ComplexMatrix::Identity(n, n);
  u -= mu * psi * omega.adjoint();
  u -= lambda * mu * psi * psi.adjoint();
  u -= lambda * mu * omega * omega.adjoint();
  u += (1.0 + lambda * mu * omega_psi) * omega * psi.adjoint();
  return u;
}

ComplexMatrix elementary_transport(const ComplexVector& x, const ComplexVector& y) {
  require_same_dim(x.size(), y.size(), "elementary_transport");
  const Index n = x.size();
  // Orthonormal basis of K = span{x, y}.
  ComplexVector perp = y - x.dot(y) * x;
  ComplexMatrix p_k = x * x.adjoint();
  if (perp.norm() > 1e-14) {
    perp.normalize();
    p_k += perp * perp.adjoint();
  }
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  u += (y.dot(x) - 1.0) * p_k;
  u -= x * y.adjoint();
  u += y * x.adjoint();
  return u;
}

FrameTransport frame_transport(const ComplexMatrix& xs, const ComplexMatrix& ys) {
  if (xs.rows() != ys.rows() || xs.cols() != ys.cols()) throw DimensionError("frame_transport: frame shapes differ");
  const Index n = xs.cols(), dim = xs.rows();
  if (dim < 2 * n) throw DimensionError("frame_transport: ambient dimension must be at least twice the frame size");
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  if ((xs.adjoint() * xs - id).norm() > kFrameTol || (ys.adjoint() * ys - id).norm() > kFrameTol) {
    throw DomainError("frame_transport: frames are not orthonormal");
  }
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (Index i = 0; i < n; ++i) {
    const ComplexVector z = u * xs.col(i);
    u = elementary_transport(z, ys.col(i)) * u;
  }
  FrameTransport out;
  out.defect = operator_norm(ComplexMatrix(ComplexMatrix::Identity(dim, dim) - u));
  out.u = std::move(u);
  return out;
}

ComplexMatrix cayley_chart(const ComplexMatrix& m, CayleyDirection direction) {
  if (m.rows() != m.cols()) throw DimensionError("cayley_chart: matrix is not square");
  const Index n = m.rows();
  const cplx i(0, 1);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  if (direction == CayleyDirection::forward) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(m), false);
    const double closest = (solver.eigenvalues().array() + 1.0).abs().minCoeff();
    if (closest < kCayleyTol) throw DomainError("cayley_chart: -1 is in the spectrum");
    ComplexMatrix a = i * (id - m) * (id + m).inverse();
    return (a + a.adjoint()) / 2.0;
  }
  if ((m - m.adjoint()).norm() > kHermitianTol * std::max(1.0, m.norm())) {
    throw DomainError("cayley_chart: inverse chart needs a Hermitian input");
  }
  return (i * id - m) * (i * id + m).inverse();
}

cplx sector_transition_phase(const Ray& phi1, const Ray& phi2, const Ray& psi) {
  require_same_dim(phi1.dim(), psi.dim(), "sector_transition_phase");
  require_same_dim(phi2.dim(), psi.dim(), "sector_transition_phase");
  const cplx a1 = phi1.rep().dot(psi.rep());
  const cplx a2 = phi2.rep().dot(psi.rep());
  if (std::abs(a1) <= kOrthogonalTol || std::abs(a2) <= kOrthogonalTol) {
    throw DomainError("sector_transition_phase: psi is orthogonal to a base ray");
  }
  return (std::abs(a2) / a2) * (a1 / std::abs(a1));
}

}  // namespace phaselab
