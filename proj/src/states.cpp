#include "phaselab/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace phaselab {

namespace {

constexpr double kPurityTol = 1e-9;
constexpr double kNormalizerTol = 1e-12;
constexpr double kGramCut = 1e-9;

}  // namespace

DensityState::DensityState(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw DimensionError("DensityState: matrix is not square");
  if (!rho.allFinite()) throw DomainError("DensityState: non-finite entry");
  if ((rho - rho.adjoint()).norm() > kStateTol * std::max(1.0, rho.norm())) {
    throw DomainError("DensityState: matrix is not Hermitian");
  }
  rho_ = (rho + rho.adjoint()) / 2.0;
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > kStateTol) {
    throw DomainError("DensityState: trace " + std::to_string(tr) + " differs from 1");
  }
  const auto eig = eig_hermitian(rho_);
  if (eig.eigenvalues(0) < -kStateTol) {
    throw DomainError("DensityState: negative eigenvalue " + std::to_string(eig.eigenvalues(0)));
  }
}

DensityState DensityState::maximally_mixed(Index n) {
  return DensityState(ComplexMatrix(ComplexMatrix::Identity(n, n) / double(n)));
}

cplx DensityState::expect(const ComplexMatrix& a) const {
  if (a.rows() != dim() || a.cols() != dim()) throw DimensionError("DensityState::expect: dimension mismatch");
  return (rho_ * a).trace();
}

DensityState state_from_vector(const ComplexVector& v) {
  const double n2 = v.squaredNorm();
  if (!(n2 > 0)) throw DomainError("state_from_vector: zero vector");
  return DensityState(ComplexMatrix(v * v.adjoint() / n2));
}

Purity purity(const DensityState& s) {
  Purity p;
  p.trace_square = (s.rho() * s.rho()).trace().real();
  p.pure = p.trace_square >= 1.0 - kPurityTol;
  return p;
}

double state_distance(const DensityState& a, const DensityState& b) {
  if (a.dim() != b.dim()) throw DimensionError("state_distance: dimension mismatch");
  return trace_norm(ComplexMatrix(a.rho() - b.rho()));
}

DensityState act(const ComplexMatrix& a, const DensityState& s) {
  if (a.rows() != s.dim() || a.cols() != s.dim()) throw DimensionError("act: dimension mismatch");
  ComplexMatrix m = a * s.rho() * a.adjoint();
  const double normalizer = m.trace().real();
  if (normalizer <= kNormalizerTol) throw DomainError("act: operator lies in the Gelfand ideal of the state");
  m /= normalizer;
  return DensityState(ComplexMatrix((m + m.adjoint()) / 2.0));
}

ComplexMatrix GnsResult::represent(const ComplexMatrix& a) const {
  if (a.rows() != n || a.cols() != n) throw DimensionError("GnsResult::represent: dimension mismatch");
  // <B_k, pi(A) B_l> = omega(B_k^dag A B_l) = sum_ij conj(B_k)_ij (A B_l rho)_ij
  ComplexMatrix left(dim, n * n), right(n * n, dim);
  for (Index k = 0; k < dim; ++k) {
    left.row(k) = basis[k].conjugate().reshaped<Eigen::RowMajor>().transpose();
    const ComplexMatrix y = a * basis[k] * rho;
    right.col(k) = y.reshaped<Eigen::RowMajor>();
  }
  return left * right;
}

GnsResult gns(const DensityState& omega) {
  const Index n = omega.dim();
  GnsResult out;
  out.n = n;
  out.rho = omega.rho();
  const auto inner = [&](const ComplexMatrix& x, const ComplexMatrix& y) { return (out.rho * x.adjoint() * y).trace(); };
  // Largest diagonal Gram entry: omega(E_ij^dag E_ij) = rho_jj.
  const double scale = out.rho.diagonal().real().maxCoeff();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      ComplexMatrix x = ComplexMatrix::Zero(n, n);
      x(i, j) = 1;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : out.basis) x -= inner(b, x) * b;
      }
      const double norm2 = inner(x, x).real();
      if (norm2 > kGramCut * scale) {
        out.basis.push_back(x / std::sqrt(norm2));
      } else {
        out.ideal_basis.push_back(std::move(x));
      }
    }
  }
  out.dim = Index(out.basis.size());
  out.cyclic.resize(out.dim);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (Index k = 0; k < out.dim; ++k) out.cyclic(k) = inner(out.basis[k], id);
  return out;
}

VectorStateDistance vector_state_distance(const ComplexVector& psi, const ComplexVector& omega) {
  if (psi.size() != omega.size()) throw DimensionError("vector_state_distance: dimension mismatch");
  const double p = std::min(1.0, std::abs(psi.normalized().dot(omega.normalized())));
  VectorStateDistance d;
  d.closed_form = 2.0 * std::sqrt(std::max(0.0, 1.0 - p * p));
  d.oracle = state_distance(state_from_vector(psi), state_from_vector(omega));
  return d;
}

}  // namespace phaselab
