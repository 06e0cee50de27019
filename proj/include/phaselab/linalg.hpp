#pragma once

/**
 *  Dense complex matrix kernel.
 *
 *  Everything here is templated on the real scalar type and works on
 *  row-major Eigen matrices:
 *    1. Kronecker products and operators embedded at one site of a chain
 *    2. partial traces over one factor of a bipartite space
 *    3. Hermitian eigensolving with ascending eigenvalues
 *    4. trace norm and operator norm
 *  Dimensions are desk-scale (<= 4096), so there is no sparse path.
 */

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "phaselab/error.hpp"

namespace phaselab {

using Index = Eigen::Index;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;

/// Which tensor factor a partial trace keeps.
enum class Keep { left, right };

/// Local dimensions of a finite chain of sites.
class ChainLayout {
 public:
  explicit ChainLayout(std::vector<Index> site_dims) : site_dims_(std::move(site_dims)) {
    if (site_dims_.empty()) throw DimensionError("ChainLayout: no sites");
    for (Index d : site_dims_) {
      if (d < 2) throw DimensionError("ChainLayout: local dimension must be >= 2");
    }
  }

  /// `n_sites` spin-1/2 sites.
  static ChainLayout qubits(std::size_t n_sites) { return ChainLayout(std::vector<Index>(n_sites, 2)); }

  const std::vector<Index>& site_dims() const { return site_dims_; }
  std::size_t size() const { return site_dims_.size(); }

  Index total_dim() const {
    return std::accumulate(site_dims_.begin(), site_dims_.end(), Index{1}, std::multiplies<>());
  }

 private:
  std::vector<Index> site_dims_;
};

namespace pauli {

template <typename Real = double>
CMatrix<Real> identity() {
  return CMatrix<Real>::Identity(2, 2);
}

template <typename Real = double>
CMatrix<Real> x() {
  CMatrix<Real> m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

template <typename Real = double>
CMatrix<Real> y() {
  using C = std::complex<Real>;
  CMatrix<Real> m(2, 2);
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}

template <typename Real = double>
CMatrix<Real> z() {
  CMatrix<Real> m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// sigma^+ = (x + i y)/2, raising |down> to |up> with |up> = e_0.
template <typename Real = double>
CMatrix<Real> plus() {
  CMatrix<Real> m = CMatrix<Real>::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

template <typename Real = double>
CMatrix<Real> minus() {
  CMatrix<Real> m = CMatrix<Real>::Zero(2, 2);
  m(1, 0) = 1;
  return m;
}

/// r . sigma for a real 3-vector r.
template <typename Real = double>
CMatrix<Real> dot(const Eigen::Matrix<Real, 3, 1>& r) {
  return r(0) * x<Real>() + r(1) * y<Real>() + r(2) * z<Real>();
}

}  // namespace pauli

/// Kronecker product: (a (x) b)[i*rb + k, j*cb + l] = a[i,j] b[k,l].
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Result out(ra * rb, ca * cb);
  for (Index i = 0; i < ra; ++i) {
    for (Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

/// Kronecker product of a list of factors, left to right.
template <typename Real>
CMatrix<Real> kron_all(const std::vector<CMatrix<Real>>& factors) {
  if (factors.empty()) return CMatrix<Real>::Identity(1, 1);
  CMatrix<Real> out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

/**
 *  Partial trace of an operator on C^{d_left} (x) C^{d_right}.
 *
 *  keep == Keep::left returns the unique S on C^{d_left} with
 *  tr(S A) = tr(t (A (x) 1)) for every A; Keep::right is the mirror contract.
 */
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& t, Index d_left, Index d_right, Keep keep) {
  using Scalar = typename Derived::Scalar;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (d_left < 1 || d_right < 1 || t.rows() != d_left * d_right || t.cols() != d_left * d_right) {
    throw DimensionError("partial_trace: operator is " + std::to_string(t.rows()) + "x" +
                         std::to_string(t.cols()) + ", expected square of side " +
                         std::to_string(d_left * d_right));
  }
  if (keep == Keep::left) {
    Result s = Result::Zero(d_left, d_left);
    for (Index i = 0; i < d_left; ++i)
      for (Index j = 0; j < d_left; ++j)
        for (Index k = 0; k < d_right; ++k) s(i, j) += t(i * d_right + k, j * d_right + k);
    return s;
  }
  Result s = Result::Zero(d_right, d_right);
  for (Index k = 0; k < d_right; ++k)
    for (Index l = 0; l < d_right; ++l)
      for (Index i = 0; i < d_left; ++i) s(k, l) += t(i * d_right + k, i * d_right + l);
  return s;
}

/// 1 (x) ... (x) op (x) ... (x) 1 with `op` in position `site`.
template <typename Derived>
auto embed_site_operator(const Eigen::MatrixBase<Derived>& op, std::size_t site, const ChainLayout& layout) {
  using Scalar = typename Derived::Scalar;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto& dims = layout.site_dims();
  if (site >= dims.size()) {
    throw DimensionError("embed_site_operator: site " + std::to_string(site) + " out of range for " +
                         std::to_string(dims.size()) + " sites");
  }
  if (op.rows() != dims[site] || op.cols() != dims[site]) {
    throw DimensionError("embed_site_operator: operator does not match local dimension");
  }
  Index before = 1, after = 1;
  for (std::size_t i = 0; i < site; ++i) before *= dims[i];
  for (std::size_t i = site + 1; i < dims.size(); ++i) after *= dims[i];
  const Index d = dims[site];
  const Index total = before * d * after;
  Result out = Result::Zero(total, total);
  for (Index b = 0; b < before; ++b)
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        const Scalar v = op(i, j);
        if (v == Scalar(0)) continue;
        const Index row0 = (b * d + i) * after, col0 = (b * d + j) * after;
        for (Index a = 0; a < after; ++a) out(row0 + a, col0 + a) = v;
      }
  return out;
}

/// Two-site operator acting on neighbouring sites (site, site+1) of a qubit-or-qudit chain.
template <typename Derived>
auto embed_pair_operator(const Eigen::MatrixBase<Derived>& op, std::size_t site, const ChainLayout& layout) {
  using Scalar = typename Derived::Scalar;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto& dims = layout.site_dims();
  if (site + 1 >= dims.size()) throw DimensionError("embed_pair_operator: pair out of range");
  const Index d = dims[site] * dims[site + 1];
  if (op.rows() != d || op.cols() != d) throw DimensionError("embed_pair_operator: operator does not match pair");
  Index before = 1, after = 1;
  for (std::size_t i = 0; i < site; ++i) before *= dims[i];
  for (std::size_t i = site + 2; i < dims.size(); ++i) after *= dims[i];
  Result out = kron(Result::Identity(before, before), op);
  return Result(kron(out, Result::Identity(after, after)));
}

/// Frobenius norm; cheap stand-in wherever only an upper bound is needed.
template <typename Derived>
auto frobenius_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

/// Largest singular value.
template <typename Derived>
auto operator_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (m.size() == 0) return Real(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = m;
  Eigen::JacobiSVD<decltype(dense)> svd(dense);
  return svd.singularValues()(0);
}

/// Sum of singular values.
template <typename Derived>
auto trace_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  if (m.rows() != m.cols()) throw DimensionError("trace_norm: matrix is not square");
  if (m.size() == 0) return Real(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = m;
  Eigen::JacobiSVD<decltype(dense)> svd(dense);
  return svd.singularValues().sum();
}

/// ||u^dag u - 1|| in Frobenius norm.
template <typename Derived>
auto unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return (u.adjoint() * u - Dense::Identity(u.cols(), u.cols())).norm();
}

template <typename Derived>
auto commutator(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Dense(a * b - b * a);
}

template <typename Real>
struct HermitianEigen {
  RVector<Real> eigenvalues;   ///< ascending
  CMatrix<Real> eigenvectors;  ///< orthonormal columns, same order
};

/// Relative Hermiticity tolerance; inputs within it are symmetrized before solving.
inline constexpr double kHermitianTol = 1e-10;

/**
 *  Eigendecomposition of a Hermitian matrix.
 *
 *  The input is symmetrized as (h + h^dag)/2 after checking
 *  ||h - h^dag|| <= 1e-10 ||h||. Degenerate eigenspaces carry an arbitrary
 *  gauge: callers must only depend on spectral projectors there.
 */
template <typename Derived>
auto eig_hermitian(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (h.rows() != h.cols()) throw DimensionError("eig_hermitian: matrix is not square");
  const Real scale = h.norm();
  const Real asym = (h - h.adjoint()).norm();
  if (asym > Real(kHermitianTol) * scale) {
    throw DomainError("eig_hermitian: matrix is not Hermitian (||h - h^dag|| = " + std::to_string(double(asym)) +
                      ")");
  }
  Dense sym = (h + h.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<Dense> solver(sym);
  if (solver.info() != Eigen::Success) throw GateError("eig_hermitian: eigensolver did not converge");
  HermitianEigen<Real> out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  return out;
}

/// Eigenvector of the smallest eigenvalue, with its first significant entry made real positive.
template <typename Derived>
auto ground_vector(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  auto eig = eig_hermitian(h);
  CVector<Real> v = eig.eigenvectors.col(0);
  Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  v *= std::abs(v(k)) / v(k);
  return v;
}

/// Rank-one projector |v><v| for a (not necessarily normalized) vector.
template <typename Derived>
auto projector(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Dense(v * v.adjoint() / v.squaredNorm());
}

}  // namespace phaselab
