#pragma once

// States on M_n(C) given by density matrices, the A.omega action and the
// GNS construction.

#include <vector>

#include "phaselab/linalg.hpp"

namespace phaselab {

/// Positive semidefinite, trace-one density matrix.
class DensityState {
 public:
  /// Validates Hermiticity, positivity and trace (all to 1e-10), then symmetrizes.
  explicit DensityState(const ComplexMatrix& rho);

  static DensityState maximally_mixed(Index n);

  const ComplexMatrix& rho() const { return rho_; }
  Index dim() const { return rho_.rows(); }

  /// omega(A) = tr(rho A).
  cplx expect(const ComplexMatrix& a) const;

 private:
  ComplexMatrix rho_;
};

/// Validation tolerance for density matrices.
inline constexpr double kStateTol = 1e-10;

/// |v><v| / ||v||^2.
DensityState state_from_vector(const ComplexVector& v);

struct Purity {
  bool pure = false;
  double trace_square = 0;  ///< tr(rho^2)
};

/// Pure iff tr(rho^2) >= 1 - 1e-9.
Purity purity(const DensityState& s);

/// Trace norm of the density difference.
double state_distance(const DensityState& a, const DensityState& b);

/// (a rho a^dag) / tr(a rho a^dag); throws when a lies in the Gelfand ideal.
DensityState act(const ComplexMatrix& a, const DensityState& s);

/**
 *  GNS data of a state on M_n.
 *
 *  The Hilbert space is the quotient M_n / N_omega with inner product
 *  omega(X^dag Y). `basis` holds representatives whose classes are
 *  orthonormal; `ideal_basis` spans the Gelfand ideal N_omega.
 */
struct GnsResult {
  Index n = 0;
  Index dim = 0;
  std::vector<ComplexMatrix> basis;
  std::vector<ComplexMatrix> ideal_basis;
  ComplexVector cyclic;  ///< class of the identity
  ComplexMatrix rho;

  /// Matrix of pi_omega(A) in `basis`.
  ComplexMatrix represent(const ComplexMatrix& a) const;
};

/**
 *  Gram-Schmidt over the matrix units E_ij in row-major order with respect to
 *  omega(X^dag Y). Residuals whose squared norm falls below 1e-9 times the
 *  largest diagonal Gram entry are taken as null and span the Gelfand ideal.
 */
GnsResult gns(const DensityState& omega);

struct VectorStateDistance {
  double closed_form = 0;  ///< 2 sqrt(1 - |<psi, omega>|^2)
  double oracle = 0;       ///< trace distance of the induced pure states
};

VectorStateDistance vector_state_distance(const ComplexVector& psi, const ComplexVector& omega);

}  // namespace phaselab
