#pragma once

// Projective Hilbert space: rays, the chord / Fubini-Study / gap metrics,
// positive-phase sections and explicit unitary transports.

#include <vector>

#include "phaselab/linalg.hpp"

namespace phaselab {

/// Two rays are equal iff |1 - ray_product| <= kRayTol.
inline constexpr double kRayTol = 1e-10;

/// A point of projective space, stored through a unit representative.
class Ray {
 public:
  /// Takes a representative whose norm is within 1e-12 of one.
  explicit Ray(ComplexVector rep);

  /// Normalizes any nonzero vector.
  static Ray from_vector(const ComplexVector& v);

  const ComplexVector& rep() const { return rep_; }
  Index dim() const { return rep_.size(); }

  /// |1><1| for the representative.
  ComplexMatrix projector() const;

  friend bool operator==(const Ray& a, const Ray& b);

 private:
  ComplexVector rep_;
};

/// |<a, b>| of unit representatives, in [0, 1].
double ray_product(const Ray& a, const Ray& b);

struct RayDistances {
  double chord = 0;
  double fubini_study = 0;
  double gap = 0;
};

/// chord = sqrt(2 - 2p), fubini_study = arccos p, gap = sqrt(1 - p^2).
RayDistances ray_distances(const Ray& a, const Ray& b);

/// The representative v of `target` with <base, v> real and positive.
ComplexVector section_positive(const Ray& base, const Ray& target);

/**
 *  Unitary U with U psi = omega that acts as multiplication by
 *  <omega, psi>/|<omega, psi>| on span{psi, omega}^perp.
 *  Requires |<psi, omega>| > 1e-12.
 */
ComplexMatrix rotator(const ComplexVector& psi, const ComplexVector& omega);

/// z -> <y,x> z - <y,z> x + <x,z> y on span{x, y}, identity elsewhere.
ComplexMatrix elementary_transport(const ComplexVector& x, const ComplexVector& y);

struct FrameTransport {
  ComplexMatrix u;
  double defect = 0;  ///< ||1 - u|| (operator norm)
};

/**
 *  Unitary sending the orthonormal columns of `xs` to those of `ys`, built
 *  column by column: transport the first k vectors, then correct the image
 *  of the next one with an elementary transport.
 */
FrameTransport frame_transport(const ComplexMatrix& xs, const ComplexMatrix& ys);

enum class CayleyDirection { forward, inverse };

/// forward: U -> i(1 - U)(1 + U)^{-1}; inverse: A -> (i - A)(i + A)^{-1}.
ComplexMatrix cayley_chart(const ComplexMatrix& m, CayleyDirection direction);

/// (|<phi2,psi>| / <phi2,psi>) * (<phi1,psi> / |<phi1,psi>|).
cplx sector_transition_phase(const Ray& phi1, const Ray& phi2, const Ray& psi);

}  // namespace phaselab
