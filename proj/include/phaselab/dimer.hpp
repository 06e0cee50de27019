#pragma once

/**
 *  The S^3-parametrized spin-1/2 dimer chain.
 *
 *  Basis conventions: |up> = e_0, |down> = e_1, sigma^z = diag(1, -1), and
 *  |ab> = |a> (x) |b> with the left site first. On the plus hemisphere the
 *  dimer sits on sites (0, 1); on the minus hemisphere on (-1, 0) with
 *  site -1 as the first tensor factor.
 */

#include <array>

#include "phaselab/cech.hpp"
#include "phaselab/linalg.hpp"

namespace phaselab {

enum class Hemisphere { plus, minus };

/// A point w = (wvec, w4) of S^3.
class ParamPoint {
 public:
  /// Requires | ||w|| - 1 | <= 1e-12.
  explicit ParamPoint(const Eigen::Vector4d& w);
  static ParamPoint normalized(const Eigen::Vector4d& w);
  /// Equator point (r, 0) for a unit 3-vector r.
  static ParamPoint equator(const Eigen::Vector3d& r);

  const Eigen::Vector4d& w() const { return w_; }
  Eigen::Vector3d wvec() const { return w_.head<3>(); }
  double w4() const { return w_(3); }
  double wnorm() const { return w_.head<3>().norm(); }

  /// (theta, phi) with wvec = ||wvec|| n(theta, phi), theta in [0, pi], phi = atan2(w2, w1).
  std::array<double, 2> angles() const;

 private:
  Eigen::Vector4d w_;
};

struct ModelConfig {
  double epsilon = 0.25;
  int n_dimers = 2;
  SphereGrid grid{32, 64};
  bool conjugate = false;       ///< complex-conjugate every unitary of the construction
  bool constant_field = false;  ///< debug: replace the projected map by a constant ray

  void validate() const;
};

/// max(0, (+-w4 - eps) / (1 - eps)).
double bump(const ParamPoint& w, Hemisphere h, double eps);

/// Whether w lies in O+- = {+-w4 > -eps}.
bool in_chart(const ParamPoint& w, Hemisphere h, double eps);
/// Whether |w4| < eps.
bool in_band(const ParamPoint& w, double eps);

/**
 *  plus:  g+ s0.s1 + wvec.(s0 - s1)
 *  minus: g- sA.sB + wvec.(sB - sA), A = site -1 first.
 */
ComplexMatrix dimer_hamiltonian(const ParamPoint& w, Hemisphere h, double eps);

struct DimerClosedForm {
  double g = 0, f = 0, c = 0, d = 0;
  Eigen::Vector4d spectrum;  ///< ascending: -g - 2f, g, g, -g + 2f
  ComplexVector ground;
};

/// Closed-form spectrum and the continuous ground state (no angle singularity).
DimerClosedForm dimer_closed_form(const ParamPoint& w, Hemisphere h, double eps);

/// [[cos(t/2)e^{ip/2}, sin(t/2)e^{-ip/2}], [-sin(t/2)e^{ip/2}, cos(t/2)e^{-ip/2}]].
ComplexMatrix site_rotation(double theta, double phi);

/// n(theta, phi) = (cos p sin t, sin p sin t, cos t).
Eigen::Vector3d bloch_direction(double theta, double phi);

/// W = a 1 + b sz sz - (1/sqrt2)(s+ s- - s- s+), a, b = (1 +- 1/sqrt2)/2.
ComplexMatrix dimer_swap_unitary();

/// V+ = U* W* U W and V- = U* W U W* with U = U(theta,phi) (x) U(theta,phi).
ComplexMatrix dimer_transport(double theta, double phi, Hemisphere h);
/// As above with the principal angles of w; w must lie in the band.
ComplexMatrix dimer_transport(const ParamPoint& w, Hemisphere h, double eps);

/// Reject truncations whose y_overlap falls below this.
inline constexpr double kYOverlapFloor = 0.9;

struct TruncatedZ {
  ComplexMatrix z;
  double y_overlap = 0;
  /// B- G^dag B-^dag B+^dag G B+ on the 2N sites.
  ComplexMatrix core;
};

/**
 *  Cocycle unitary on sites 1..2N (tensor positions 0..2N-1) at angles
 *  (theta, phi). `compensate` appends U_{2N}^dag so that the unpaired last
 *  site does not pollute the overlap with Omega_R.
 */
TruncatedZ truncated_Z(double theta, double phi, int n_dimers, bool conjugate = false, bool compensate = true);
/// As above for a band point; uses its principal angles.
TruncatedZ truncated_Z(const ParamPoint& w, const ModelConfig& cfg);

/// |up down up down ...> on 2N sites.
ComplexVector omega_right(int n_dimers);

/**
 *  max over A in {sx_1, sz_2, sy_3} of
 *  || z A z^dag - alpha_-(alpha_+^{-1}(A)) ||, with both automorphisms
 *  applied as sequential conjugations.
 */
double intertwiner_residual(const ParamPoint& w, const ModelConfig& cfg);

struct ProjectedRay {
  ComplexVector coeffs;  ///< unit vector in the basis {Omega_R, sx_1 Omega_R}
  double weight = 0;     ///< squared norm of the projection before normalizing
  double y_overlap = 0;
};

inline constexpr double kWeightTol = 1e-6;

/// Projection of z^dag Omega_R onto span{Omega_R, sx_1 Omega_R}.
ProjectedRay projected_equator_map(const ParamPoint& w, const ModelConfig& cfg);

/// Ground ray of -r.sigma: (cos(t/2) e^{-ip/2}, sin(t/2) e^{ip/2}).
ComplexVector bloch_ground_map(const Eigen::Vector3d& r);

struct InvariantReport {
  int degree = 0;
  int bloch_degree = 0;
  double max_flux = 0;
  double bloch_max_flux = 0;
  double y_overlap_min = 1;
  double weight_min = 1;
  double agreement_min = 1;  ///< min ray product with the Bloch map
  double intertwiner_max = 0;
};

/// Plaquette degree of the projected equator map over cfg.grid, with the Bloch oracle alongside.
InvariantReport invariant_degree(const ModelConfig& cfg);

struct ProductBound {
  double bound = 0;    ///< |1 - (r.s)^N|
  double witness = 0;  ///< |tr((rho_r - rho_s) H_N(r))|
  double exact = 0;    ///< trace distance of the product states
};

ProductBound product_distance_bound(const Eigen::Vector3d& r, const Eigen::Vector3d& s, int n_sites);

}  // namespace phaselab
