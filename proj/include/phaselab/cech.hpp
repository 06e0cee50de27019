#pragma once

// Sampled Cech data: covers with overlap sample points, 1-cochains valued in
// U(1) or in unitaries modulo phase, the connecting map delta_1, winding
// numbers and the plaquette degree of a ray field on S^2.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phaselab/linalg.hpp"

namespace phaselab {

using SamplePoint = std::vector<double>;
using ChartPair = std::pair<std::size_t, std::size_t>;
using ChartTriple = std::array<std::size_t, 3>;

/// Tolerance used to identify the same sample point in different overlap lists.
inline constexpr double kPointTol = 1e-12;

/// Finite nerve with sample points on every pairwise and triple overlap.
class SampledCover {
 public:
  explicit SampledCover(std::size_t n_charts) : n_charts_(n_charts) {}

  std::size_t n_charts() const { return n_charts_; }

  /// Sets the samples of U_i n U_j (and of U_j n U_i).
  void set_overlap(std::size_t i, std::size_t j, std::vector<SamplePoint> points);
  /// Sets the samples of U_i n U_j n U_k; they must already lie in the three pairwise overlaps.
  void set_triple(std::size_t i, std::size_t j, std::size_t k, std::vector<SamplePoint> points);

  const std::vector<SamplePoint>& overlap(std::size_t i, std::size_t j) const;
  /// Overlaps keyed by canonical pairs i < j.
  const std::map<ChartPair, std::vector<SamplePoint>>& overlaps() const { return overlaps_; }
  const std::map<ChartTriple, std::vector<SamplePoint>>& triples() const { return triples_; }

 private:
  void check_chart(std::size_t i) const;

  std::size_t n_charts_;
  std::map<ChartPair, std::vector<SamplePoint>> overlaps_;
  std::map<ChartTriple, std::vector<SamplePoint>> triples_;
};

/// Index of `x` in `points`, or nullopt.
std::optional<std::size_t> find_point(const std::vector<SamplePoint>& points, const SamplePoint& x);

inline cplx group_inverse(const cplx& g) { return std::conj(g); }
inline ComplexMatrix group_inverse(const ComplexMatrix& g) { return g.adjoint(); }

/**
 *  A 1-cochain g_ij sampled at overlap points. Only i < j is stored;
 *  g_ji is the group inverse and g_ii the unit.
 */
template <typename Value>
class Cochain1 {
 public:
  struct Entry {
    SamplePoint point;
    Value value;
  };

  Cochain1(std::size_t n_charts, Value unit) : n_charts_(n_charts), unit_(std::move(unit)) {}

  std::size_t n_charts() const { return n_charts_; }
  const Value& unit() const { return unit_; }

  void set(std::size_t i, std::size_t j, std::vector<Entry> entries) {
    if (i >= n_charts_ || j >= n_charts_) throw DimensionError("Cochain1::set: chart out of range");
    if (i == j) throw DomainError("Cochain1::set: diagonal values are fixed to the unit");
    if (i > j) {
      for (auto& e : entries) e.value = group_inverse(e.value);
      std::swap(i, j);
    }
    entries_[{i, j}] = std::move(entries);
  }

  /// Stored entries for i < j.
  const std::map<ChartPair, std::vector<Entry>>& entries() const { return entries_; }

  /// g_ij(x); throws when x is not a sample of the pair.
  Value value(std::size_t i, std::size_t j, const SamplePoint& x) const {
    if (i >= n_charts_ || j >= n_charts_) throw DimensionError("Cochain1::value: chart out of range");
    if (i == j) return unit_;
    const bool reversed = i > j;
    const auto it = entries_.find(reversed ? ChartPair{j, i} : ChartPair{i, j});
    if (it != entries_.end()) {
      for (const auto& e : it->second) {
        if (points_equal(e.point, x)) return reversed ? Value(group_inverse(e.value)) : e.value;
      }
    }
    throw DomainError("Cochain1::value: missing sample for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }

 private:
  static bool points_equal(const SamplePoint& a, const SamplePoint& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
      if (std::abs(a[k] - b[k]) > kPointTol) return false;
    return true;
  }

  std::size_t n_charts_;
  Value unit_;
  std::map<ChartPair, std::vector<Entry>> entries_;
};

using U1Cochain1 = Cochain1<cplx>;
/// Unitary lifts of a projective-unitary cochain.
using PUCochain1 = Cochain1<ComplexMatrix>;

inline constexpr double kCocycleTol = 1e-8;

struct CocycleReport {
  bool pass = true;
  bool vacuous = false;  ///< no triple overlaps in the nerve
  double max_defect = 0;
  std::optional<ChartTriple> witness_triple;
  std::optional<SamplePoint> witness_point;
};

/// max over triple points of |g_ij g_jk - g_ik|.
CocycleReport check_cocycle_u1(const U1Cochain1& c, const SampledCover& cover, double tol = kCocycleTol);

/**
 *  Pullback along a refinement map r (new chart -> old chart):
 *  g^r_ab(x) = g_{r(a) r(b)}(x) at the samples of `new_cover`.
 */
template <typename Value>
Cochain1<Value> refine(const Cochain1<Value>& c, const std::vector<std::size_t>& r, const SampledCover& new_cover) {
  if (r.size() != new_cover.n_charts()) throw DimensionError("refine: map size differs from the new chart count");
  for (std::size_t old : r) {
    if (old >= c.n_charts()) throw DimensionError("refine: map target out of range");
  }
  Cochain1<Value> out(new_cover.n_charts(), c.unit());
  for (const auto& [pair, points] : new_cover.overlaps()) {
    std::vector<typename Cochain1<Value>::Entry> entries;
    entries.reserve(points.size());
    for (const auto& x : points) entries.push_back({x, c.value(r[pair.first], r[pair.second], x)});
    out.set(pair.first, pair.second, std::move(entries));
  }
  return out;
}

struct WindingResult {
  int winding = 0;
  double defect = 0;    ///< |sum / 2 pi - winding|
  double max_step = 0;  ///< largest |phase increment|
};

/**
 *  Winding number of a closed loop of unit scalars. The last sample may
 *  repeat the first; otherwise the closing increment is included.
 *  Every increment must be smaller than pi - 1e-6 in magnitude.
 */
WindingResult winding_number(const std::vector<cplx>& phases);

struct CoboundaryResult {
  bool coboundary = false;
  int winding = 0;
};

/// Two-chart cover whose single overlap is a sampled loop: coboundary iff the winding of g_01 is zero.
CoboundaryResult is_coboundary_two_chart(const U1Cochain1& c);

inline constexpr double kScalarTol = 1e-8;

struct Delta1Result {
  bool no_triples = true;
  std::map<ChartTriple, std::vector<cplx>> phases;
  double max_scalar_defect = 0;
};

/// f_ijk = g_ik^{-1} g_ij g_jk at every triple point, checked to be a multiple of the identity.
Delta1Result delta1_lift(const PUCochain1& c, const SampledCover& cover, double tol = kScalarTol);

/// theta_k = (k + 1/2) pi / K, phi_m = 2 pi m / M.
struct SphereGrid {
  Index k_theta = 32;
  Index m_phi = 64;

  SphereGrid() = default;
  SphereGrid(Index k, Index m);

  double theta(Index k) const;
  double phi(Index m) const;
  Eigen::Vector3d point(Index k, Index m) const;
  Index size() const { return k_theta * m_phi; }
};

/// Plaquettes with |flux| above pi - kFluxMargin mean the grid is too coarse.
inline constexpr double kFluxMargin = 0.1;

struct DegreeResult {
  int degree = 0;
  double max_flux = 0;
  double total_flux = 0;  ///< sum of fluxes / 2 pi
  std::vector<double> band_flux;  ///< (K-1) x M, row-major
  double north_flux = 0;
  double south_flux = 0;
};

/**
 *  Sum of plaquette Berry fluxes arg(<1,2><2,3><3,4><4,1>) over a closed
 *  grid. Band plaquettes run (k,m) -> (k+1,m) -> (k+1,m+1) -> (k,m+1),
 *  counterclockwise seen from outside; the polar caps are the innermost
 *  rings, north in increasing and south in decreasing phi.
 *  `field` is row-major: sample (k, m) at k * M + m.
 */
DegreeResult plaquette_degree(const SphereGrid& grid, const std::vector<ComplexVector>& field);

/// Samples `f` on the grid, then calls the overload above.
DegreeResult plaquette_degree(const SphereGrid& grid,
                              const std::function<ComplexVector(const Eigen::Vector3d&)>& f);

}  // namespace phaselab
