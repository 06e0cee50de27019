#pragma once

// Contraction of based loops in the state space of M_n(C): eigenvector
// transport, disk phase lifting, safe linear interpolations, projection
// compression, and a verifier for the resulting homotopy sheets.

#include <string>
#include <vector>

#include "phaselab/states.hpp"

namespace phaselab {

/// omega_0^n = state of e_0.
DensityState base_state(Index n);

/// A closed sampled loop of states based at omega_0^n.
struct StateLoop {
  Index n = 0;
  std::vector<DensityState> samples;

  /// Largest adjacent trace-norm step.
  double modulus() const;
  /// Throws InputError unless the loop is nonempty, closed and based at omega_0^n.
  void validate() const;
};

/// Homotopy H(t, s) stored as rows[s][t]; row 0 is the input loop.
struct HomotopySheet {
  Index n = 0;
  std::vector<std::vector<DensityState>> rows;
  std::vector<std::string> row_labels;  ///< operator family that produced each row
};

/// diag(1, ..., 1, 0, ..., 0) with k trailing zeros.
ComplexMatrix projection_matrix(Index n, Index k);

/// Chart parameters of the phase lift.
inline constexpr double kBoundaryTol = 1e-9;
inline constexpr double kHoldRadius = 0.5;
inline constexpr double kMaxDiskStep = 0.1;

/**
 *  Continuous unit phases lambda_t with lambda_t gamma_t = 1 wherever
 *  |gamma_t| >= 1 - 1e-9. Inside the disk lambda follows the chart map
 *  anchored at the last entry point w0 with value mu0:
 *    mu(w) = mu0 (w0/|w0|) (|w|/w) exp(-i theta (|w| - |w0|)/(1 - |w0|)),
 *  theta = arg(mu0 w0/|w0|); below radius 1/2 lambda is held.
 */
std::vector<cplx> disk_phase_lift(const std::vector<cplx>& gamma);

enum class InterpolationKind { unitary, projection };

struct InterpolationCheck {
  bool safe = false;
  double min_normalizer = 0;  ///< min over s of omega((sA + (1-s))^dag (sA + (1-s)))
  double argmin_s = 0;
};

inline constexpr int kInterpolationGrid = 101;

InterpolationCheck interpolation_safe(const ComplexMatrix& a, const DensityState& omega, InterpolationKind kind);

/// Eigenvalue threshold for near-pure samples.
inline constexpr double kNearPure = 7.0 / 8.0;
/// Above this the transport sends the top eigenvector all the way to e_0.
inline constexpr double kFullyTransported = 15.0 / 16.0;
/// Largest admissible input step.
inline constexpr double kMaxLoopStep = 0.02;
/// Declared output modulus as a multiple of the input one.
inline constexpr double kModulusFactor = 5.0;

struct Rectification {
  HomotopySheet sheet;  ///< excludes nothing: row 0 is the input
  StateLoop out_loop;   ///< every sample has psi(P^n_1) = 1
  std::vector<ComplexMatrix> unitaries;
  std::vector<cplx> phases;
};

/**
 *  One rectification pass: unitaries U_t that move near-pure top
 *  eigenvectors to e_0, phases lambda_t from disk_phase_lift of
 *  gamma_t = omega_t(U_t), then the rows s lambda U + (1-s) 1 followed by
 *  (s P + (1-s) 1) lambda U.
 */
Rectification rectify_to_projection(const StateLoop& loop);

/**
 *  Contracts a based loop to the constant loop by rectifying on the
 *  compressions P^n_k M_n P^n_k for increasing k; the block operators are
 *  pushed forward as (1 - P) + A. Sheets are concatenated along s.
 */
HomotopySheet contract_loop(const StateLoop& loop);

struct VerifyReport {
  bool pass = true;
  double max_step = 0;
  double modulus = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::string> violations;
};

VerifyReport verify_homotopy(const HomotopySheet& sheet, const StateLoop& input, double modulus);

}  // namespace phaselab
