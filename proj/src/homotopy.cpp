#include "phaselab/homotopy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "phaselab/projective.hpp"

namespace phaselab {

namespace {

constexpr double kEndpointTol = 1e-10;
constexpr double kRowTol = 1e-12;
constexpr double kFinalRowTol = 1e-8;
constexpr double kContinuationFloor = 0.1;
constexpr double kSafeTol = 1e-10;
constexpr int kMaxSSteps = 4096;

double distance(const DensityState& a, const DensityState& b) { return state_distance(a, b); }

/// Fractional power T^a of the elementary transport sending x to y, principal branch.
ComplexMatrix fractional_transport(const ComplexVector& x, const ComplexVector& y, double a) {
  const Index n = x.size();
  ComplexMatrix id = ComplexMatrix::Identity(n, n);
  if (a <= 0) return id;
  const ComplexMatrix t = elementary_transport(x, y);
  if (a >= 1) return t;
  ComplexVector perp = y - x.dot(y) * x;
  if (perp.norm() < 1e-14) {
    const cplx zeta = y.dot(x);
    return id + (std::pow(zeta, a) - 1.0) * x * x.adjoint();
  }
  perp.normalize();
  Eigen::Matrix<cplx, Eigen::Dynamic, 2> q(n, 2);
  q.col(0) = x;
  q.col(1) = perp;
  const Eigen::Matrix2cd block = q.adjoint() * t * q;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(block);
  Eigen::Vector2cd powers;
  for (int i = 0; i < 2; ++i) powers(i) = std::pow(solver.eigenvalues()(i), a);
  const Eigen::Matrix2cd v = solver.eigenvectors();
  const Eigen::Matrix2cd block_a = v * powers.asDiagonal() * v.inverse();
  return id - q * q.adjoint() + q * block_a * q.adjoint();
}

double ramp(double lambda_max) {
  return std::clamp((lambda_max - kNearPure) / (kFullyTransported - kNearPure), 0.0, 1.0);
}

/// Stage 1: unitaries moving near-pure top eigenvectors towards e_0.
std::vector<ComplexMatrix> eigenvector_transport(const StateLoop& loop) {
  const Index m = loop.n;
  ComplexVector e0 = ComplexVector::Zero(m);
  e0(0) = 1;
  ComplexMatrix u_free = ComplexMatrix::Identity(m, m);
  std::vector<ComplexMatrix> out;
  out.reserve(loop.samples.size());
  bool in_run = false;
  ComplexVector v_prev;
  for (std::size_t t = 0; t < loop.samples.size(); ++t) {
    const auto eig = eig_hermitian(loop.samples[t].rho());
    const double lam = eig.eigenvalues(m - 1);
    if (lam <= kNearPure) {
      in_run = false;
      out.push_back(u_free);
      continue;
    }
    ComplexVector v = eig.eigenvectors.col(m - 1);
    if (in_run) {
      const cplx ov = v_prev.dot(v);
      if (ov == cplx(0)) throw GateError("rectify: top eigenvector continuation is ambiguous (zero overlap)");
      if (std::abs(ov) < kContinuationFloor) {
        throw GateError("rectify: top eigenvector jumped between samples " + std::to_string(t - 1) + " and " +
                        std::to_string(t));
      }
      v *= std::abs(ov) / ov;
    } else {
      // Entry into a near-pure run: the phase is free, so start with <e_0, U v> >= 0.
      const cplx c = (u_free * v)(0);
      if (std::abs(c) > 0) v *= std::conj(c) / std::abs(c);
    }
    in_run = true;
    v_prev = v;
    const double a = ramp(lam);
    // Normalizing keeps roundoff in u_free from compounding through the transport formula.
    const ComplexMatrix u = fractional_transport((u_free * v).normalized(), e0, a) * u_free;
    if (a >= 1) u_free = u;
    out.push_back(u);
  }
  return out;
}

using OperatorRow = std::vector<ComplexMatrix>;

struct Plan {
  std::vector<OperatorRow> ops;  ///< ops[r][t] acts on the input samples; row 0 is the identity
  std::vector<std::string> labels;
  std::vector<ComplexMatrix> unitaries;
  std::vector<cplx> phases;
};

std::vector<DensityState> apply_row(const OperatorRow& ops, const std::vector<DensityState>& samples) {
  std::vector<DensityState> row;
  row.reserve(samples.size());
  for (std::size_t t = 0; t < samples.size(); ++t) row.push_back(act(ops[t], samples[t]));
  return row;
}

double row_gap(const std::vector<DensityState>& a, const std::vector<DensityState>& b) {
  double worst = 0;
  for (std::size_t t = 0; t < a.size(); ++t) worst = std::max(worst, distance(a[t], b[t]));
  return worst;
}

/**
 *  Appends rows s = 1/N, ..., 1 of family(t, s), doubling N until every
 *  s-step is within `target` or the cap is reached.
 */
void append_part(Plan& plan, std::vector<DensityState>& last_row, const std::vector<DensityState>& samples,
                 const std::function<ComplexMatrix(std::size_t, double)>& family, const std::string& label,
                 double target) {
  for (int steps = 2;; steps *= 2) {
    std::vector<OperatorRow> ops;
    std::vector<std::vector<DensityState>> rows;
    double worst = 0;
    rows.reserve(std::size_t(steps));
    const std::vector<DensityState>* prev = &last_row;
    for (int j = 1; j <= steps; ++j) {
      const double s = double(j) / steps;
      OperatorRow row_ops;
      row_ops.reserve(samples.size());
      for (std::size_t t = 0; t < samples.size(); ++t) row_ops.push_back(family(t, s));
      rows.push_back(apply_row(row_ops, samples));
      ops.push_back(std::move(row_ops));
      worst = std::max(worst, row_gap(*prev, rows.back()));
      prev = &rows.back();
      if (worst > target && steps < kMaxSSteps) break;
    }
    if (worst <= target || steps >= kMaxSSteps) {
      for (std::size_t j = 0; j < ops.size(); ++j) {
        plan.ops.push_back(std::move(ops[j]));
        std::ostringstream os;
        os << label << " s=" << (j + 1) << "/" << steps;
        plan.labels.push_back(os.str());
      }
      last_row = std::move(rows.back());
      return;
    }
  }
}

Plan plan_rectification(const StateLoop& loop, double target) {
  const Index m = loop.n;
  const ComplexMatrix id = ComplexMatrix::Identity(m, m);
  const ComplexMatrix p = projection_matrix(m, 1);
  Plan plan;
  plan.unitaries = eigenvector_transport(loop);
  std::vector<cplx> gamma;
  gamma.reserve(loop.samples.size());
  for (std::size_t t = 0; t < loop.samples.size(); ++t) gamma.push_back(loop.samples[t].expect(plan.unitaries[t]));
  plan.phases = disk_phase_lift(gamma);

  std::vector<ComplexMatrix> lifted;
  lifted.reserve(loop.samples.size());
  for (std::size_t t = 0; t < loop.samples.size(); ++t) {
    lifted.push_back(plan.phases[t] * plan.unitaries[t]);
    if (!interpolation_safe(lifted.back(), loop.samples[t], InterpolationKind::unitary).safe) {
      throw GateError("rectify: unitary interpolation meets the Gelfand ideal at sample " + std::to_string(t));
    }
    const DensityState chi = act(lifted.back(), loop.samples[t]);
    if (!interpolation_safe(p, chi, InterpolationKind::projection).safe) {
      throw GateError("rectify: projection interpolation meets the Gelfand ideal at sample " + std::to_string(t));
    }
  }

  plan.ops.push_back(OperatorRow(loop.samples.size(), id));
  plan.labels.push_back("input");
  std::vector<DensityState> last_row = loop.samples;
  append_part(
      plan, last_row, loop.samples, [&](std::size_t t, double s) { return ComplexMatrix(s * lifted[t] + (1 - s) * id); },
      "unitary", target);
  append_part(
      plan, last_row, loop.samples,
      [&](std::size_t t, double s) { return ComplexMatrix((s * p + (1 - s) * id) * lifted[t]); }, "projection",
      target);
  return plan;
}

double step_target(double modulus) { return std::max(kModulusFactor * modulus, 1e-12); }

StateLoop compress(const StateLoop& loop, Index m) {
  StateLoop out;
  out.n = m;
  for (const auto& s : loop.samples) {
    ComplexMatrix block = s.rho().topLeftCorner(m, m);
    block /= block.trace().real();
    out.samples.emplace_back(block);
  }
  return out;
}

/// psi(P^n_k) = 1 for every sample.
bool rectified_to(const StateLoop& loop, Index k) {
  const ComplexMatrix p = projection_matrix(loop.n, k);
  for (const auto& s : loop.samples)
    if (std::abs(1.0 - s.expect(p).real()) > kRowTol) return false;
  return true;
}

}  // namespace


DensityState base_state(Index n) {
  ComplexVector e0 = ComplexVector::Zero(n);
  e0(0) = 1;
  return state_from_vector(e0);
}

double StateLoop::modulus() const {
  double worst = 0;
  for (std::size_t t = 0; t + 1 < samples.size(); ++t) worst = std::max(worst, distance(samples[t], samples[t + 1]));
  return worst;
}

void StateLoop::validate() const {
  if (n < 1) throw InputError("loop: n must be positive");
  if (samples.size() < 2) throw InputError("loop: need at least two samples");
  const DensityState base = base_state(n);
  for (std::size_t t = 0; t < samples.size(); ++t) {
    if (samples[t].dim() != n) throw InputError("loop: sample " + std::to_string(t) + " has the wrong dimension");
  }
  if (distance(samples.front(), base) > kEndpointTol) throw InputError("loop: first sample is not the base state");
  if (distance(samples.back(), base) > kEndpointTol) throw InputError("loop: last sample is not the base state");
}

ComplexMatrix projection_matrix(Index n, Index k) {
  if (n < 1 || k < 0 || k > n - 1) throw DomainError("projection_matrix: need 0 <= k <= n - 1");
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n - k; ++i) p(i, i) = 1;
  return p;
}

std::vector<cplx> disk_phase_lift(const std::vector<cplx>& gamma) {
  std::vector<cplx> out;
  out.reserve(gamma.size());
  for (std::size_t t = 0; t < gamma.size(); ++t) {
    if (std::abs(gamma[t]) > 1.0 + kBoundaryTol) throw DomainError("disk_phase_lift: sample outside the unit disk");
    if (t > 0 && std::abs(gamma[t] - gamma[t - 1]) >= kMaxDiskStep) {
      throw DomainError("disk_phase_lift: step between samples " + std::to_string(t - 1) + " and " +
                        std::to_string(t) + " is too coarse");
    }
  }
  cplx lam = 1;
  cplx w0 = 0, mu0 = 1;
  bool anchored = false;
  for (const cplx& w : gamma) {
    const double r = std::abs(w);
    if (r >= 1.0 - kBoundaryTol) {
      lam = std::conj(w) / r;
      w0 = w;
      mu0 = lam;
      anchored = true;
    } else if (r < kHoldRadius) {
      anchored = false;
    } else {
      if (!anchored) {
        w0 = w;
        mu0 = lam;
        anchored = true;
      }
      const double r0 = std::abs(w0);
      const cplx unit0 = w0 / r0;
      lam = mu0 * unit0 * (r / w);
      if (r0 < 1.0 - kBoundaryTol) {
        const double theta = std::arg(mu0 * unit0);
        lam *= std::exp(cplx(0, -theta * (r - r0) / (1.0 - r0)));
      }
      lam /= std::abs(lam);
    }
    out.push_back(lam);
  }
  return out;
}

InterpolationCheck interpolation_safe(const ComplexMatrix& a, const DensityState& omega, InterpolationKind kind) {
  const Index n = omega.dim();
  if (a.rows() != n || a.cols() != n) throw DimensionError("interpolation_safe: dimension mismatch");
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  if (kind == InterpolationKind::unitary && unitarity_defect(a) > 1e-9) {
    throw DomainError("interpolation_safe: operator is not unitary");
  }
  if (kind == InterpolationKind::projection && ((a * a - a).norm() > 1e-9 || (a - a.adjoint()).norm() > 1e-9)) {
    throw DomainError("interpolation_safe: operator is not a projection");
  }
  InterpolationCheck out;
  out.min_normalizer = std::numeric_limits<double>::infinity();
  for (int j = 0; j < kInterpolationGrid; ++j) {
    const double s = double(j) / (kInterpolationGrid - 1);
    const ComplexMatrix b = s * a + (1 - s) * id;
    const double v = omega.expect(ComplexMatrix(b.adjoint() * b)).real();
    if (v < out.min_normalizer) {
      out.min_normalizer = v;
      out.argmin_s = s;
    }
  }
  out.safe = out.min_normalizer > kSafeTol;
  return out;
}

Rectification rectify_to_projection(const StateLoop& loop) {
  loop.validate();
  const Plan plan = plan_rectification(loop, step_target(loop.modulus()));
  Rectification out;
  out.sheet.n = loop.n;
  for (std::size_t r = 0; r < plan.ops.size(); ++r) {
    out.sheet.rows.push_back(apply_row(plan.ops[r], loop.samples));
    out.sheet.row_labels.push_back(plan.labels[r]);
  }
  out.out_loop.n = loop.n;
  out.out_loop.samples = out.sheet.rows.back();
  out.unitaries = plan.unitaries;
  out.phases = plan.phases;
  return out;
}

HomotopySheet contract_loop(const StateLoop& loop) {
  loop.validate();
  const double delta = loop.modulus();
  if (delta > kMaxLoopStep + 1e-12) {
    throw DomainError("contract_loop: loop step " + std::to_string(delta) + " exceeds " + std::to_string(kMaxLoopStep));
  }
  const double target = step_target(delta);
  const Index n = loop.n;
  HomotopySheet sheet;
  sheet.n = n;
  sheet.rows.push_back(loop.samples);
  sheet.row_labels.push_back("input");

  Index k = 0;
  while (k + 1 < n && rectified_to(loop, k + 1)) ++k;
  StateLoop current = loop;
  for (; k + 1 < n; ++k) {
    const Index m = n - k;
    const StateLoop block = compress(current, m);
    const Plan plan = plan_rectification(block, target);
    const ComplexMatrix outside = ComplexMatrix::Identity(n, n) - projection_matrix(n, k);
    for (std::size_t r = 1; r < plan.ops.size(); ++r) {
      std::vector<DensityState> row;
      row.reserve(current.samples.size());
      for (std::size_t t = 0; t < current.samples.size(); ++t) {
        ComplexMatrix pushed = outside;
        pushed.topLeftCorner(m, m) += plan.ops[r][t];
        row.push_back(act(pushed, current.samples[t]));
      }
      sheet.rows.push_back(std::move(row));
      sheet.row_labels.push_back("k=" + std::to_string(k) + " " + plan.labels[r]);
    }
    current.samples = sheet.rows.back();
  }
  return sheet;
}

VerifyReport verify_homotopy(const HomotopySheet& sheet, const StateLoop& input, double modulus) {
  VerifyReport rep;
  rep.modulus = modulus;
  rep.rows = sheet.rows.size();
  rep.cols = sheet.rows.empty() ? 0 : sheet.rows.front().size();
  std::size_t dropped = 0;
  const auto fail = [&](const std::string& msg) {
    rep.pass = false;
    if (rep.violations.size() < 20) {
      rep.violations.push_back(msg);
    } else {
      ++dropped;
    }
  };
  const auto cell = [](std::size_t s, std::size_t t) {
    return "(s=" + std::to_string(s) + ", t=" + std::to_string(t) + ")";
  };
  if (sheet.rows.empty()) {
    fail("sheet has no rows");
    return rep;
  }
  const DensityState base = base_state(input.n);
  for (std::size_t s = 0; s < sheet.rows.size(); ++s) {
    const auto& row = sheet.rows[s];
    if (row.size() != rep.cols) {
      fail("row " + std::to_string(s) + " has " + std::to_string(row.size()) + " cells");
      continue;
    }
    for (std::size_t t = 0; t < row.size(); ++t) {
      const ComplexMatrix& rho = row[t].rho();
      if (rho.rows() != input.n) {
        fail("cell " + cell(s, t) + " has the wrong dimension");
        continue;
      }
      const double herm = (rho - rho.adjoint()).norm();
      const double tr = rho.trace().real();
      const double min_eig = eig_hermitian(rho).eigenvalues(0);
      if (herm > kStateTol || std::abs(tr - 1) > kStateTol || min_eig < -kStateTol) {
        fail("cell " + cell(s, t) + " is not a valid state");
      }
      if (t + 1 < row.size()) {
        const double d = distance(row[t], row[t + 1]);
        rep.max_step = std::max(rep.max_step, d);
        if (d > modulus + kRowTol) fail("t-step " + std::to_string(d) + " exceeds modulus at " + cell(s, t));
      }
      if (s + 1 < sheet.rows.size() && t < sheet.rows[s + 1].size()) {
        const double d = distance(row[t], sheet.rows[s + 1][t]);
        rep.max_step = std::max(rep.max_step, d);
        if (d > modulus + kRowTol) fail("s-step " + std::to_string(d) + " exceeds modulus at " + cell(s, t));
      }
    }
    if (!row.empty()) {
      if (distance(row.front(), base) > kEndpointTol) fail("column t=0 leaves the base state at s=" + std::to_string(s));
      if (distance(row.back(), base) > kEndpointTol) fail("last column leaves the base state at s=" + std::to_string(s));
    }
  }
  if (input.samples.size() != rep.cols) {
    fail("row 0 length differs from the input loop");
  } else {
    for (std::size_t t = 0; t < rep.cols; ++t) {
      if (distance(sheet.rows.front()[t], input.samples[t]) > kRowTol) fail("row 0 differs from the input at t=" + std::to_string(t));
    }
  }
  const auto& last = sheet.rows.back();
  for (std::size_t t = 1; t < last.size(); ++t) {
    if (distance(last[t], last.front()) > kFinalRowTol) {
      fail("final row is not constant at t=" + std::to_string(t));
      break;
    }
  }
  if (dropped > 0) rep.violations.push_back("... and " + std::to_string(dropped) + " more");
  return rep;
}

}  // namespace phaselab
