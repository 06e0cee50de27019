#pragma once

// Seeded random inputs shared by the unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "phaselab/homotopy.hpp"
#include "phaselab/linalg.hpp"

namespace fixtures {

using namespace phaselab;

inline ComplexVector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  ComplexVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

inline ComplexVector random_unit(std::mt19937_64& rng, Index n) { return random_vector(rng, n).normalized(); }

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Index r, Index c) {
  std::normal_distribution<double> g;
  ComplexMatrix m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Index n) {
  const ComplexMatrix a = random_matrix(rng, n, n);
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix random_density(std::mt19937_64& rng, Index n) {
  const ComplexMatrix a = random_matrix(rng, n, n);
  ComplexMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, Index n) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Eigen::MatrixXcd(random_matrix(rng, n, n)));
  return ComplexMatrix(qr.householderQ());
}

inline Eigen::Vector3d random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d r(g(rng), g(rng), g(rng));
  return r.normalized();
}

/**
 *  Smooth based loop: a Fourier-perturbed pure vector starting at e_0,
 *  mixed with 1/n by weight mix * sin^2(pi t). Sampled finely enough that
 *  adjacent trace distances stay within max_step.
 */
inline StateLoop random_loop(std::mt19937_64& rng, Index n, int modes, double amplitude, double mix,
                             double max_step = 0.02) {
  std::vector<ComplexVector> c, d;
  for (int k = 0; k < modes; ++k) {
    c.push_back(amplitude * random_vector(rng, n));
    d.push_back(amplitude * random_vector(rng, n));
  }
  const auto sample = [&](double t) {
    ComplexVector v = ComplexVector::Zero(n);
    v(0) = 1;
    for (int k = 0; k < modes; ++k) {
      const double w = 2 * std::numbers::pi * (k + 1) * t;
      v += (1 - std::cos(w)) * c[std::size_t(k)] + std::sin(w) * d[std::size_t(k)];
    }
    const double p = mix * std::pow(std::sin(std::numbers::pi * t), 2);
    ComplexMatrix rho = (1 - p) * v * v.adjoint() / v.squaredNorm() + p * ComplexMatrix::Identity(n, n) / double(n);
    return DensityState(ComplexMatrix((rho + rho.adjoint()) / 2.0));
  };
  for (int samples = 64;; samples *= 2) {
    StateLoop loop;
    loop.n = n;
    for (int i = 0; i <= samples; ++i) loop.samples.push_back(sample(double(i) / samples));
    loop.samples.back() = loop.samples.front();
    if (loop.modulus() <= max_step) return loop;
  }
}

}  // namespace fixtures
