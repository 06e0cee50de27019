#include <doctest.h>

#include "fixtures.hpp"
#include "phaselab/linalg.hpp"

using namespace phaselab;

namespace {

ComplexVector basis(Index n, Index i) {
  ComplexVector v = ComplexVector::Zero(n);
  v(i) = 1;
  return v;
}

/// Hermitian operator basis of M_d: diagonal units, then symmetric and antisymmetric off-diagonal pairs.
std::vector<ComplexMatrix> hermitian_basis(Index d) {
  std::vector<ComplexMatrix> out;
  for (Index i = 0; i < d; ++i) {
    for (Index j = i; j < d; ++j) {
      ComplexMatrix a = ComplexMatrix::Zero(d, d);
      if (i == j) {
        a(i, i) = 1;
        out.push_back(a);
        continue;
      }
      a(i, j) = a(j, i) = 1;
      out.push_back(a);
      ComplexMatrix b = ComplexMatrix::Zero(d, d);
      b(i, j) = cplx(0, -1);
      b(j, i) = cplx(0, 1);
      out.push_back(b);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("kron of identities and of sigma_z") {
  CHECK((kron(pauli::identity(), pauli::identity()) - ComplexMatrix::Identity(4, 4)).norm() == 0);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  CHECK((kron(pauli::z(), pauli::identity()) - expected).norm() == 0);
}

TEST_CASE("kron index convention") {
  std::mt19937_64 rng(11);
  const ComplexMatrix a = fixtures::random_matrix(rng, 2, 3), b = fixtures::random_matrix(rng, 3, 2);
  const ComplexMatrix k = kron(a, b);
  REQUIRE(k.rows() == 6);
  REQUIRE(k.cols() == 6);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j)
      for (Index r = 0; r < 3; ++r)
        for (Index c = 0; c < 2; ++c) CHECK(k(i * 3 + r, j * 2 + c) == a(i, j) * b(r, c));
}

TEST_CASE("sigma_x sigma_x flips up-up to down-down") {
  // |uu> = e_0, |dd> = e_3 in the first-site-first ordering.
  const ComplexVector out = kron(pauli::x(), pauli::x()) * basis(4, 0);
  CHECK((out - basis(4, 3)).norm() == 0);
}

TEST_CASE("kron is associative") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = fixtures::random_matrix(rng, 2, 2), b = fixtures::random_matrix(rng, 3, 2),
                        c = fixtures::random_matrix(rng, 2, 3);
    CHECK((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff() <= 1e-14 * 10);
  }
}

TEST_CASE("partial trace of a product") {
  std::mt19937_64 rng(13);
  const ComplexMatrix a = fixtures::random_matrix(rng, 2, 2), b = fixtures::random_matrix(rng, 3, 3);
  const ComplexMatrix t = kron(a, b);
  CHECK((partial_trace(t, 2, 3, Keep::left) - b.trace() * a).norm() <= 1e-12);
  CHECK((partial_trace(t, 2, 3, Keep::right) - a.trace() * b).norm() <= 1e-12);
}

TEST_CASE("partial trace defining property over a Hermitian basis") {
  std::mt19937_64 rng(14);
  for (auto [dl, dr] : {std::pair<Index, Index>{2, 2}, {2, 4}, {4, 2}, {3, 2}}) {
    const ComplexMatrix t = fixtures::random_matrix(rng, dl * dr, dl * dr);
    const ComplexMatrix s_left = partial_trace(t, dl, dr, Keep::left);
    const ComplexMatrix s_right = partial_trace(t, dl, dr, Keep::right);
    CHECK(std::abs(s_left.trace() - t.trace()) <= 1e-12);
    for (const auto& a : hermitian_basis(dl)) {
      const cplx lhs = (s_left * a).trace();
      const cplx rhs = (t * kron(a, ComplexMatrix::Identity(dr, dr))).trace();
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
    for (const auto& a : hermitian_basis(dr)) {
      const cplx lhs = (s_right * a).trace();
      const cplx rhs = (t * kron(ComplexMatrix::Identity(dl, dl), a)).trace();
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
  }
}

TEST_CASE("partial trace is linear and keeps positivity") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix p = fixtures::random_density(rng, 6), q = fixtures::random_density(rng, 6);
    const cplx alpha(0.3, -1.2), beta(-0.7, 0.4);
    const ComplexMatrix lin = partial_trace(ComplexMatrix(alpha * p + beta * q), 2, 3, Keep::left);
    CHECK((lin - alpha * partial_trace(p, 2, 3, Keep::left) - beta * partial_trace(q, 2, 3, Keep::left)).norm() <=
          1e-12);
    CHECK(eig_hermitian(partial_trace(p, 2, 3, Keep::right)).eigenvalues(0) >= -1e-12);
  }
}

TEST_CASE("partial trace rejects a dimension mismatch") {
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(4, 4), 2, 3, Keep::left), DimensionError);
}

TEST_CASE("embedded operators") {
  const ChainLayout two = ChainLayout::qubits(2);
  CHECK((embed_site_operator(pauli::z(), 0, two) - kron(pauli::z(), pauli::identity())).norm() == 0);
  const ChainLayout three = ChainLayout::qubits(3);
  for (std::size_t site = 0; site < 3; ++site) {
    CHECK((embed_site_operator(pauli::identity(), site, three) - ComplexMatrix::Identity(8, 8)).norm() == 0);
  }
  const ComplexMatrix c = commutator(embed_site_operator(pauli::x(), 0, two), embed_site_operator(pauli::y(), 1, two));
  CHECK(c.cwiseAbs().maxCoeff() == 0);
  CHECK_THROWS_AS(embed_site_operator(pauli::x(), 3, three), DimensionError);
  CHECK_THROWS_AS(embed_site_operator(ComplexMatrix::Identity(3, 3), 0, three), DimensionError);
  CHECK_THROWS_AS(ChainLayout({2, 1}), DimensionError);
}

TEST_CASE("operators at distinct sites commute") {
  std::mt19937_64 rng(16);
  const ChainLayout layout({2, 3, 2});
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = embed_site_operator(fixtures::random_matrix(rng, 2, 2), 0, layout);
    const ComplexMatrix b = embed_site_operator(fixtures::random_matrix(rng, 3, 3), 1, layout);
    CHECK(commutator(a, b).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("Hermitian eigensolver") {
  const auto z = eig_hermitian(pauli::z());
  CHECK(z.eigenvalues(0) == doctest::Approx(-1));
  CHECK(z.eigenvalues(1) == doctest::Approx(1));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = eig_hermitian(pauli::dot(fixtures::random_direction(rng)));
    CHECK(r.eigenvalues(0) == doctest::Approx(-1).epsilon(1e-12));
    CHECK(r.eigenvalues(1) == doctest::Approx(1).epsilon(1e-12));
  }

  const ComplexMatrix heis =
      kron(pauli::x(), pauli::x()) + kron(pauli::y(), pauli::y()) + kron(pauli::z(), pauli::z());
  const auto h = eig_hermitian(heis);
  CHECK(h.eigenvalues(0) == doctest::Approx(-3));
  for (int i = 1; i < 4; ++i) CHECK(h.eigenvalues(i) == doctest::Approx(1));
}

TEST_CASE("eigensolver residuals, orthonormality and reconstruction") {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = fixtures::random_hermitian(rng, 8);
    const auto e = eig_hermitian(h);
    const double scale = h.norm();
    for (Index i = 0; i < 8; ++i) {
      CHECK((h * e.eigenvectors.col(i) - e.eigenvalues(i) * e.eigenvectors.col(i)).norm() <= 1e-10 * scale);
      if (i > 0) CHECK(e.eigenvalues(i) >= e.eigenvalues(i - 1));
    }
    CHECK((e.eigenvectors.adjoint() * e.eigenvectors - ComplexMatrix::Identity(8, 8)).norm() <= 1e-10);
    const ComplexMatrix rebuilt = e.eigenvectors * e.eigenvalues.cast<cplx>().asDiagonal() * e.eigenvectors.adjoint();
    CHECK((rebuilt - h).norm() <= 1e-9 * scale);
  }
}

TEST_CASE("eigensolver rejects non-Hermitian input") {
  CHECK_THROWS_AS(eig_hermitian(pauli::plus()), DomainError);
}

TEST_CASE("trace norm") {
  CHECK(trace_norm(ComplexMatrix::Zero(3, 3)) == 0);
  std::mt19937_64 rng(19);
  CHECK(trace_norm(fixtures::random_density(rng, 5)) == doctest::Approx(1).epsilon(1e-12));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << 1, -1;
  CHECK(trace_norm(d) == doctest::Approx(2));
}
